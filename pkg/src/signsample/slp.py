"""Straight-line programs: division-free arithmetic circuits.

An ``Slp`` is a list of instructions evaluated in order. Each instruction is
one of ``("const", c)``, ``("input", i)``, ``("add", j, k)``, ``("sub", j, k)``
or ``("mul", j, k)`` where ``j, k`` refer to earlier instructions. Programs
are evaluated over any commutative ring whose elements support ``+ - *``
with rationals.
"""

import re

import flint
from flint import fmpq

from .errors import ParseError
from .exact.poly import to_rational


class Slp:
    __slots__ = ("num_inputs", "instructions", "outputs")

    def __init__(self, num_inputs, instructions, outputs):
        self.num_inputs = num_inputs
        self.instructions = tuple(instructions)
        self.outputs = tuple(outputs)
        for idx, ins in enumerate(self.instructions):
            op = ins[0]
            if op in ("add", "sub", "mul"):
                if not (0 <= ins[1] < idx and 0 <= ins[2] < idx):
                    raise ValueError(f"instruction {idx} refers forward")
            elif op == "input":
                if not 0 <= ins[1] < num_inputs:
                    raise ValueError(f"input index {ins[1]} out of range")
            elif op != "const":
                raise ValueError(f"unknown instruction {op!r}")
        for o in self.outputs:
            if not 0 <= o < len(self.instructions):
                raise ValueError("output refers to a missing instruction")

    @property
    def num_outputs(self):
        return len(self.outputs)

    def __len__(self):
        return len(self.instructions)

    def eval(self, point):
        """Evaluate all outputs at ``point`` (a sequence of ring elements)."""
        if len(point) != self.num_inputs:
            raise ValueError(f"expected {self.num_inputs} inputs, got {len(point)}")
        vals = []
        push = vals.append
        for ins in self.instructions:
            op = ins[0]
            if op == "mul":
                push(vals[ins[1]] * vals[ins[2]])
            elif op == "add":
                push(vals[ins[1]] + vals[ins[2]])
            elif op == "sub":
                push(vals[ins[1]] - vals[ins[2]])
            elif op == "const":
                push(ins[1])
            else:
                push(point[ins[1]])
        return [vals[o] for o in self.outputs]

    def select(self, indices):
        """Same program restricted to some outputs."""
        return Slp(self.num_inputs, self.instructions, [self.outputs[i] for i in indices])

    def __repr__(self):
        return f"Slp(inputs={self.num_inputs}, length={len(self)}, outputs={self.num_outputs})"


class Builder:
    """Incremental Slp construction with constant folding and sharing."""

    def __init__(self, num_inputs):
        self.num_inputs = num_inputs
        self.instructions = []
        self.consts = {}
        self.memo = {}

    def _push(self, ins):
        key = ins if ins[0] != "const" else None
        if key is not None and key in self.memo:
            return self.memo[key]
        self.instructions.append(ins)
        idx = len(self.instructions) - 1
        if key is not None:
            self.memo[key] = idx
        return idx

    def const(self, c):
        c = to_rational(c)
        key = (int(c.p), int(c.q))
        if key in self.memo:
            return self.memo[key]
        idx = len(self.instructions)
        self.instructions.append(("const", c))
        self.memo[key] = idx
        self.consts[idx] = c
        return idx

    def input(self, i):
        if not 0 <= i < self.num_inputs:
            raise ValueError(f"input index {i} out of range")
        return self._push(("input", i))

    def value(self, node):
        return self.consts.get(node)

    def add(self, a, b):
        ca, cb = self.consts.get(a), self.consts.get(b)
        if ca is not None and cb is not None:
            return self.const(ca + cb)
        if ca == 0:
            return b
        if cb == 0:
            return a
        return self._push(("add", min(a, b), max(a, b)))

    def sub(self, a, b):
        ca, cb = self.consts.get(a), self.consts.get(b)
        if ca is not None and cb is not None:
            return self.const(ca - cb)
        if cb == 0:
            return a
        if a == b:
            return self.const(0)
        return self._push(("sub", a, b))

    def mul(self, a, b):
        ca, cb = self.consts.get(a), self.consts.get(b)
        if ca is not None and cb is not None:
            return self.const(ca * cb)
        if ca == 0 or cb == 0:
            return self.const(0)
        if ca == 1:
            return b
        if cb == 1:
            return a
        return self._push(("mul", min(a, b), max(a, b)))

    def neg(self, a):
        return self.sub(self.const(0), a)

    def scale(self, c, a):
        return self.mul(self.const(c), a)

    def pow(self, a, e):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.const(1)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def sum(self, nodes):
        acc = self.const(0)
        for n in nodes:
            acc = self.add(acc, n)
        return acc

    def product(self, nodes):
        acc = self.const(1)
        for n in nodes:
            acc = self.mul(acc, n)
        return acc

    def linear(self, coeffs, nodes, constant=0):
        terms = [self.scale(c, n) for c, n in zip(coeffs, nodes) if c != 0]
        return self.add(self.sum(terms), self.const(constant))

    def inline(self, slp, input_nodes, full=False):
        """Copy ``slp`` with its inputs bound to existing nodes.

        Returns the output nodes, or the node map of every instruction when
        ``full`` is set.
        """
        if len(input_nodes) != slp.num_inputs:
            raise ValueError("wrong number of input nodes")
        nodes = []
        for ins in slp.instructions:
            op = ins[0]
            if op == "const":
                nodes.append(self.const(ins[1]))
            elif op == "input":
                nodes.append(input_nodes[ins[1]])
            elif op == "add":
                nodes.append(self.add(nodes[ins[1]], nodes[ins[2]]))
            elif op == "sub":
                nodes.append(self.sub(nodes[ins[1]], nodes[ins[2]]))
            else:
                nodes.append(self.mul(nodes[ins[1]], nodes[ins[2]]))
        if full:
            return nodes
        return [nodes[o] for o in slp.outputs]

    def adjoints(self, slp, node_map, output_index):
        """Reverse-mode sweep; returns the adjoint node of each input of ``slp``."""
        adj = {slp.outputs[output_index]: self.const(1)}
        grads = [self.const(0)] * slp.num_inputs
        for idx in range(len(slp.instructions) - 1, -1, -1):
            a = adj.pop(idx, None)
            if a is None or self.consts.get(a) == 0:
                continue
            ins = slp.instructions[idx]
            op = ins[0]
            if op == "input":
                grads[ins[1]] = self.add(grads[ins[1]], a)
                continue
            if op == "const":
                continue
            j, k = ins[1], ins[2]
            if op == "add":
                contrib = ((j, a), (k, a))
            elif op == "sub":
                contrib = ((j, a), (k, self.neg(a)))
            else:
                contrib = ((j, self.mul(a, node_map[k])), (k, self.mul(a, node_map[j])))
            for target, v in contrib:
                adj[target] = v if target not in adj else self.add(adj[target], v)
        return grads

    def build(self, outputs, prune=True):
        if not prune:
            return Slp(self.num_inputs, self.instructions, outputs)
        live = set(outputs)
        for idx in range(len(self.instructions) - 1, -1, -1):
            if idx in live and self.instructions[idx][0] in ("add", "sub", "mul"):
                live.add(self.instructions[idx][1])
                live.add(self.instructions[idx][2])
        remap = {}
        instrs = []
        for idx, ins in enumerate(self.instructions):
            if idx not in live:
                continue
            if ins[0] in ("add", "sub", "mul"):
                ins = (ins[0], remap[ins[1]], remap[ins[2]])
            remap[idx] = len(instrs)
            instrs.append(ins)
        return Slp(self.num_inputs, instrs, [remap[o] for o in outputs])


def gradient(p, output_index=0):
    """Slp emitting the partial derivatives of one output w.r.t. every input."""
    b = Builder(p.num_inputs)
    nodes = b.inline(p, [b.input(i) for i in range(p.num_inputs)], full=True)
    return b.build(b.adjoints(p, nodes, output_index))


def jacobian(p, wrt=None):
    """Slp emitting the outputs followed by the Jacobian, row-major.

    ``wrt`` lists the input indices to differentiate against (default: all).
    """
    wrt = list(range(p.num_inputs)) if wrt is None else list(wrt)
    b = Builder(p.num_inputs)
    nodes = b.inline(p, [b.input(i) for i in range(p.num_inputs)], full=True)
    outs = [nodes[o] for o in p.outputs]
    for r in range(p.num_outputs):
        grads = b.adjoints(p, nodes, r)
        outs.extend(grads[i] for i in wrt)
    return b.build(outs)


def compose_linear(p, M):
    """Slp for x -> p(M x) with M an n x n rational matrix."""
    n = p.num_inputs
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError("matrix size does not match the number of inputs")
    b = Builder(n)
    xs = [b.input(i) for i in range(n)]
    ys = [b.linear(row, xs) for row in M]
    return b.build(b.inline(p, ys))


def substitute_prefix(p, values):
    """Fix the first len(values) inputs to rational constants."""
    k = len(values)
    if k > p.num_inputs:
        raise ValueError("too many values")
    b = Builder(p.num_inputs - k)
    args = [b.const(v) for v in values] + [b.input(i) for i in range(p.num_inputs - k)]
    return b.build(b.inline(p, args))


def concat(programs):
    """One Slp computing the outputs of several programs on shared inputs."""
    n = programs[0].num_inputs
    if any(q.num_inputs != n for q in programs):
        raise ValueError("programs disagree on the number of inputs")
    b = Builder(n)
    xs = [b.input(i) for i in range(n)]
    outs = []
    for q in programs:
        outs.extend(b.inline(q, xs))
    return b.build(outs)


def poly_context(n, names=None):
    names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(n))
    return flint.fmpq_mpoly_ctx.get(names, "lex")


def densify(p, names=None):
    """Expand every output to a flint multivariate polynomial."""
    ctx = poly_context(p.num_inputs, names)
    gens = list(ctx.gens()) if p.num_inputs else []
    one = ctx.from_dict({}) + 1 if p.num_inputs else fmpq(1)
    vals = p.eval([g * one for g in gens])
    return [v if not isinstance(v, fmpq) else ctx.constant(v) for v in vals]


def total_degrees(p):
    out = []
    for f in densify(p):
        out.append(-1 if f.is_zero() else f.total_degree())
    return out


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, builder):
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = {name: idx for idx, name in enumerate(variables)}
        self.b = builder

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = self.b.add(node, rhs) if op == "+" else self.b.sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                node = self.b.mul(node, rhs)
            else:
                c = self.b.value(rhs)
                if c is None:
                    raise ParseError("division is only allowed by a constant", pos)
                if c == 0:
                    raise ParseError("division by zero", pos)
                node = self.b.mul(node, self.b.const(1 / c))
        return node

    def unary(self):
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            return self.b.neg(self.unary())
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            tok = self.peek()
            if tok[1] == "(":
                self.take()
                exp_tok = self.take()
                self.expect(")")
            else:
                exp_tok = self.take()
            if exp_tok[0] != "num" or not exp_tok[1].isdigit():
                raise ParseError("exponent must be a nonnegative integer", exp_tok[2])
            return self.b.pow(base, int(exp_tok[1]))
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return self.b.const(to_rational(value))
        if kind == "name":
            if value not in self.vars:
                raise ParseError(f"unknown variable {value!r}", pos)
            return self.b.input(self.vars[value])
        if value == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse(text, variables):
    """Parse one polynomial expression into a single-output Slp."""
    return parse_system([text], variables)


def parse_system(texts, variables):
    """Parse several expressions into one Slp with shared subexpressions."""
    variables = list(variables)
    if len(set(variables)) != len(variables):
        raise ParseError("duplicate variable names")
    b = Builder(len(variables))
    outs = []
    for text in texts:
        try:
            outs.append(_Parser(text, variables, b).parse())
        except ParseError as exc:
            raise ParseError(f"in {text!r}: {exc.reason}", exc.position) from None
    return b.build(outs)


_VAR_ORDER = re.compile(r"([A-Za-z_]+)(\d*)")


def infer_variables(texts):
    """Variable names used in the expressions, in natural order (x2 < x10)."""
    names = set()
    for text in texts:
        for kind, value, _ in _tokenize(text):
            if kind == "name":
                names.add(value)

    def key(name):
        m = _VAR_ORDER.fullmatch(name)
        if m and m.group(2):
            return (m.group(1), int(m.group(2)), name)
        return (name, -1, name)

    return sorted(names, key=key)
