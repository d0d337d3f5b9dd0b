"""Sample points meeting every connected component of sign-condition sets.

All four modes share one skeleton: after a random linear change of
variables x -> M x, for every level k = 1..n-1 the first k-1 coordinates
are fixed to p_1..p_{k-1}, and for every admissible subset S of the
polynomials the critical points of x_k on {f_S = 0} are computed by an
exact deformation. The line {x_1 = p_1, ..., x_{n-1} = p_{n-1}} and the
point p itself are added at the end. Everything is mapped back to the
original coordinates.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field, replace

from flint import fmpq, fmpq_poly

from .errors import BadRandomness, InvalidSystem
from .exact.linalg import determinant
from .exact.poly import squarefree_part
from .errors import BadAlpha
from .homotopy import ALPHA_BOUND, ALPHA_TRIES, assemble, solve_deformation, specialize_and_extract
from .resolution import GeometricResolution
from .signs import isolate_real_roots, perturbation_witnesses
from .slp import compose_linear, densify, jacobian, substitute_prefix, total_degrees
from .systems import build_lagrange, build_type1, build_type2

log = logging.getLogger(__name__)

MODES = ("regular", "closed", "bivariate", "single")


@dataclass
class SamplerConfig:
    mode: str = "regular"
    seed: int = 0
    coeff_bound: int = 2 ** 16
    alpha_bound: int = ALPHA_BOUND
    max_retries: int = ALPHA_TRIES
    sigma: str | None = None
    shuffle_tasks: int | None = None
    interior_witnesses: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SamplePointSet:
    n: int
    mode: str
    seed: int
    change_of_variables: list
    point: list
    resolutions: list = field(default_factory=list)

    def total_points(self):
        return sum(r.degree for r in self.resolutions)


def random_change_of_variables(n, rng, bound=2 ** 16, tries=64):
    """Invertible integer matrix with entries uniform in [-bound, bound]."""
    for _ in range(tries):
        M = [[fmpq(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if determinant(M) != 0:
            return M
    raise BadRandomness(f"no invertible matrix with entries bounded by {bound}")


def random_point(n, rng, bound=2 ** 16):
    return [fmpq(rng.randint(-bound, bound)) for _ in range(n)]


def parse_sigma(sigma, m):
    """Sigma pattern over '<', '=', '>', '*' (closed mode reads < and > as <= and >=)."""
    if sigma is None:
        return None
    sigma = sigma.replace("<=", "<").replace(">=", ">")
    if len(sigma) != m or any(c not in "<=>*" for c in sigma):
        raise ValueError(f"sigma must be {m} characters over '<', '=', '>', '*'")
    return sigma


def _is_zero_program(program):
    return all(f.is_zero() for f in densify(program))


def _tasks(mode, n, m, sigma):
    """(level, subset, signs) triples in canonical order."""
    out = []
    if m == 0:
        return out
    for k in range(1, n):
        n_eff = n - k + 1
        if mode == "single":
            out.append((k, (1,), (1,)))
            continue
        for s in range(1, min(n_eff, m) + 1):
            for S in itertools.combinations(range(1, m + 1), s):
                if mode in ("regular", "bivariate"):
                    if sigma and any(sigma[i] == "=" and (i + 1) not in S for i in range(m)):
                        continue
                    out.append((k, S, ()))
                else:
                    choices = []
                    for i in S:
                        c = sigma[i - 1] if sigma else "*"
                        choices.append((1,) if c == ">" else (-1,) if c == "<" else (1, -1))
                    for tau in itertools.product(*choices):
                        out.append((k, S, tau))
    return out


def _task_rng(seed, task):
    k, S, tau = task
    return random.Random(f"{seed}:{k}:{','.join(map(str, S))}:{''.join('+' if t > 0 else '-' for t in tau)}")


def _provenance(task):
    k, S, tau = task
    prov = {"kind": "critical", "level": k, "subset": list(S)}
    if tau:
        prov["signs"] = "".join("+" if t > 0 else "-" for t in tau)
    return prov


def _even_degree(degrees):
    d = max(2, max(degrees, default=2))
    return d + (d % 2)


INTERIOR_STEPS = tuple(fmpq(1, 2 ** j) for j in range(2, 33, 3))


def _interior(cp):
    """Real solutions of the deformed system at a small parameter value.

    For the single-polynomial deformation these lie where f < 0. Among a
    few values of t the one with the most real solutions is kept (ties go
    to the larger t).
    """
    best, best_count = None, 0
    for t0 in INTERIOR_STEPS:
        try:
            res = specialize_and_extract(cp, t0)
        except BadAlpha:
            continue
        count = len(isolate_real_roots(res.q)) if not res.is_empty() else 0
        if count > best_count:
            best, best_count = (t0, res), count
            if count == res.degree:
                break
    return best


def _minor(rows, cols, q):
    """Determinant of the selected columns by Laplace expansion, mod q."""
    if len(rows) == 1:
        return rows[0][cols[0]]
    acc = fmpq_poly([])
    for j, c in enumerate(cols):
        sub = _minor([r for r in rows[1:]], cols[:j] + cols[j + 1:], q)
        term = (rows[0][c] * sub) % q
        acc = acc - term if j % 2 else acc + term
    return acc % q


def regularity_warnings(points, family):
    """Best-effort check of the regularity assumption of regular mode.

    At the real critical points found for a subset S, the gradients of f_S
    should be linearly independent; every maximal minor vanishing at a real
    root means they are not there. Nothing is certified: only the points
    found during the run are examined. Returns one message per offender.
    """
    out = []
    for r, res in enumerate(points.resolutions):
        prov = res.provenance
        if prov.get("kind") != "critical" or res.is_empty():
            continue
        S = [i - 1 for i in prov["subset"]]
        s, n = len(S), points.n
        vals = res.compose(jacobian(family.select(S)))
        grads = [vals[s + i * n: s + (i + 1) * n] for i in range(s)]
        g = res.q
        for cols in itertools.combinations(range(n), s):
            g = g.gcd(_minor(grads, list(cols), res.q))
            if g.degree() < 1:
                break
        if g.degree() >= 1 and isolate_real_roots(g):
            msg = f"gradients of {sorted(prov['subset'])} are dependent at a real point of resolution {r} ({prov})"
            log.warning(msg)
            out.append(msg)
    return out


def _levels(transformed, p, n):
    return {k: substitute_prefix(transformed, p[:k - 1]) for k in range(1, n)}


def _run(family, degrees, cfg):
    n, m = family.num_inputs, family.num_outputs
    if degrees is None:
        degrees = total_degrees(family)
    degrees = [max(1, int(d)) for d in degrees]
    if len(degrees) != m:
        raise ValueError("one degree bound per polynomial is required")
    mode = cfg.mode
    if mode == "bivariate" and n != 2:
        raise InvalidSystem("bivariate mode needs exactly two variables")
    if mode == "single" and m != 1:
        raise InvalidSystem("single mode needs exactly one polynomial")
    sigma = parse_sigma(cfg.sigma, m)
    rng = random.Random(cfg.seed)
    d_even = _even_degree(degrees)
    for _ in range(cfg.max_retries):
        M = random_change_of_variables(n, rng, cfg.coeff_bound)
        transformed = compose_linear(family, M)
        p = [fmpq(0)] * n if mode == "closed" else random_point(n, rng, cfg.coeff_bound)
        levels = _levels(transformed, p, n)
        line = substitute_prefix(transformed, p[:n - 1])
        if any(_is_zero_program(line.select([i])) for i in range(m)):
            log.info("degenerate random choice, redrawing")
            continue
        if any(_is_zero_program(prog.select([i])) for prog in levels.values() for i in range(m)):
            log.info("degenerate random choice, redrawing")
            continue
        break
    else:
        raise BadRandomness("every random change of variables was degenerate")

    tasks = _tasks(mode, n, m, sigma)
    order = list(range(len(tasks)))
    if cfg.shuffle_tasks is not None:
        random.Random(cfg.shuffle_tasks).shuffle(order)
    results = {}
    for idx in order:
        task = tasks[idx]
        k, S, tau = task
        lag = build_lagrange(levels[k], S, degrees)
        if mode in ("regular", "bivariate"):
            init = build_type1(lag)
        else:
            init = build_type2(lag, d_even, tau)
        problem = assemble(lag, init, rng=_task_rng(cfg.seed, task))
        stats = {}
        local = solve_deformation(problem, _task_rng(cfg.seed, task), cfg.alpha_bound, cfg.max_retries, stats)
        res = local.with_prefix(p[:k - 1]).map_linear(M)
        res.provenance = _provenance(task)
        found = [res]
        if mode == "single" and cfg.interior_witnesses:
            hit = _interior(stats["charpoly"])
            if hit is not None:
                t0, inner = hit
                inner = inner.with_prefix(p[:k - 1]).map_linear(M)
                inner.provenance = {"kind": "interior", "level": k, "t": str(t0)}
                found.append(inner)
        results[idx] = found
        log.debug("task %s: %d points", task, res.degree)

    out = [r for i in range(len(tasks)) for r in results[i]]
    U = fmpq_poly([0, 1])
    for i in range(m):
        u = line.select([i]).eval([U])[0]
        if not isinstance(u, fmpq_poly):
            u = fmpq_poly([u])
        coords = [fmpq_poly([c]) for c in p[:n - 1]] + [U]
        if u.degree() >= 1:
            res = GeometricResolution.from_parametrization(squarefree_part(u), coords)
        else:
            res = GeometricResolution.empty(n)
        res = res.map_linear(M)
        res.provenance = {"kind": "line", "poly": i + 1}
        out.append(res)
    pt = GeometricResolution.point(p).map_linear(M)
    pt.provenance = {"kind": "point"}
    out.append(pt)
    points = SamplePointSet(n, mode, cfg.seed, M, p, out)
    if mode == "regular":
        regularity_warnings(points, family)
    if mode == "bivariate":
        # no regularity is assumed here, so strict conditions next to the
        # boundary points get explicit rational witnesses instead
        for _, res in perturbation_witnesses(points, family, seed=cfg.seed):
            res.provenance = {"kind": "perturbation"}
            points.resolutions.append(res)
    return points


def run_regular(family, degrees=None, cfg=None):
    """Points meeting the closure of every component of each feasible strict condition."""
    cfg = replace(cfg or SamplerConfig(), mode="regular")
    return _run(family, degrees, cfg)


def run_closed(family, degrees=None, cfg=None):
    """Points meeting every component of each feasible closed condition."""
    cfg = replace(cfg or SamplerConfig(), mode="closed")
    return _run(family, degrees, cfg)


def run_bivariate(family, degrees=None, cfg=None):
    """Two-variable version of the regular mode with no regularity assumption."""
    cfg = replace(cfg or SamplerConfig(), mode="bivariate")
    return _run(family, degrees, cfg)


def run_single(family, degrees=None, cfg=None):
    """One polynomial: points in the closure of each component of f<0, f=0, f>0."""
    cfg = replace(cfg or SamplerConfig(), mode="single")
    return _run(family, degrees, cfg)


def run(family, degrees=None, cfg=None):
    cfg = cfg or SamplerConfig()
    return {"regular": run_regular, "closed": run_closed, "bivariate": run_bivariate,
            "single": run_single}[cfg.mode](family, degrees, cfg)
