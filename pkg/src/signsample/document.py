"""Exact, diffable text documents for sample point sets and sign conditions.

The document is JSON with a fixed key order. Every rational is a decimal
string "p" or "p/q"; polynomials are coefficient lists from degree 0 up.
"""

import json

from .errors import ParseError
from .exact.poly import rational_str, to_rational
from .resolution import GeometricResolution
from .sampler import SamplePointSet
from .signs import CLOSED, CLOSED_SYMBOLS, STRICT, STRICT_SYMBOLS, SignCondition

FORMAT = "signsample-certificate/1"


def _condition_dict(c):
    return {
        "signs": c.render(),
        "witnessed": bool(c.witnesses),
        "derived": c.derived,
        "witnesses": [list(w) for w in c.witnesses],
    }


def to_document(points, conditions=None, inputs=None, verification=None):
    """Build the document as a plain dict (key order is part of the format)."""
    doc = {"format": FORMAT}
    if inputs:
        doc["input"] = dict(inputs)
    doc["mode"] = points.mode
    doc["seed"] = points.seed
    doc["n"] = points.n
    doc["change_of_variables"] = [[rational_str(c) for c in row] for row in points.change_of_variables]
    doc["point"] = [rational_str(c) for c in points.point]
    doc["resolutions"] = [r.to_dict() for r in points.resolutions]
    if conditions is not None:
        kind = CLOSED if points.mode == "closed" else STRICT
        doc["conditions"] = {"kind": kind, "list": [_condition_dict(c) for c in conditions]}
    if verification is not None:
        doc["verification"] = verification
    return doc


def _format(obj, level=0):
    """JSON with one key per line; lists of scalars stay on one line."""
    pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_format(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return json.dumps(obj)
        if all(isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v) for v in obj) \
                and sum(len(v) for v in obj) <= 8:
            return json.dumps(obj)
        items = [pad + _format(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(obj)


def dumps(points, conditions=None, inputs=None, verification=None):
    return _format(to_document(points, conditions, inputs, verification)) + "\n"


def _parse_signs(text, kind):
    if kind == STRICT:
        table = {v: k for k, v in STRICT_SYMBOLS.items()}
        return tuple(table[ch] for ch in text)
    table = {v: k for k, v in CLOSED_SYMBOLS.items()}
    return tuple(table[tok] for tok in text.split())


def from_document(doc):
    """Inverse of to_document: (SamplePointSet, conditions or None)."""
    try:
        if doc.get("format") != FORMAT:
            raise ParseError(f"unknown document format {doc.get('format')!r}")
        M = [[to_rational(c) for c in row] for row in doc["change_of_variables"]]
        p = [to_rational(c) for c in doc["point"]]
        res = [GeometricResolution.from_dict(r) for r in doc["resolutions"]]
        points = SamplePointSet(doc["n"], doc["mode"], doc["seed"], M, p, res)
        conditions = None
        if "conditions" in doc:
            kind = doc["conditions"]["kind"]
            conditions = [
                SignCondition(kind, _parse_signs(c["signs"], kind),
                              [tuple(w) for w in c["witnesses"]], c["derived"])
                for c in doc["conditions"]["list"]
            ]
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed document: {exc}") from exc
    return points, conditions


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed document: {exc.msg}", exc.pos) from exc
    if not isinstance(doc, dict):
        raise ParseError("document must be an object")
    return from_document(doc)
