import random

import pytest
from flint import fmpq, fmpq_poly

from corpus import ANNULUS
from signsample import document
from signsample.errors import InvalidSystem
from signsample.exact.linalg import determinant, inverse
from signsample.sampler import (
    SamplerConfig,
    _tasks,
    parse_sigma,
    random_change_of_variables,
    random_point,
    regularity_warnings,
    run,
    run_bivariate,
    run_closed,
    run_regular,
    run_single,
)
from signsample.signs import CLOSED, expand_equalities, isolate_real_roots, list_conditions, sign_matrix
from signsample.slp import parse_system

X2 = ["x1", "x2"]
X3 = ["x1", "x2", "x3"]


def internal_coords(points, res):
    """Parametrization of y = M^-1 x as residues modulo q."""
    Minv = inverse(points.change_of_variables)
    v = [p.rep for p in res.parametrization()]
    out = []
    for row in Minv:
        acc = fmpq_poly([])
        for c, vk in zip(row, v):
            acc += vk * c
        out.append(acc % res.q)
    return out


def strict_signs(points, fam, expand=False):
    conds = list_conditions(points, fam)
    if expand:
        conds = expand_equalities(conds)
    return {c.render() for c in conds}


def test_circle_regular():
    fam = parse_system(["x1^2 + x2^2 - 1"], X2)
    pts = run_regular(fam, cfg=SamplerConfig(seed=3))
    crit = [r for r in pts.resolutions if r.provenance.get("kind") == "critical"]
    assert len(crit) == 1 and crit[0].degree == 2
    assert crit[0].compose(fam) == [0]
    assert len(isolate_real_roots(crit[0].q)) == 2
    assert [r.provenance["kind"] for r in pts.resolutions] == ["critical", "line", "point"]
    assert strict_signs(pts, fam, expand=True) == {"-", "0", "+"}


def test_no_polynomials_gives_the_point():
    pts = run(parse_system([], X2), cfg=SamplerConfig(seed=1))
    assert len(pts.resolutions) == 1 and pts.resolutions[0].provenance == {"kind": "point"}
    assert [v.rep for v in pts.resolutions[0].parametrization()] == [
        fmpq_poly([c]) for c in (pts.change_of_variables[i][0] * pts.point[0] + pts.change_of_variables[i][1] * pts.point[1]
                                 for i in range(2))]


def test_constant_single_mode():
    fam = parse_system(["3"], X2)
    pts = run_single(fam, cfg=SamplerConfig(seed=2))
    assert strict_signs(pts, fam) == {"+"}


def test_mode_preconditions():
    with pytest.raises(InvalidSystem):
        run_bivariate(parse_system(["x1 + x2 + x3"], X3))
    with pytest.raises(InvalidSystem):
        run_single(parse_system(["x1", "x2"], X2))
    with pytest.raises(ValueError):
        SamplerConfig(mode="fast")
    with pytest.raises(ValueError):
        parse_sigma("<>", 3)
    assert parse_sigma("<=*", 2) == "<*"


def test_random_choices():
    rng = random.Random(5)
    M = random_change_of_variables(3, rng)
    assert determinant(M) != 0
    assert all(-2 ** 16 <= c <= 2 ** 16 for row in M for c in row)
    a = random_change_of_variables(3, random.Random(9)), random_point(3, random.Random(9))
    b = random_change_of_variables(3, random.Random(9)), random_point(3, random.Random(9))
    assert a == b


def test_task_enumeration():
    tasks = _tasks("regular", 3, 2, None)
    assert [(k, S) for k, S, _ in tasks] == [(1, (1,)), (1, (2,)), (1, (1, 2)), (2, (1,)), (2, (2,)), (2, (1, 2))]
    closed = _tasks("closed", 2, 2, None)
    assert len(closed) == 2 + 2 + 4
    assert [t for t in _tasks("regular", 2, 2, "=*")] == [(1, (1,), ()), (1, (1, 2), ())]
    assert [t[2] for t in _tasks("closed", 2, 1, ">")] == [(1,)]
    assert _tasks("single", 3, 1, None) == [(1, (1,), (1,)), (2, (1,), (1,))]


def test_prefix_invariant():
    fam = parse_system(["x1^2 + 2*x2^2 + x3^2 - 1", "x1 + x2 - x3"], X3)
    pts = run_regular(fam, cfg=SamplerConfig(seed=4))
    for res in pts.resolutions:
        if res.provenance.get("level") == 2 and not res.is_empty():
            y = internal_coords(pts, res)
            assert y[0] == fmpq_poly([pts.point[0]])


def test_closed_mode_uses_origin():
    fam = parse_system(["x1^2 + x2^2 + x3^2 - 1"], X3)
    pts = run_closed(fam, cfg=SamplerConfig(seed=4))
    assert pts.point == [0, 0, 0]
    levels = [r for r in pts.resolutions if r.provenance.get("level") == 2]
    assert levels and {r.provenance["signs"] for r in levels} == {"+", "-"}
    for res in levels:
        if not res.is_empty():
            assert internal_coords(pts, res)[0] == 0


def test_closed_origin_only():
    fam = parse_system(["x1^2 + x2^2"], X2)
    pts = run_closed(fam, cfg=SamplerConfig(seed=7))
    sm = sign_matrix(pts, fam)
    assert (0,) in sm.rows.values()
    assert {c.render() for c in list_conditions(pts, fam, CLOSED)} == {"<=", "=", ">="}


def test_bivariate_conic_agrees_with_regular():
    fam = parse_system(["x1^2 + 3*x1*x2 + 5*x2^2 - x1 - 2"], X2)
    reg = run_regular(fam, cfg=SamplerConfig(seed=1))
    biv = run_bivariate(fam, cfg=SamplerConfig(seed=1))
    assert strict_signs(reg, fam, expand=True) == strict_signs(biv, fam) == {"-", "0", "+"}


def test_bivariate_non_reduced_circle_is_sound():
    fam = parse_system(["(x1^2 + x2^2 - 1)^2"], X2)
    pts = run_bivariate(fam, cfg=SamplerConfig(seed=0))
    assert strict_signs(pts, fam) == {"0", "+"}


def test_single_annulus_regions():
    fam = parse_system([ANNULUS], X2)
    pts = run_single(fam, cfg=SamplerConfig(seed=0))
    assert strict_signs(pts, fam) == {"-", "0", "+"}
    assert any(r.provenance.get("kind") == "interior" for r in pts.resolutions)


def test_seed_determinism_and_shuffled_tasks():
    fam = parse_system(["x1^2 + x2^2 - 1", "x1*x2 - 1/4"], X2)
    a = document.dumps(run_regular(fam, cfg=SamplerConfig(seed=11)))
    b = document.dumps(run_regular(fam, cfg=SamplerConfig(seed=11)))
    c = document.dumps(run_regular(fam, cfg=SamplerConfig(seed=11, shuffle_tasks=5)))
    assert a == b == c
    assert a != document.dumps(run_regular(fam, cfg=SamplerConfig(seed=12)))


def test_output_signs_match_internal_coordinates():
    fam = parse_system(["x1^2 + x2^2 - 1", "x1 - 2*x2"], X2)
    pts = run_regular(fam, cfg=SamplerConfig(seed=8))
    M = pts.change_of_variables
    transformed = parse_system([
        f"({M[0][0]}*y1 + {M[0][1]}*y2)^2 + ({M[1][0]}*y1 + {M[1][1]}*y2)^2 - 1",
        f"({M[0][0]}*y1 + {M[0][1]}*y2) - 2*({M[1][0]}*y1 + {M[1][1]}*y2)",
    ], ["y1", "y2"])
    for res in pts.resolutions:
        if res.is_empty():
            continue
        y = internal_coords(pts, res)
        vals = transformed.eval([fmpq_poly(c) for c in y])
        direct = res.compose(fam)
        assert [v % res.q for v in vals] == direct


@pytest.mark.parametrize("texts, flagged", [
    (["x1^2 + x2^2 - 1"], False),
    (["x1^2 + x2^2 - 1", "x1*x2 - 1/4"], False),
    (["(x1^2 + x2^2 - 1)^2"], True),
    (["x1^2 + x2^2 - 1", "(x1 - 2)^2 + x2^2 - 1"], True),
    (["x1^2 - x2^2"], True),
])
def test_regularity_warnings(texts, flagged, caplog):
    fam = parse_system(texts, X2)
    pts = run_regular(fam, cfg=SamplerConfig(seed=0))
    assert bool(regularity_warnings(pts, fam)) == flagged
    assert any("dependent" in r.message for r in caplog.records) == flagged
