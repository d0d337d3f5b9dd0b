from flint import arb, fmpq, fmpq_poly, fmpz_poly
from hypothesis import given
from hypothesis import strategies as st

from conftest import polys, random_poly
from signsample.resolution import GeometricResolution
from signsample.sampler import SamplePointSet
from signsample.signs import (
    CLOSED,
    STRICT,
    SignCondition,
    compose_mod,
    expand_equalities,
    isolate_real_roots,
    isolate_to_width,
    list_conditions,
    perturbation_witnesses,
    sign_matrix,
    signs_at_roots,
    tarski_query,
)
from signsample.exact import squarefree_part
from signsample.slp import parse_system

U = fmpq_poly([0, 1])


def point_set(resolutions, n=2):
    return SamplePointSet(n, "regular", 0, [[1, 0], [0, 1]], [0, 0], list(resolutions))


def float_roots(q):
    """Real roots by flint's complex root finder (independent of Sturm)."""
    z = fmpz_poly([int(c) for c in (q * q.denom()).coeffs()])
    return sorted(float(r.real.mid()) for r, _ in z.complex_roots() if r.imag == 0)


def test_sqrt2_signs():
    q = U ** 2 - 2
    assert signs_at_roots(q, U) == [-1, 1]
    assert signs_at_roots(q, U ** 2 - 2) == [0, 0]
    assert signs_at_roots(q, U - 1) == [-1, 1]


def test_no_real_roots():
    assert isolate_real_roots(U ** 2 + 1) == []
    assert signs_at_roots(U ** 2 + 1, U) == []


def test_exact_rational_root_interval():
    ivs = isolate_real_roots(U * (U - 1) * (U + 3))
    assert len(ivs) == 3
    for iv, root in zip(ivs, (-3, 0, 1)):
        assert iv.lo <= root <= iv.hi
        if iv.exact:
            assert iv.lo == root


def test_tarski_query_counts():
    q = (U ** 2 - 2) * (U - 5)
    ivs = isolate_real_roots(q)
    total = sum(tarski_query(q, U - 1, iv) for iv in ivs)
    assert total == 1  # signs -, +, +


@given(polys(6, nonzero=True), polys(4))
def test_isolation_matches_complex_roots(p, g):
    q = squarefree_part(p)
    if q.degree() < 1:
        return
    ivs = isolate_real_roots(q)
    approx = float_roots(q)
    assert len(ivs) == len(approx)
    for iv, x in zip(ivs, approx):
        assert float(iv.lo) - 1e-9 <= x <= float(iv.hi) + 1e-9
    # independent sign path: evaluate g at a refined enclosure
    signs = signs_at_roots(q, g, ivs)
    for iv, s in zip(ivs, signs):
        if (g % q).is_zero() or iv.exact:
            continue
        narrow = isolate_to_width(q, iv, fmpq(1, 2 ** 80))
        lo, hi = g(narrow.lo), g(narrow.hi)
        if s != 0 and lo != 0 and hi != 0 and (lo > 0) == (hi > 0):
            assert (lo > 0) == (s > 0)


def test_random_signs_against_ball_arithmetic(rng):
    for _ in range(30):
        q = squarefree_part(random_poly(rng, rng.randint(1, 6)))
        g = random_poly(rng, rng.randint(0, 5))
        if q.degree() < 1:
            continue
        z = fmpz_poly([int(c) for c in (q * q.denom()).coeffs()])
        roots = sorted((r.real for r, _ in z.complex_roots() if r.imag == 0), key=lambda r: float(r.mid()))
        expected = []
        for r in roots:
            val = sum((arb(c.p) / arb(c.q) * r ** k for k, c in enumerate(g.coeffs())), arb(0))
            expected.append(1 if val > 0 else -1 if val < 0 else 0)
        got = signs_at_roots(q, g)
        for e, s in zip(expected, got):
            if e != 0:
                assert e == s


def test_compose_mod():
    fam = parse_system(["x1*x2 - 1", "x1 + x2"], ["x1", "x2"])
    res = GeometricResolution.from_parametrization(U ** 2 - 2, [U, U / 2])
    assert compose_mod(fam, res) == [fmpq_poly([0]), U * fmpq(3, 2)]


def test_sign_matrix_and_conditions():
    fam = parse_system(["x1", "x2 - 1"], ["x1", "x2"])
    res = GeometricResolution.from_parametrization(U ** 2 - 2, [U, fmpq_poly([1])])
    pts = point_set([res, GeometricResolution.point([3, 4])])
    sm = sign_matrix(pts, fam)
    assert sm.rows == {(0, 0): (-1, 0), (0, 1): (1, 0), (1, 0): (1, 1)}
    conds = list_conditions(pts, fam)
    assert [c.render() for c in conds] == ["-0", "+0", "++"]
    assert conds[2].witnesses == [(1, 0)]


def test_closed_conditions_from_zero():
    fam = parse_system(["x1"], ["x1", "x2"])
    pts = point_set([GeometricResolution.point([0, 0])])
    conds = list_conditions(pts, fam, CLOSED)
    assert [c.render() for c in conds] == ["<=", "=", ">="]


def test_empty_point_set():
    fam = parse_system(["x1"], ["x1", "x2"])
    assert list_conditions(point_set([]), fam) == []
    assert list_conditions(point_set([GeometricResolution.empty(2)]), fam) == []


def test_expand_equalities_example():
    out = expand_equalities([SignCondition(STRICT, (0, 1), [(0, 0)])])
    assert [c.signs for c in out] == [(-1, 1), (0, 1), (1, 1)]
    assert [c.derived for c in out] == [True, False, True]
    assert out[1].witnesses == [(0, 0)]


@given(st.lists(st.tuples(*[st.sampled_from((-1, 0, 1))] * 3), max_size=6))
def test_expand_equalities_closed_and_contains_input(vectors):
    conds = [SignCondition(STRICT, v) for v in set(vectors)]
    out = expand_equalities(conds)
    signs = {c.signs for c in out}
    assert {c.signs for c in conds} <= signs
    for v in signs:
        for i, s in enumerate(v):
            if s == 0:
                for r in (-1, 1):
                    assert v[:i] + (r,) + v[i + 1:] in signs
    assert {c.signs for c in expand_equalities(out)} == signs


def test_sigma_match():
    c = SignCondition(STRICT, (-1, 0, 1))
    assert c.matches("<=>") and c.matches("*=*") and not c.matches(">**")


def test_perturbation_witnesses_are_exact():
    fam = parse_system(["x1^2 + x2^2 - 1", "(x1 - 1)^2 + x2^2 - 1"], ["x1", "x2"])
    # the two intersection points (1/2, +-sqrt(3)/2)
    res = GeometricResolution.from_parametrization(4 * U ** 2 - 3, [fmpq_poly([fmpq(1, 2)]), U])
    pts = point_set([res])
    found = perturbation_witnesses(pts, fam)
    vectors = {v for vs, _ in found for v in vs}
    assert vectors == {(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)} - {(0, 0)}
    for vs, r in found:
        assert set(vs) <= set(sign_matrix(point_set([r]), fam).rows.values())
