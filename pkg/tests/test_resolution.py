import pytest
from flint import fmpq, fmpq_poly
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from signsample.errors import BadAlpha
from signsample.resolution import GeometricResolution, invert_mod, merge_all
from signsample.slp import parse_system

U = fmpq_poly([0, 1])


def circle_points():
    # (u, 1 - u) for u^2 + (1-u)^2 = 1, i.e. u in {0, 1}
    return GeometricResolution.from_parametrization(U * (U - 1), [U, 1 - U])


def test_normalizes_and_reduces():
    res = GeometricResolution(2 * U ** 2 - 4, U ** 3, [U ** 2])
    assert res.q == U ** 2 - 2
    assert res.qtilde == U
    assert res.w == [fmpq_poly([1])]


def test_compose_vanishes_on_points():
    fam = parse_system(["x1^2 + x2^2 - 1", "x1 - x2"], ["x1", "x2"])
    g = circle_points().compose(fam)
    assert g[0] == 0
    assert g[1] == 2 * U - 1


def test_point_and_empty():
    p = GeometricResolution.point([fmpq(1, 3), -2])
    assert p.degree == 1 and p.parametrization()[1].rep == -2
    e = GeometricResolution.empty(3)
    assert e.is_empty() and e.nvars == 3
    assert e.compose(parse_system(["x1"], ["x1", "x2", "x3"])) == [0]


def test_map_linear_and_prefix():
    res = GeometricResolution.from_parametrization(U ** 2 - 2, [U])
    pre = res.with_prefix([fmpq(5)])
    assert [v.rep for v in pre.parametrization()] == [fmpq_poly([5]), U]
    img = pre.map_linear([[1, 1], [0, 2]], shift=[0, 1])
    assert [v.rep for v in img.parametrization()] == [U + 5, 2 * U + 1]


def test_merge_keeps_both_sets():
    a = GeometricResolution.from_parametrization(U ** 2 - 2, [U, U + 1])
    b = GeometricResolution(U - 3, fmpq_poly([2]), [fmpq_poly([1]), fmpq_poly([4])])
    m = a.merge(b)
    assert m.q == (U ** 2 - 2) * (U - 3)
    v = m.parametrization()
    # at U = 3 the point is (1/2, 2); at U^2 = 2 it is (U, U + 1)
    assert (v[0].rep * m.qtilde - m.w[0]) % m.q == 0
    vals = [(vk.rep - target) % (U - 3) for vk, target in zip(v, (fmpq(1, 2), fmpq(2)))]
    assert vals == [0, 0]
    assert (v[1].rep - v[0].rep - 1) % (U ** 2 - 2) == 0


def test_merge_rejects_shared_values():
    a = GeometricResolution.from_parametrization(U - 1, [U])
    with pytest.raises(BadAlpha):
        a.merge(GeometricResolution.from_parametrization(U ** 2 - 1, [U]))
    assert merge_all([a]) is a


def test_check_detects_bad_qtilde():
    res = GeometricResolution(U ** 2 - 1, U - 1, [U])
    with pytest.raises(BadAlpha):
        res.check()


@given(st.lists(rationals, min_size=1, max_size=4, unique=True), st.lists(rationals, min_size=1, max_size=4))
def test_dict_round_trip(roots, coords):
    q = fmpq_poly([1])
    for r in roots:
        q *= U - r
    w = [fmpq_poly(coords[: i + 1]) for i in range(3)]
    res = GeometricResolution(q, U + fmpq(10 ** 30, 7), w, {"kind": "critical", "level": 1})
    try:
        res.check()
    except BadAlpha:
        return
    back = GeometricResolution.from_dict(res.to_dict())
    assert back == res and back.provenance == res.provenance


def test_invert_mod():
    q = U ** 3 - 2
    inv = invert_mod(U + 1, q)
    assert ((U + 1) * inv) % q == 1
