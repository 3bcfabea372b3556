import math
import random

import pytest

from robustzero import (
    Box2,
    BudgetExceeded,
    DimensionMismatch,
    InvalidConstraintCover,
    PathConstraint,
    PolyPath,
    certify_miranda,
    char_poly,
    constant,
    enclose,
    eval_point,
    make_affine_map,
    make_distribution,
    verify_path_constraints,
    winding_number,
    zero_search,
)
from robustzero import catalog
from robustzero.winding import sampled_winding

PI = math.pi
Z0, Z1 = catalog.MU_ZEROS
FULL = Box2.from_bounds(-PI, PI, -PI, PI)


def square(c, side):
    h = side / 2
    return Box2.from_bounds(c[0] - h, c[0] + h, c[1] - h, c[1] + h)


def test_zero_search_finds_both_zeros(phi):
    clusters = zero_search(phi, FULL, 1e-6)
    assert len(clusters) == 2
    for z in (Z0, Z1):
        assert min(math.dist(c.center, z) for c in clusters) <= 1e-6


def test_zeros_match_grid_oracle(phi):
    # coarse grid minimum of |phi| sits next to the closed-form zeros
    n = 360
    pts = [(-PI + 2 * PI * i / n, -PI + 2 * PI * j / n) for i in range(n + 1) for j in range(n + 1)]
    best = sorted(pts, key=lambda p: abs(eval_point(phi, p)))[:2]
    for z in (Z0, Z1):
        assert min(math.dist(p, z) for p in best) <= 2 * PI / n


def test_zero_search_zero_free(phi, one):
    assert zero_search(one, FULL, 1e-3) == []
    assert zero_search(phi, Box2.from_bounds(-0.5, 0.5, -0.5, 0.5), 1e-4) == []


def test_zero_search_budget():
    # cos(x) vanishes on whole lines, so the survivors pile up
    poly = char_poly(make_distribution(2, [(1.0, 0.0), (-1.0, 0.0)], ["1/2", "1/2"]))
    with pytest.raises(BudgetExceeded):
        zero_search(poly, FULL, 1e-4, max_boxes=1000)


def test_zero_search_validation(phi):
    with pytest.raises(ValueError):
        zero_search(phi, FULL, 0.0)
    with pytest.raises(DimensionMismatch):
        zero_search(constant(1), FULL, 0.1)


def test_discarded_boxes_are_zero_free(phi):
    rng = random.Random(5)
    discarded = []
    stack = [FULL]
    while stack and len(discarded) < 50:
        b = stack.pop()
        if not enclose(phi, b).contains_zero():
            discarded.append(b)
        elif b.diam > 0.05:
            stack.extend(b.split())
    assert discarded
    for b in discarded:
        for _ in range(1000):
            p = (rng.uniform(b.x.lo, b.x.hi), rng.uniform(b.y.lo, b.y.hi))
            assert abs(eval_point(phi, p)) > 0


@pytest.mark.parametrize("side", [0.4, 0.2, 0.1])
def test_winding_around_zero(phi, side):
    path = PolyPath.box_boundary(square(Z0, side))
    w = winding_number(phi, path, 16)
    assert w.winding == -1 and w.modulus_floor > 0
    assert round(sampled_winding(phi, path)) == -1
    w1 = winding_number(phi, PolyPath.box_boundary(square(Z1, side)), 16)
    assert w1.winding == 1


def test_jacobian_sign_oracle():
    # Im(conj(d_x phi) d_y phi) at the zero gives the local degree
    x, y = Z0
    dx = 1j * (complex(math.cos(x), math.sin(x)) + complex(math.cos(x + y), math.sin(x + y))) / 3
    dy = 1j * (complex(math.cos(y), math.sin(y)) + complex(math.cos(x + y), math.sin(x + y))) / 3
    det = (dx.conjugate() * dy).imag
    assert det == pytest.approx(-math.sqrt(3) / 18, abs=1e-12)


def test_winding_zero_free_square(phi):
    path = PolyPath.box_boundary(Box2.from_bounds(-0.5, 0.5, -0.5, 0.5))
    w = winding_number(phi, path, 16)
    assert w.winding == 0 and w.modulus_floor >= 0.5
    assert abs(sampled_winding(phi, path)) < 1e-9


def test_winding_of_constant(one):
    path = PolyPath(((0.0, 0.0), (3.0, 1.0), (-2.0, 4.0)), closed=True)
    w = winding_number(one, path, 4)
    assert w.winding == 0 and w.modulus_floor >= 1 - math.ulp(1.0)


def test_winding_additivity(phi):
    outer = winding_number(phi, PolyPath.box_boundary(FULL), 16).winding
    parts = sum(winding_number(phi, PolyPath.box_boundary(square(z, 0.2)), 16).winding
                for z in (Z0, Z1))
    assert outer == parts


def test_winding_needs_closed_path(phi):
    with pytest.raises(ValueError):
        winding_number(phi, PolyPath(((0, 0), (1, 0))), 4)


def test_winding_inconclusive_through_zero(phi):
    path = PolyPath.box_boundary(Box2.from_bounds(Z0[0], Z0[0] + 0.1, Z0[1] - 0.1, Z0[1] + 0.1))
    assert not winding_number(phi, path, 6)


def test_path_validation():
    with pytest.raises(ValueError):
        PolyPath(((0, 0),))
    with pytest.raises(ValueError):
        PolyPath(((0, 0), (0, 0), (1, 1)))
    with pytest.raises(ValueError):
        PathConstraint((0.5, 1.5), "re", 0.1, "ge")


def test_vertical_segment_closed_forms(phi):
    rng = random.Random(11)
    for _ in range(1000):
        t = rng.uniform(0, 0.5)
        z = eval_point(phi, (0.0, -2 * PI * t))
        assert abs(z.real - (2 / 3 * math.cos(2 * PI * t) + 1 / 3)) <= 1e-12
        assert abs(z.imag - (-2 / 3 * math.sin(2 * PI * t))) <= 1e-12


def test_path_parameterisation():
    path = catalog.GAMMA_DOWN
    assert path.point(0.25) == pytest.approx((0.0, -PI / 2))
    assert path.point(0.75) == pytest.approx((PI / 2, -PI))
    pieces = path.pieces(0.25, 0.375)
    assert len(pieces) == 1 and pieces[0].s_range.contains(0.5) and pieces[0].s_range.contains(0.75)
    assert len(path.pieces(0.375, 1.0)) == 2


@pytest.mark.parametrize("path,cons", [
    (catalog.GAMMA_DOWN, catalog.gamma_down_constraints()),
    (catalog.GAMMA_RIGHT, catalog.gamma_right_constraints()),
])
def test_gamma_constraints(phi, path, cons):
    res = verify_path_constraints(phi, path, cons, 12)
    assert res and len(res) == 3
    rng = random.Random(0)
    for c, cert in zip(cons, res):
        lo, hi = c.segment_range
        for _ in range(500):
            z = eval_point(phi, path.point(rng.uniform(lo, hi)))
            v = z.real if c.target == "re" else z.imag
            assert (v > c.threshold) if c.direction == "ge" else (v < c.threshold)


def test_constraints_on_constant(one):
    res = verify_path_constraints(one, catalog.GAMMA_DOWN, [PathConstraint((0, 1), "re", 0.1, "ge")], 0)
    assert res and len(res) == 1


def test_failing_constraint_is_named(phi):
    cons = catalog.gamma_down_constraints()
    cons[1] = PathConstraint((0.25, 0.375), "im", 0.1, "ge")
    res = verify_path_constraints(phi, catalog.GAMMA_DOWN, cons, 12)
    assert not res and res.reason.startswith("constraint 1 failed")


def test_constraint_cover(phi):
    with pytest.raises(InvalidConstraintCover):
        verify_path_constraints(phi, catalog.GAMMA_DOWN, [PathConstraint((0, 0.5), "re", 0.1, "ge")], 4)
    with pytest.raises(InvalidConstraintCover):
        verify_path_constraints(phi, catalog.GAMMA_DOWN, [], 4)
    gap = [PathConstraint((0, 0.2), "re", 0.1, "ge"), PathConstraint((0.3, 1), "re", -0.1, "le")]
    with pytest.raises(InvalidConstraintCover):
        verify_path_constraints(phi, catalog.GAMMA_DOWN, gap, 4)


def test_miranda_and_winding_agree(phi):
    maps = [catalog.psi()]
    for z in catalog.MU_ZEROS:
        for side in (0.3, 0.6):
            maps.append(make_affine_map((z[0] - side / 2, z[1] - side / 2), (side, 0), (0, side)))
    seen = 0
    for amap in maps:
        if certify_miranda(phi, amap, 0.01, 12):
            seen += 1
            w = winding_number(phi, PolyPath(tuple(amap.corners()), closed=True), 16)
            assert abs(w.winding) >= 1
    assert seen >= 1
