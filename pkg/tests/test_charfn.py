import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustzero import (
    DimensionMismatch,
    DistributionFormatError,
    DuplicateAtom,
    InvalidSlots,
    NonPositiveWeight,
    TrigPolynomial,
    WeightsDoNotSumToOne,
    char_poly,
    constant,
    embed,
    eval_point,
    make_distribution,
    multiply,
    parse_distribution,
)

PI = math.pi


def direct_sum(poly, t):
    return sum(w * cmath.exp(1j * sum(x * a for x, a in zip(t, freq))) for w, freq in poly.terms)


def test_make_distribution_mu(mu):
    assert mu.dim == 2
    assert mu.atoms == ((0.0, 1.0), (1.0, 0.0), (1.0, 1.0))
    assert mu.weights == (1 / 3, 1 / 3, 1 / 3)


def test_point_mass_in_one_dimension():
    d = make_distribution(1, [(0,)], [1])
    assert d.atoms == ((0.0,),)
    assert eval_point(char_poly(d), [3.7]) == 1


@pytest.mark.parametrize("atoms, weights, exc", [
    ([(0, 1), (1, 0)], [0.5, 0.6], WeightsDoNotSumToOne),
    ([(0, 1), (1, 0)], [1.5, -0.5], NonPositiveWeight),
    ([(0, 1), (1, 0)], [1.0, 0.0], NonPositiveWeight),
    ([(0, 1), (0, 1)], [0.5, 0.5], DuplicateAtom),
    ([(0, 1), (1, 0, 2)], [0.5, 0.5], DimensionMismatch),
    ([(0, 1)], [0.5, 0.5], DimensionMismatch),
])
def test_make_distribution_rejects(atoms, weights, exc):
    with pytest.raises(exc):
        make_distribution(2, atoms, weights)


def test_rational_weight_strings_round_once():
    d = make_distribution(1, [(0,), (1,), (2,)], ["1/3", "1/6", "0.5"])
    assert d.weights == (1 / 3, 1 / 6, 0.5)


def test_char_poly_terms_are_atoms(phi):
    assert phi.terms == ((1 / 3, (0.0, 1.0)), (1 / 3, (1.0, 0.0)), (1 / 3, (1.0, 1.0)))


def test_symmetric_two_point_law_is_cosine():
    poly = char_poly(make_distribution(1, [(1,), (-1,)], ["1/2", "1/2"]))
    rng = random.Random(1)
    for _ in range(100):
        t = rng.uniform(-20, 20)
        z = eval_point(poly, [t])
        assert z.real == pytest.approx(math.cos(t), abs=1e-15)
        assert abs(z.imag) <= 1e-15
        assert abs(z - direct_sum(poly, [t])) <= 1e-14


def test_eval_point_examples(phi):
    assert eval_point(phi, (0, 0)) == 1
    assert abs(eval_point(phi, (PI, 0.7)) - complex(-1 / 3, 0)) <= 1e-12
    assert abs(eval_point(phi, (2 * PI / 3, -2 * PI / 3))) <= 1e-12
    with pytest.raises(DimensionMismatch):
        eval_point(phi, (1.0,))


def test_zero_located_by_grid_refinement(phi):
    # independent oracle: zoom a grid onto the minimum of |phi|
    cx, cy, h = 2.0, -2.0, 0.5
    for _ in range(25):
        best = min(((abs(direct_sum(phi, (cx + i * h / 10, cy + j * h / 10))), cx + i * h / 10, cy + j * h / 10)
                    for i in range(-10, 11) for j in range(-10, 11)))
        _, cx, cy = best
        h /= 4
    assert math.dist((cx, cy), (2 * PI / 3, -2 * PI / 3)) < 1e-9


def test_embed_examples(mu, phi):
    sigma = embed(mu, 4, [1, 2])
    assert sigma.atoms == ((0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0))
    assert sigma.weights == mu.weights
    delta = make_distribution(1, [(0,)], [1])
    assert embed(delta, 3, [2]).atoms == ((0.0, 0.0, 0.0),)
    s = eval_point(char_poly(sigma), (0.3, -1.1, 5, -7))
    assert abs(s - eval_point(phi, (0.3, -1.1))) <= 1e-12


@pytest.mark.parametrize("target, slots, exc", [
    (1, [1, 2], DimensionMismatch),
    (4, [1], InvalidSlots),
    (4, [1, 1], InvalidSlots),
    (4, [0, 2], InvalidSlots),
    (4, [1, 5], InvalidSlots),
])
def test_embed_rejects(mu, target, slots, exc):
    with pytest.raises(exc):
        embed(mu, target, slots)


def test_multiply_identity_and_square(phi):
    assert multiply(phi, constant(2)).terms == phi.terms
    c = TrigPolynomial(1, ((0.5, (1.0,)), (0.5, (-1.0,))))
    sq = multiply(c, c)
    assert sorted(sq.terms, key=lambda t: t[1]) == [(0.25, (-2.0,)), (0.5, (0.0,)), (0.25, (2.0,))]
    rng = random.Random(2)
    for _ in range(100):
        t = [rng.uniform(-10, 10)]
        assert abs(eval_point(sq, t) - eval_point(c, t) ** 2) <= 1e-14
    assert eval_point(multiply(phi, phi), (0, 0)) == 1
    with pytest.raises(DimensionMismatch):
        multiply(phi, c)


def test_modulus_at_most_one(phi):
    rng = random.Random(3)
    worst = max(abs(eval_point(phi, (rng.uniform(-50, 50), rng.uniform(-50, 50)))) for _ in range(100_000))
    assert worst <= 1 + 1e-15


laws = st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=n, max_size=n, unique=True),
    st.lists(st.integers(1, 100), min_size=n, max_size=n),
))
points = st.tuples(st.floats(-30, 30), st.floats(-30, 30))


def _law(law_spec):
    atoms, raw = law_spec
    total = sum(raw)
    return make_distribution(2, atoms, [f"{r}/{total}" for r in raw])


@given(laws, points)
def test_conjugate_symmetry(law_spec, t):
    poly = char_poly(_law(law_spec))
    assert abs(eval_point(poly, (-t[0], -t[1])) - eval_point(poly, t).conjugate()) <= 1e-12


@given(laws, points, st.sampled_from([0, 1]))
def test_integer_lattice_periodicity(law_spec, t, k):
    poly = char_poly(_law(law_spec))
    shifted = list(t)
    shifted[k] += 2 * PI
    assert abs(eval_point(poly, shifted) - eval_point(poly, t)) <= 1e-12


@given(laws, laws, points)
def test_multiply_is_pointwise_product(a, b, t):
    p, q = char_poly(_law(a)), char_poly(_law(b))
    assert abs(eval_point(multiply(p, q), t) - eval_point(p, t) * eval_point(q, t)) <= 1e-10


def test_embed_slice_identity_random_slots(mu, phi):
    rng = random.Random(4)
    for _ in range(1000):
        d = rng.randint(2, 6)
        slots = rng.sample(range(1, d + 1), 2)
        sigma = char_poly(embed(mu, d, slots))
        x = [rng.uniform(-20, 20) for _ in range(d)]
        ref = eval_point(phi, (x[slots[0] - 1], x[slots[1] - 1]))
        assert abs(eval_point(sigma, x) - ref) <= 1e-12


@settings(max_examples=50)
@given(laws)
def test_value_at_origin_is_one(law_spec):
    assert abs(eval_point(char_poly(_law(law_spec)), (0.0, 0.0)) - 1) <= 1e-12


def test_parse_distribution_document():
    d = parse_distribution('{"dim": 2, "atoms": [[0, 1], [1, 0], [1, 1]], "weights": ["1/3", "1/3", "1/3"]}')
    assert d.weights == (1 / 3,) * 3


def test_parse_errors_carry_line_numbers():
    with pytest.raises(DistributionFormatError) as err:
        parse_distribution('{\n "dim": 2,\n "atoms": [[0, 1]\n}')
    assert err.value.lineno is not None
    with pytest.raises(DistributionFormatError) as err:
        parse_distribution('{\n "dim": 2,\n "atoms": [[0, 1]],\n "weights": ["x/y"]\n}')
    assert err.value.lineno == 4
    with pytest.raises(DistributionFormatError):
        parse_distribution('{"dim": 2, "atoms": [[0, 1]]}')
