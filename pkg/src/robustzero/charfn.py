"""Finite discrete distributions on R^d and their characteristic functions.

A distribution with atoms a_j and weights w_j has characteristic function

    t -> sum_j w_j * exp(i <t, a_j>)

which is a trigonometric polynomial.  Both objects are immutable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    DistributionFormatError,
    DuplicateAtom,
    InvalidSlots,
    NonPositiveWeight,
    WeightsDoNotSumToOne,
)

WEIGHT_SUM_TOL = 1e-12

Point = tuple[float, ...]


def parse_weight(value) -> float:
    """Convert a number or a ``"p/q"`` / decimal string to a float, rounding once."""
    if isinstance(value, bool):
        raise TypeError("boolean is not a weight")
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse weight {value!r}") from exc
    if isinstance(value, Fraction):
        return float(value)
    return float(value)


def _as_point(p, dim: int) -> Point:
    if isinstance(p, (int, float)):
        p = (p,)
    pt = tuple(float(c) for c in p)
    if len(pt) != dim:
        raise DimensionMismatch(f"expected a point of length {dim}, got {len(pt)}")
    return pt


@dataclass(frozen=True)
class DiscreteDistribution:
    dim: int
    atoms: tuple[Point, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch("dim must be a positive integer")
        if not self.atoms:
            raise ValueError("a distribution needs at least one atom")
        if len(self.atoms) != len(self.weights):
            raise DimensionMismatch("atoms and weights differ in length")
        for a in self.atoms:
            if len(a) != self.dim:
                raise DimensionMismatch(f"atom {a} does not have length {self.dim}")
            if not all(math.isfinite(c) for c in a):
                raise ValueError(f"atom {a} has a non-finite coordinate")
        for w in self.weights:
            if not (w > 0) or not math.isfinite(w):
                raise NonPositiveWeight(f"weight {w!r} is not a positive finite number")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise WeightsDoNotSumToOne(f"weights sum to {total!r}")
        if len(set(self.atoms)) != len(self.atoms):
            raise DuplicateAtom("atoms must be pairwise distinct")


def make_distribution(dim: int, atoms: Sequence, weights: Sequence) -> DiscreteDistribution:
    """Validate and build a distribution.

    Weights may be floats, ints, :class:`~fractions.Fraction` or strings such
    as ``"1/3"``; strings are converted exactly and rounded once.
    """
    if len(atoms) != len(weights):
        raise DimensionMismatch("atoms and weights differ in length")
    pts = tuple(_as_point(a, dim) for a in atoms)
    ws = tuple(parse_weight(w) for w in weights)
    return DiscreteDistribution(dim, pts, ws)


@dataclass(frozen=True)
class TrigPolynomial:
    """``t -> sum_j w_j exp(i <t, a_j>)`` with real weights ``w_j``."""

    dim: int
    terms: tuple[tuple[float, Point], ...]

    def __call__(self, *t) -> complex:
        if len(t) == 1 and not isinstance(t[0], (int, float)):
            t = t[0]
        return eval_point(self, t)

    @property
    def weight_sum(self) -> float:
        """Sum of |w_j|; an upper bound for the sup-norm."""
        return math.fsum(abs(w) for w, _ in self.terms)

    @property
    def lipschitz(self) -> float:
        """Sum of |w_j| * ||a_j||_2, a Lipschitz constant of the real and imaginary parts."""
        return math.fsum(abs(w) * math.hypot(*a) for w, a in self.terms)


def constant(dim: int, value: float = 1.0) -> TrigPolynomial:
    return TrigPolynomial(dim, ((float(value), (0.0,) * dim),))


def char_poly(dist: DiscreteDistribution) -> TrigPolynomial:
    return TrigPolynomial(dist.dim, tuple(zip(dist.weights, dist.atoms)))


def eval_point(poly: TrigPolynomial, t: Sequence[float]) -> complex:
    if len(t) != poly.dim:
        raise DimensionMismatch(f"point of length {len(t)} for a {poly.dim}-dim polynomial")
    re = im = 0.0
    for w, a in poly.terms:
        phase = math.fsum(tc * ac for tc, ac in zip(t, a))
        re += w * math.cos(phase)
        im += w * math.sin(phase)
    return complex(re, im)


def embed(dist: DiscreteDistribution, target_dim: int, slots: Sequence[int]) -> DiscreteDistribution:
    """Place ``dist`` on the coordinates ``slots`` (1-based) of R^target_dim.

    This is the product of ``dist`` with point masses at 0 in the remaining
    coordinates, so its characteristic function only depends on the slot
    coordinates.
    """
    if target_dim < dist.dim:
        raise DimensionMismatch(f"cannot embed dimension {dist.dim} into {target_dim}")
    slots = list(slots)
    if len(slots) != dist.dim:
        raise InvalidSlots(f"need {dist.dim} slots, got {len(slots)}")
    if len(set(slots)) != len(slots) or any(
        not isinstance(s, int) or not 1 <= s <= target_dim for s in slots
    ):
        raise InvalidSlots(f"slots {slots} must be distinct integers in [1, {target_dim}]")
    atoms = []
    for a in dist.atoms:
        p = [0.0] * target_dim
        for c, s in zip(a, slots):
            p[s - 1] = c
        atoms.append(tuple(p))
    return DiscreteDistribution(target_dim, tuple(atoms), dist.weights)


def multiply(p: TrigPolynomial, q: TrigPolynomial) -> TrigPolynomial:
    """Pointwise product; equal frequencies (exact match) are merged."""
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim} differ")
    merged: dict[Point, float] = {}
    for wp, ap in p.terms:
        for wq, aq in q.terms:
            freq = tuple(x + y for x, y in zip(ap, aq))
            merged[freq] = merged.get(freq, 0.0) + wp * wq
    return TrigPolynomial(p.dim, tuple((w, a) for a, w in merged.items()))


# -- distribution documents -------------------------------------------------

def parse_distribution(text: str) -> DiscreteDistribution:
    """Parse a JSON document with keys ``dim``, ``atoms`` and ``weights``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DistributionFormatError(exc.msg, exc.lineno) from exc
    if not isinstance(doc, dict):
        raise DistributionFormatError("top level must be an object", 1)
    missing = [k for k in ("dim", "atoms", "weights") if k not in doc]
    if missing:
        raise DistributionFormatError(f"missing field(s): {', '.join(missing)}",
                                      _line_of(text, missing[0]))
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DistributionFormatError("dim must be a positive integer", _line_of(text, "dim"))
    atoms, weights = doc["atoms"], doc["weights"]
    if not isinstance(atoms, list) or not isinstance(weights, list):
        raise DistributionFormatError("atoms and weights must be arrays", _line_of(text, "atoms"))
    try:
        ws = [parse_weight(w) for w in weights]
    except (TypeError, ValueError) as exc:
        raise DistributionFormatError(str(exc), _line_of(text, "weights")) from exc
    try:
        return make_distribution(dim, [a if isinstance(a, list) else [a] for a in atoms], ws)
    except TypeError as exc:
        raise DistributionFormatError(str(exc), _line_of(text, "atoms")) from exc


def load_distribution(path) -> DiscreteDistribution:
    with open(path, encoding="utf-8") as fh:
        return parse_distribution(fh.read())


def dump_distribution(dist: DiscreteDistribution) -> str:
    doc = {"dim": dist.dim, "atoms": [list(a) for a in dist.atoms], "weights": list(dist.weights)}
    return json.dumps(doc, indent=2)


def _line_of(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None

