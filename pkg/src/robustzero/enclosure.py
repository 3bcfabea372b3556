"""Certified range enclosures of planar trigonometric polynomials.

Regions are affine parameter patches ``base + s*u + t*v`` with ``s`` and
``t`` ranging over intervals.  Boxes, segments and the edges of an affine
square are all patches, so one subdivision engine serves every certificate.
Composition with the affine parameterization happens per frequency, so a
phase ``<base + s*u + t*v, a>`` is evaluated as ``c0 + s*cu + t*cv`` with no
wrapping loss.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Union

from .charfn import TrigPolynomial, eval_point
from .errors import DimensionMismatch
from .interval import ComplexBox, Interval, range_cos, range_sin

ZERO = Interval(0.0)
ONE = Interval(1.0)
UNIT = Interval(0.0, 1.0)

# Slack below which a midpoint value is taken as a genuine violation.
_POINT_SLACK = 1e-12


@dataclass(frozen=True)
class Box2:
    """Closed axis-aligned rectangle ``x * y`` in R^2."""

    x: Interval
    y: Interval

    @classmethod
    def from_bounds(cls, xlo, xhi, ylo, yhi) -> "Box2":
        return cls(Interval(xlo, xhi), Interval(ylo, yhi))

    @classmethod
    def point(cls, x: float, y: float) -> "Box2":
        return cls(Interval(x), Interval(y))

    @property
    def diam(self) -> float:
        return math.hypot(self.x.width, self.y.width)

    @property
    def center(self) -> tuple[float, float]:
        return (self.x.mid, self.y.mid)

    def contains(self, p) -> bool:
        if isinstance(p, Box2):
            return self.x.contains(p.x) and self.y.contains(p.y)
        return self.x.contains(p[0]) and self.y.contains(p[1])

    __contains__ = contains

    def split(self) -> tuple["Box2", "Box2"]:
        """Bisect the longer side at its midpoint; ties split x."""
        if self.x.width >= self.y.width:
            a, b = self.x.split()
            return Box2(a, self.y), Box2(b, self.y)
        a, b = self.y.split()
        return Box2(self.x, a), Box2(self.x, b)

    def corners(self) -> list[tuple[float, float]]:
        """Counterclockwise, starting at the lower-left corner."""
        return [(self.x.lo, self.y.lo), (self.x.hi, self.y.lo),
                (self.x.hi, self.y.hi), (self.x.lo, self.y.hi)]

    def as_patch(self) -> "Patch":
        return Patch((ZERO, ZERO), (ONE, ZERO), (ZERO, ONE), self.x, self.y)


def _diff(a: float, b: float) -> Interval:
    return Interval(b) - a


@dataclass(frozen=True)
class Segment:
    """The points ``start + s*(end - start)`` for ``s`` in ``s_range``."""

    start: tuple[float, float]
    end: tuple[float, float]
    s_range: Interval = UNIT

    def point(self, s: float) -> tuple[float, float]:
        return (self.start[0] + s * (self.end[0] - self.start[0]),
                self.start[1] + s * (self.end[1] - self.start[1]))

    def as_patch(self) -> "Patch":
        base = (Interval(self.start[0]), Interval(self.start[1]))
        u = (_diff(self.start[0], self.end[0]), _diff(self.start[1], self.end[1]))
        return Patch(base, u, (ZERO, ZERO), self.s_range, ZERO)


IVec = tuple[Interval, Interval]


@dataclass(frozen=True)
class Patch:
    """Affine patch ``{base + s*u + t*v : s in s_range, t in t_range}``.

    ``base``, ``u`` and ``v`` are interval vectors so that rounded differences
    of float points can be enclosed exactly; the patch then stands for the
    union over all admissible vectors, which only makes claims stronger.
    """

    base: IVec
    u: IVec
    v: IVec
    s: Interval
    t: Interval

    def as_patch(self) -> "Patch":
        return self

    def with_params(self, s: Interval, t: Interval) -> "Patch":
        return Patch(self.base, self.u, self.v, s, t)

    def lengths(self) -> tuple[float, float]:
        nu = math.hypot(self.u[0].mag, self.u[1].mag)
        nv = math.hypot(self.v[0].mag, self.v[1].mag)
        return self.s.width * nu, self.t.width * nv

    def split(self) -> tuple["Patch", "Patch"]:
        """Bisect the parameter whose image is longer; ties split s."""
        ls, lt = self.lengths()
        if ls >= lt:
            a, b = self.s.split()
            return self.with_params(a, self.t), self.with_params(b, self.t)
        a, b = self.t.split()
        return self.with_params(self.s, a), self.with_params(self.s, b)

    def point(self, s: float, t: float) -> tuple[float, float]:
        return tuple(self.base[k].mid + s * self.u[k].mid + t * self.v[k].mid for k in range(2))

    def midpoint(self) -> tuple[float, float]:
        return self.point(self.s.mid, self.t.mid)

    def sample(self, rng: random.Random) -> tuple[float, float]:
        return self.point(rng.uniform(self.s.lo, self.s.hi), rng.uniform(self.t.lo, self.t.hi))


Region = Union[Box2, Segment, Patch]


def as_patches(region) -> list[Patch]:
    """Normalise a region, or a sequence of regions, to a list of patches."""
    if isinstance(region, (Box2, Segment, Patch)):
        return [region.as_patch()]
    return [r.as_patch() for r in region]


class PatchEvaluator:
    """Enclosures of one polynomial over sub-patches of a fixed affine frame.

    The per-frequency coefficients ``c0, cu, cv`` depend only on the frame
    (base, u, v), so they are computed once and reused under subdivision.
    Weights are widened by one ulp so the enclosure also covers the exact
    rational weight the float was rounded from.
    """

    def __init__(self, poly: TrigPolynomial, frame: Patch):
        if poly.dim != 2:
            raise DimensionMismatch(f"planar certification needs dim 2, got {poly.dim}")
        self.poly = poly
        self.frame = frame
        self._terms = []
        for w, a in poly.terms:
            weight = Interval.around(w)
            c0 = frame.base[0] * a[0] + frame.base[1] * a[1]
            cu = frame.u[0] * a[0] + frame.u[1] * a[1]
            cv = frame.v[0] * a[0] + frame.v[1] * a[1]
            self._terms.append((weight, c0, cu, cv))

    def enclose(self, s: Interval, t: Interval) -> ComplexBox:
        """Natural interval extension intersected with the mean-value form.

        The mean-value form ``f(mid) + f'(patch) * (param - mid)`` shrinks
        quadratically and sees cancellations between terms that the natural
        extension misses.
        """
        sm, tm = s.mid, t.mid
        ds, dt = s - sm, t - tm
        ps, pt = Interval(sm), Interval(tm)
        re = im = ZERO
        re_c = im_c = ZERO
        dre_s = dre_t = dim_s = dim_t = ZERO
        for weight, c0, cu, cv in self._terms:
            phase = c0 + s * cu + t * cv
            c, sn = range_cos(phase), range_sin(phase)
            re = re + weight * c
            im = im + weight * sn
            centre = c0 + ps * cu + pt * cv
            re_c = re_c + weight * range_cos(centre)
            im_c = im_c + weight * range_sin(centre)
            wc, ws = weight * c, weight * sn
            dre_s = dre_s - ws * cu
            dre_t = dre_t - ws * cv
            dim_s = dim_s + wc * cu
            dim_t = dim_t + wc * cv
        re_mv = re_c + dre_s * ds + dre_t * dt
        im_mv = im_c + dim_s * ds + dim_t * dt
        return ComplexBox(_meet(re, re_mv), _meet(im, im_mv))

    def enclose_patch(self, patch: Patch) -> ComplexBox:
        return self.enclose(patch.s, patch.t)

    def value(self, s: float, t: float) -> complex:
        return eval_point(self.poly, self.frame.point(s, t))


def _meet(a: Interval, b: Interval) -> Interval:
    # both enclose the same range, so they overlap
    return Interval(max(a.lo, b.lo), min(a.hi, b.hi))


def enclose(poly: TrigPolynomial, region) -> ComplexBox:
    """Complex box containing ``poly(t)`` for every ``t`` in the region."""
    patches = as_patches(region)
    out = None
    for p in patches:
        enc = PatchEvaluator(poly, p).enclose_patch(p)
        out = enc if out is None else ComplexBox(out.re.hull(enc.re), out.im.hull(enc.im))
    return out


# -- sign certificates ------------------------------------------------------

_TARGETS = {"re": "re", "real": "re", "im": "im", "imag": "im"}
_DIRECTIONS = {"ge": "ge", ">=": "ge", ">": "ge", "le": "le", "<=": "le", "<": "le"}


def normalize_target(target: str) -> str:
    try:
        return _TARGETS[target.lower()]
    except KeyError:
        raise ValueError(f"unknown component {target!r}; use 're' or 'im'") from None


def normalize_direction(direction: str) -> str:
    try:
        return _DIRECTIONS[direction.lower()]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}; use 'ge' or 'le'") from None


def satisfies(component: Interval, threshold: float, direction: str) -> bool:
    """Strict check: touching the threshold does not count."""
    if direction == "ge":
        return component.lo > threshold
    return component.hi < threshold


@dataclass(frozen=True)
class Leaf:
    piece: int
    s: Interval
    t: Interval
    enclosure: ComplexBox
    depth: int


@dataclass(frozen=True)
class SignCertificate:
    """Evidence that ``target(poly) (>|<) threshold`` holds on every piece.

    ``leaves`` tile the pieces in depth-first order of the deterministic
    bisection; each leaf's enclosure satisfies the strict inequality.
    """

    poly: TrigPolynomial
    target: str
    threshold: float
    direction: str
    pieces: tuple[Patch, ...]
    leaves: tuple[Leaf, ...]
    depth_used: int

    def __bool__(self) -> bool:
        return True

    def bound(self) -> float:
        """Worst certified value of the component over all leaves."""
        comps = [getattr(leaf.enclosure, self.target) for leaf in self.leaves]
        if self.direction == "ge":
            return min(c.lo for c in comps)
        return max(c.hi for c in comps)


@dataclass(frozen=True)
class Inconclusive:
    """Returned when subdivision up to ``max_depth`` could not certify."""

    reason: str
    piece: int | None = None
    where: Patch | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return False


def certify_sign(poly: TrigPolynomial, target: str, region, threshold: float,
                 direction: str, max_depth: int) -> SignCertificate | Inconclusive:
    """Prove ``component > threshold`` (``ge``) or ``< threshold`` (``le``) on a region.

    Adaptive bisection: a patch whose enclosure satisfies the strict
    inequality becomes a leaf, otherwise it is split along its longer image
    axis.  Gives up with :class:`Inconclusive` once a patch at ``max_depth``
    still fails, or as soon as a midpoint value visibly violates the bound.
    """
    target = normalize_target(target)
    direction = normalize_direction(direction)
    threshold = float(threshold)
    if not math.isfinite(threshold):
        raise ValueError("threshold must be finite")
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    pieces = tuple(as_patches(region))
    leaves: list[Leaf] = []
    depth_used = 0
    for index, piece in enumerate(pieces):
        ev = PatchEvaluator(poly, piece)
        stack = [(piece, 0)]
        while stack:
            patch, depth = stack.pop()
            enc = ev.enclose_patch(patch)
            comp = enc.re if target == "re" else enc.im
            if satisfies(comp, threshold, direction):
                leaves.append(Leaf(index, patch.s, patch.t, enc, depth))
                depth_used = max(depth_used, depth)
                continue
            if depth >= max_depth:
                return Inconclusive("max_depth exhausted", index, patch,
                                    f"{target} enclosure [{comp.lo!r}, {comp.hi!r}]")
            z = ev.value(patch.s.mid, patch.t.mid)
            val = z.real if target == "re" else z.imag
            if (val < threshold - _POINT_SLACK) if direction == "ge" else (val > threshold + _POINT_SLACK):
                return Inconclusive("inequality violated at a sample point", index, patch,
                                    f"{target} = {val!r}")
            left, right = patch.split()
            stack.append((right, depth + 1))
            stack.append((left, depth + 1))
    return SignCertificate(poly, target, threshold, direction, pieces, tuple(leaves), depth_used)


def modulus_lower_bound(poly: TrigPolynomial, box, max_depth: int) -> float:
    """Certified lower bound of ``|poly|`` on the region.

    Computes, over all bisection trees of depth at most ``max_depth``, the
    best value of ``min over leaves of |enclosure|``; a branch whose leaves
    still contain 0 at full depth contributes 0.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    best = math.inf
    for piece in as_patches(box):
        ev = PatchEvaluator(poly, piece)
        best = min(best, _modulus_tree(ev, piece, 0, max_depth))
    return best


def _modulus_tree(ev: PatchEvaluator, patch: Patch, depth: int, max_depth: int) -> float:
    here = ev.enclose_patch(patch).abs_lower()
    if depth >= max_depth:
        return here
    left, right = patch.split()
    below = _modulus_tree(ev, left, depth + 1, max_depth)
    if below > here:
        below = min(below, _modulus_tree(ev, right, depth + 1, max_depth))
    return max(here, below)


def sample_points(region, n: int, seed: int = 0) -> list[tuple[float, float]]:
    """Uniform parameter samples from each piece (for soundness spot checks)."""
    rng = random.Random(seed)
    pieces = as_patches(region)
    return [pieces[i % len(pieces)].sample(rng) for i in range(n)]

