"""Winding numbers, zero isolation and path-constraint certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .charfn import TrigPolynomial, eval_point
from .enclosure import (
    Box2,
    Inconclusive,
    PatchEvaluator,
    Segment,
    SignCertificate,
    certify_sign,
    normalize_direction,
    normalize_target,
)
from .errors import BudgetExceeded, DimensionMismatch, InvalidConstraintCover
from .interval import ComplexBox, Interval

DEFAULT_BOX_CAP = 100_000
# Arcs must look narrower than this from the origin, so that witnesses of
# overlapping arcs differ by less than pi/2.
_MAX_SPREAD = math.pi / 4 - 1e-6


@dataclass(frozen=True)
class PolyPath:
    """Polygonal path; segment ``i`` is traversed for ``t`` in ``[i/n, (i+1)/n]``."""

    vertices: tuple[tuple[float, float], ...]
    closed: bool = False

    def __post_init__(self):
        verts = tuple((float(p[0]), float(p[1])) for p in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise ValueError("a path needs at least two vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise ValueError(f"consecutive vertices coincide at {a}")
        if self.closed and verts[0] == verts[-1]:
            raise ValueError("closed paths list each vertex once")

    @classmethod
    def box_boundary(cls, box: Box2) -> "PolyPath":
        """Counterclockwise boundary of a box."""
        return cls(tuple(box.corners()), closed=True)

    @property
    def segments(self) -> list[Segment]:
        vs = list(self.vertices)
        if self.closed:
            vs.append(vs[0])
        return [Segment(a, b) for a, b in zip(vs, vs[1:])]

    def point(self, t: float) -> tuple[float, float]:
        segs = self.segments
        n = len(segs)
        i = min(int(t * n), n - 1)
        return segs[i].point(t * n - i)

    def pieces(self, t0: float, t1: float) -> list[Segment]:
        """Sub-segments covering the parameter range ``[t0, t1]``."""
        segs = self.segments
        n = len(segs)
        out = []
        for i, seg in enumerate(segs):
            lo, hi = max(t0, i / n), min(t1, (i + 1) / n)
            if lo > hi or (lo == hi and t0 != t1):
                continue
            s = Interval(lo) * n - i
            s_hi = Interval(hi) * n - i
            s_range = Interval(max(0.0, s.lo), min(1.0, s_hi.hi))
            out.append(Segment(seg.start, seg.end, s_range))
        return out


@dataclass(frozen=True)
class PathConstraint:
    """``target(poly(path(t)))`` strictly beyond ``threshold`` for ``t`` in ``segment_range``."""

    segment_range: tuple[float, float]
    target: str
    threshold: float
    direction: str

    def __post_init__(self):
        lo, hi = (float(x) for x in self.segment_range)
        if not 0.0 <= lo <= hi <= 1.0:
            raise ValueError(f"segment_range {self.segment_range} must lie in [0, 1]")
        if not math.isfinite(self.threshold):
            raise ValueError("threshold must be finite")
        object.__setattr__(self, "segment_range", (lo, hi))
        object.__setattr__(self, "target", normalize_target(self.target))
        object.__setattr__(self, "direction", normalize_direction(self.direction))


@dataclass(frozen=True)
class Arc:
    segment: int
    s: Interval
    enclosure: ComplexBox
    angle: float


@dataclass(frozen=True)
class WindingCertificate:
    poly: TrigPolynomial
    path: PolyPath
    winding: int
    modulus_floor: float
    arcs: tuple[Arc, ...]

    def __bool__(self) -> bool:
        return True


def _require_planar(poly: TrigPolynomial) -> None:
    if poly.dim != 2:
        raise DimensionMismatch(f"planar operations need dim 2, got {poly.dim}")


# -- zero isolation ---------------------------------------------------------

def zero_search(poly: TrigPolynomial, box: Box2, tol: float,
                max_boxes: int = DEFAULT_BOX_CAP) -> list[Box2]:
    """Branch-and-prune for zeros of ``poly`` in ``box``.

    Sub-boxes whose enclosure excludes 0 are discarded, the rest are bisected
    until their diameter is below ``tol``.  Survivors that touch (share a face
    or a corner) are merged and reported by their bounding box.  No zero is
    ever discarded, but a cluster need not contain one.
    """
    _require_planar(poly)
    if not tol > 0:
        raise ValueError("tol must be positive")
    ev = PatchEvaluator(poly, box.as_patch())
    survivors: list[Box2] = []
    stack = [box]
    while stack:
        b = stack.pop()
        if not ev.enclose(b.x, b.y).contains_zero():
            continue
        if b.diam < tol:
            survivors.append(b)
            if len(survivors) > max_boxes:
                raise BudgetExceeded(f"more than {max_boxes} candidate boxes survive")
            continue
        left, right = b.split()
        stack.append(right)
        stack.append(left)
        if len(stack) > max_boxes:
            raise BudgetExceeded(f"more than {max_boxes} boxes pending")
    return _clusters(survivors)


def _clusters(boxes: list[Box2]) -> list[Box2]:
    parent = list(range(len(boxes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = sorted(range(len(boxes)), key=lambda i: boxes[i].x.lo)
    for k, i in enumerate(order):
        bi = boxes[i]
        for j in order[k + 1:]:
            bj = boxes[j]
            if bj.x.lo > bi.x.hi:
                break
            if bi.y.intersects(bj.y):
                parent[find(i)] = find(j)
    groups: dict[int, Box2] = {}
    for i, b in enumerate(boxes):
        r = find(i)
        g = groups.get(r)
        groups[r] = b if g is None else Box2(g.x.hull(b.x), g.y.hull(b.y))
    return sorted(groups.values(), key=lambda b: (b.x.lo, b.y.lo))


# -- winding numbers --------------------------------------------------------

def wrap_angle(a: float) -> float:
    return math.remainder(a, 2 * math.pi)


def half_plane_witness(enc: ComplexBox) -> float | None:
    """Angle of a half-plane containing the box, or None if the box is too wide."""
    if enc.contains_zero():
        return None
    p = enc.nearest_point()
    if p == 0:
        return None
    theta = math.atan2(p.imag, p.real)
    spread = max(abs(wrap_angle(math.atan2(c.imag, c.real) - theta)) for c in enc.corners())
    return theta if spread < _MAX_SPREAD else None


def winding_number(poly: TrigPolynomial, path: PolyPath, max_depth: int):
    """Certified winding number of ``poly`` around 0 along a closed path.

    Each segment's parameter range is bisected until every arc's enclosure
    avoids 0 and is seen from the origin under an angle below pi/2.  Arc
    witnesses (the direction of the box point nearest 0) of consecutive arcs
    then differ by less than pi/2, so the principal differences add up to
    exactly ``2*pi*winding``.
    """
    _require_planar(poly)
    if not path.closed:
        raise ValueError("winding numbers need a closed path")
    arcs: list[Arc] = []
    for index, seg in enumerate(path.segments):
        patch = seg.as_patch()
        ev = PatchEvaluator(poly, patch)
        stack = [(patch.s, 0)]
        while stack:
            s, depth = stack.pop()
            enc = ev.enclose(s, patch.t)
            theta = half_plane_witness(enc)
            if theta is not None:
                arcs.append(Arc(index, s, enc, theta))
                continue
            if depth >= max_depth:
                return Inconclusive("could not separate the path image from 0", index,
                                    patch.with_params(s, patch.t),
                                    f"enclosure {enc!r}")
            a, b = s.split()
            stack.append((b, depth + 1))
            stack.append((a, depth + 1))
    total = 0.0
    for k, arc in enumerate(arcs):
        nxt = arcs[(k + 1) % len(arcs)]
        step = wrap_angle(nxt.angle - arc.angle)
        if abs(step) >= math.pi / 2:
            return Inconclusive(f"angle step {step!r} between arcs {k} and {k + 1} is ambiguous")
        total += step
    turns = total / (2 * math.pi)
    winding = round(turns)
    if abs(turns - winding) > 1e-6:
        return Inconclusive(f"angle sum {total!r} is not a multiple of 2*pi")
    floor = min(arc.enclosure.abs_lower() for arc in arcs)
    return WindingCertificate(poly, path, int(winding), floor, tuple(arcs))


def sampled_winding(poly: TrigPolynomial, path: PolyPath, samples_per_segment: int = 2000) -> float:
    """Non-rigorous winding estimate by argument tracking on a fine sampling."""
    _require_planar(poly)
    pts = []
    for seg in path.segments:
        pts.extend(seg.point(k / samples_per_segment) for k in range(samples_per_segment))
    if path.closed:
        pts.append(pts[0])
    args = [math.atan2(z.imag, z.real) for z in (eval_point(poly, p) for p in pts)]
    total = math.fsum(wrap_angle(b - a) for a, b in zip(args, args[1:]))
    return total / (2 * math.pi)


# -- path constraints -------------------------------------------------------

def _check_cover(constraints: Sequence[PathConstraint]) -> None:
    if not constraints:
        raise InvalidConstraintCover("no constraints given")
    ranges = sorted(c.segment_range for c in constraints)
    if ranges[0][0] > 0.0:
        raise InvalidConstraintCover(f"[0, {ranges[0][0]}) is not covered")
    reach = ranges[0][1]
    for lo, hi in ranges[1:]:
        if lo > reach:
            raise InvalidConstraintCover(f"({reach}, {lo}) is not covered")
        reach = max(reach, hi)
    if reach < 1.0:
        raise InvalidConstraintCover(f"({reach}, 1] is not covered")


def verify_path_constraints(poly: TrigPolynomial, path: PolyPath,
                            constraints: Sequence[PathConstraint], max_depth: int):
    """Certify every constraint along its stretch of the path.

    Returns one :class:`SignCertificate` per constraint (its pieces are the
    path segments the stretch crosses), or an :class:`Inconclusive` whose
    ``reason`` names the first failing constraint.
    """
    _require_planar(poly)
    _check_cover(constraints)
    certs: list[SignCertificate] = []
    for k, c in enumerate(constraints):
        pieces = path.pieces(*c.segment_range)
        res = certify_sign(poly, c.target, pieces, c.threshold, c.direction, max_depth)
        if not res:
            return Inconclusive(f"constraint {k} failed: {res.reason}", res.piece, res.where,
                                res.detail)
        certs.append(res)
    return certs
