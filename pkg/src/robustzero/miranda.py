"""Poincare-Miranda certificates on affine images of the unit square.

If, on the image of ``[0,1]^2`` under ``psi``, one component of ``f`` is
``< -m`` on one edge and ``> m`` on the opposite edge, and the other
component does the same on the remaining pair, then every continuous ``g``
with ``|g - f| < m`` on the image has a zero there.  The edge inequalities
are proved with :func:`~robustzero.enclosure.certify_sign` on the polynomial
composed with ``psi``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Sequence

from .charfn import TrigPolynomial, eval_point
from .enclosure import Box2, Inconclusive, Patch, SignCertificate, certify_sign
from .errors import DegenerateMap, DimensionMismatch, NotFound
from .interval import Interval

DET_TOL = 1e-12
MARGIN_ITERATIONS = 20


@dataclass(frozen=True)
class AffineSquareMap:
    """``(x, y) -> base + x*u + y*v`` on the unit square."""

    base: tuple[float, float]
    u: tuple[float, float]
    v: tuple[float, float]

    def __post_init__(self):
        for name in ("base", "u", "v"):
            vec = tuple(float(c) for c in getattr(self, name))
            if len(vec) != 2 or not all(math.isfinite(c) for c in vec):
                raise ValueError(f"{name} must be a finite point in R^2")
            object.__setattr__(self, name, vec)
        if abs(self.det) <= DET_TOL:
            raise DegenerateMap(f"u and v are (nearly) collinear, det = {self.det!r}")

    @property
    def det(self) -> float:
        return self.u[0] * self.v[1] - self.u[1] * self.v[0]

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        return (self.base[0] + x * self.u[0] + y * self.v[0],
                self.base[1] + x * self.u[1] + y * self.v[1])

    def inverse(self, p: Sequence[float]) -> tuple[float, float]:
        dx, dy = p[0] - self.base[0], p[1] - self.base[1]
        d = self.det
        return ((dx * self.v[1] - dy * self.v[0]) / d,
                (self.u[0] * dy - self.u[1] * dx) / d)

    def contains(self, p: Sequence[float], slack: float = 0.0) -> bool:
        x, y = self.inverse(p)
        return -slack <= x <= 1 + slack and -slack <= y <= 1 + slack

    def corners(self) -> list[tuple[float, float]]:
        """Images of (0,0), (1,0), (1,1), (0,1)."""
        return [self(0, 0), self(1, 0), self(1, 1), self(0, 1)]

    def image_box(self) -> Box2:
        """Rigorous bounding box of the mapped square."""
        f = self.frame(Interval(0.0, 1.0), Interval(0.0, 1.0))
        xs = f.base[0] + f.u[0] * f.s + f.v[0] * f.t
        ys = f.base[1] + f.u[1] * f.s + f.v[1] * f.t
        return Box2(xs, ys)

    def frame(self, s: Interval, t: Interval) -> Patch:
        pt = lambda p: (Interval(p[0]), Interval(p[1]))  # noqa: E731
        return Patch(pt(self.base), pt(self.u), pt(self.v), s, t)

    def edge(self, name: str) -> Patch:
        """Edge ``"x0"``, ``"x1"``, ``"y0"`` or ``"y1"`` as a one-parameter patch."""
        unit = Interval(0.0, 1.0)
        axis, level = name[0], Interval(float(name[1]))
        if axis == "x":
            return self.frame(level, unit)
        return self.frame(unit, level)


def make_affine_map(base, u, v) -> AffineSquareMap:
    return AffineSquareMap(tuple(base), tuple(u), tuple(v))


@dataclass(frozen=True)
class Orientation:
    """Sign pattern of the Miranda conditions.

    ``re_axis`` names the edge pair (``"y"``: edges y=0/y=1) on which the real
    part changes sign; the imaginary part uses the other pair.  A sign of +1
    means negative on the 0-edge and positive on the 1-edge.
    """

    re_axis: str = "y"
    re_sign: int = 1
    im_sign: int = 1

    def conditions(self, margin: float) -> list[tuple[str, str, float, str]]:
        """(edge, component, threshold, direction) for the four edges."""
        im_axis = "x" if self.re_axis == "y" else "y"
        out = []
        for comp, axis, sign in (("re", self.re_axis, self.re_sign), ("im", im_axis, self.im_sign)):
            lo_dir, hi_dir = ("le", "ge") if sign > 0 else ("ge", "le")
            out.append((axis + "0", comp, -margin if sign > 0 else margin, lo_dir))
            out.append((axis + "1", comp, margin if sign > 0 else -margin, hi_dir))
        return out

    def label(self) -> str:
        s = lambda k: "+" if k > 0 else "-"  # noqa: E731
        im_axis = "x" if self.re_axis == "y" else "y"
        return f"re:{self.re_axis}{s(self.re_sign)} im:{im_axis}{s(self.im_sign)}"


# Tried in this order; the first one is the classical pattern.
ORIENTATIONS = tuple(
    Orientation(axis, rs, ims)
    for axis in ("y", "x")
    for rs in (1, -1)
    for ims in (1, -1)
)


def poly_fingerprint(poly: TrigPolynomial) -> str:
    h = hashlib.sha256()
    h.update(str(poly.dim).encode())
    for w, a in poly.terms:
        h.update(("|" + w.hex() + ":" + ",".join(c.hex() for c in a)).encode())
    return h.hexdigest()


@dataclass(frozen=True)
class MirandaCertificate:
    poly: TrigPolynomial
    map: AffineSquareMap
    margin: float
    orientation: Orientation
    edge_certificates: dict = field(hash=False)
    max_depth: int = 0

    def __bool__(self) -> bool:
        return True

    @property
    def fingerprint(self) -> str:
        return poly_fingerprint(self.poly)

    @property
    def depth_used(self) -> int:
        return max(c.depth_used for c in self.edge_certificates.values())


def _corner_plausible(poly, amap: AffineSquareMap, orient: Orientation, margin: float) -> bool:
    """Cheap necessary test at the four corners; only used to skip work."""
    values = {(x, y): eval_point(poly, amap(x, y)) for x in (0, 1) for y in (0, 1)}
    for edge, comp, thr, direction in orient.conditions(margin):
        axis, level = edge[0], int(edge[1])
        pts = [(level, k) for k in (0, 1)] if axis == "x" else [(k, level) for k in (0, 1)]
        for p in pts:
            z = values[p]
            val = z.real if comp == "re" else z.imag
            if (direction == "ge" and val <= thr - 1e-12) or (direction == "le" and val >= thr + 1e-12):
                return False
    return True


def _certify_orientation(poly, amap, orient, margin, max_depth):
    certs: dict[str, SignCertificate] = {}
    for edge, comp, thr, direction in orient.conditions(margin):
        res = certify_sign(poly, comp, amap.edge(edge), thr, direction, max_depth)
        if not res:
            return Inconclusive(f"edge {edge} ({comp} {direction} {thr!r}) failed: {res.reason}",
                                detail=orient.label())
        certs[edge] = res
    return MirandaCertificate(poly, amap, margin, orient, certs, max_depth)


def certify_miranda(poly: TrigPolynomial, amap: AffineSquareMap, margin: float, max_depth: int,
                    orientations: Sequence[Orientation] = ORIENTATIONS):
    """Certify a robust zero of ``poly`` in ``amap([0,1]^2)`` with radius ``margin``."""
    if poly.dim != 2:
        raise DimensionMismatch(f"Miranda certification needs dim 2, got {poly.dim}")
    margin = float(margin)
    if not margin > 0:
        raise ValueError("margin must be positive")
    last = Inconclusive("no orientation satisfies the corner signs")
    for orient in orientations:
        if not _corner_plausible(poly, amap, orient, margin):
            continue
        res = _certify_orientation(poly, amap, orient, margin, max_depth)
        if res:
            return res
        last = res
    return last


def certified_margin(poly: TrigPolynomial, amap: AffineSquareMap, max_depth: int,
                     iterations: int = MARGIN_ITERATIONS) -> float:
    """Largest margin found by bisection on ``[0, sum |w|]`` at which certification succeeds."""
    if poly.dim != 2:
        raise DimensionMismatch(f"Miranda certification needs dim 2, got {poly.dim}")
    lo, hi = 0.0, poly.weight_sum
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if certify_miranda(poly, amap, mid, max_depth):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class SearchConfig:
    zero_tol: float = 1e-3
    rotations: int = 8
    scales: tuple[float, ...] = (math.pi / 4, math.pi / 8, math.pi / 16)
    aspects: tuple[float, ...] = (1.0, 2.0, 0.5)
    min_margin: float = 0.01
    max_depth: int = 10
    margin_iterations: int = 12


def _candidate_maps(center, config: SearchConfig):
    cx, cy = center
    for ri in range(config.rotations):
        theta = ri * math.pi / config.rotations
        c, s = math.cos(theta), math.sin(theta)
        for si, scale in enumerate(config.scales):
            for ai, aspect in enumerate(config.aspects):
                u = (scale * c, scale * s)
                v = (-scale * aspect * s, scale * aspect * c)
                base = (cx - 0.5 * (u[0] + v[0]), cy - 0.5 * (u[1] + v[1]))
                yield (ri, si, ai), AffineSquareMap(base, u, v)


def search_box(poly: TrigPolynomial, region: Box2, config: SearchConfig | None = None) -> AffineSquareMap:
    """Heuristic search for a certifiable square inside ``region``.

    Candidate squares are centred on the approximate zeros from
    :func:`~robustzero.winding.zero_search` and swept over a grid of
    rotations (multiples of pi/rotations), scales and aspect ratios.  The map
    with the largest certified margin wins; ties keep the lexicographically
    first grid index.  Raises :class:`NotFound` if nothing reaches
    ``config.min_margin``.
    """
    from .winding import zero_search

    config = config or SearchConfig()
    if poly.dim != 2:
        raise DimensionMismatch(f"Miranda certification needs dim 2, got {poly.dim}")
    clusters = zero_search(poly, region, config.zero_tol)
    best = None
    for ci, cluster in enumerate(clusters):
        for idx, amap in _candidate_maps(cluster.center, config):
            if not all(region.contains(p) for p in amap.corners()):
                continue
            if not certify_miranda(poly, amap, config.min_margin, config.max_depth):
                continue
            m = certified_margin(poly, amap, config.max_depth, config.margin_iterations)
            m = max(m, config.min_margin)
            if best is None or m > best[0]:
                best = (m, (ci,) + idx, amap)
    if best is None:
        raise NotFound("no candidate square certifies at the requested margin")
    return best[2]


__all__ = [
    "AffineSquareMap", "MirandaCertificate", "Orientation", "ORIENTATIONS", "SearchConfig",
    "certified_margin", "certify_miranda", "make_affine_map", "poly_fingerprint", "search_box",
]
