"""Outward-rounded interval arithmetic on IEEE doubles.

Every operation returns an interval containing the exact real result for all
inputs drawn from the operands.  Instead of switching the FPU rounding mode,
sums and products are computed in round-to-nearest together with their exact
rounding error (TwoSum / Dekker's TwoProduct); the error's sign tells which
way to step with :func:`math.nextafter`.  Exact operations therefore stay
exact and inexact ones lose at most one ulp per endpoint.

The trigonometric ranges assume the platform ``cos``/``sin`` are faithfully
rounded (error below one ulp), which holds for glibc, musl and the macOS libm.
"""

from __future__ import annotations

import math

_INF = math.inf
_SPLIT = 134217729.0  # 2**27 + 1
_SAFE_BIG = 2.0 ** 500
_SAFE_TINY = 2.0 ** -900

# pi/2 as an unevaluated double-double sum
PIO2_HI = 1.5707963267948966
PIO2_LO = 6.123233995736766e-17


def next_up(x: float) -> float:
    return math.nextafter(x, _INF)


def next_down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def add_down(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if not math.isfinite(s):
        return s
    return s if e >= 0 else next_down(s)


def add_up(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if not math.isfinite(s):
        return s
    return s if e <= 0 else next_up(s)


def _split(a: float) -> tuple[float, float]:
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def _prod_err(a: float, b: float, p: float) -> float | None:
    """Exact ``a*b - p`` or None when Dekker's algorithm is not safe."""
    if a == 0.0 or b == 0.0:
        return 0.0
    if abs(a) > _SAFE_BIG or abs(b) > _SAFE_BIG or abs(p) < _SAFE_TINY:
        return None
    ah, al = _split(a)
    bh, bl = _split(b)
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def mul_down(a: float, b: float) -> float:
    p = a * b
    e = _prod_err(a, b, p)
    if e is None:
        return next_down(p)
    return p if e >= 0 else next_down(p)


def mul_up(a: float, b: float) -> float:
    p = a * b
    e = _prod_err(a, b, p)
    if e is None:
        return next_up(p)
    return p if e <= 0 else next_up(p)


_new = object.__new__
_set = object.__setattr__


class Interval:
    """Closed interval ``[lo, hi]`` with finite float endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        _set(self, "lo", lo)
        _set(self, "hi", hi)

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        iv = _new(cls)
        _set(iv, "lo", lo)
        _set(iv, "hi", hi)
        return iv

    @classmethod
    def around(cls, x: float) -> "Interval":
        """``x`` widened by one ulp on each side."""
        return cls._raw(next_down(x), next_up(x))

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __iter__(self):
        yield self.lo
        yield self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        if not math.isfinite(m):
            m = 0.5 * self.lo + 0.5 * self.hi
        return m

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self) -> float:
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    def split(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        return Interval._raw(self.lo, m), Interval._raw(m, self.hi)

    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = float(other)
            return Interval._raw(add_down(self.lo, other), add_up(self.hi, other))
        return Interval._raw(add_down(self.lo, other.lo), add_up(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = float(other)
            return Interval._raw(add_down(self.lo, -other), add_up(self.hi, -other))
        return Interval._raw(add_down(self.lo, -other.hi), add_up(self.hi, -other.lo))

    def __rsub__(self, other) -> "Interval":
        return (-self) + other

    def __mul__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            c = float(other)
            if c >= 0.0:
                return Interval._raw(mul_down(self.lo, c), mul_up(self.hi, c))
            return Interval._raw(mul_down(self.hi, c), mul_up(self.lo, c))
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0.0 and c >= 0.0:
            return Interval._raw(mul_down(a, c), mul_up(b, d))
        pairs = ((a, c), (a, d), (b, c), (b, d))
        return Interval._raw(
            min(mul_down(x, y) for x, y in pairs),
            max(mul_up(x, y) for x, y in pairs),
        )

    __rmul__ = __mul__

    def sqr(self) -> "Interval":
        m = self.mig
        return Interval._raw(mul_down(m, m), mul_up(self.mag, self.mag))


def _half_pi_multiple(m: int) -> Interval:
    """Enclosure of ``m * pi / 2`` for an integer ``m``."""
    hi = Interval._raw(mul_down(m, PIO2_HI), mul_up(m, PIO2_HI))
    lo = Interval._raw(mul_down(m, PIO2_LO), mul_up(m, PIO2_LO))
    s = hi + lo
    # the double-double is short of pi/2 by < 1e-32; one more ulp covers m*1e-32
    return Interval._raw(next_down(s.lo), next_up(s.hi))


def _trig_range(x: Interval, fn, parity: int) -> Interval:
    """Range of cos (parity 0) or sin (parity 1) over ``x``.

    Extremes sit at ``m*pi/2`` with ``m = parity (mod 2)``, value ``(-1)**(m//2)``.
    """
    a, b = x.lo, x.hi
    if b - a >= 6.283185307179586 or max(abs(a), abs(b)) > 1e15:
        return Interval._raw(-1.0, 1.0)
    vals = []
    for e in (a, b):
        if e == 0.0:
            v = 1.0 if parity == 0 else 0.0
            vals.append((v, v))
        else:
            v = fn(e)
            vals.append((next_down(v), next_up(v)))
    lo = min(v[0] for v in vals)
    hi = max(v[1] for v in vals)
    m0 = math.floor(a / PIO2_HI) - 1
    m1 = math.ceil(b / PIO2_HI) + 1
    for m in range(m0, m1 + 1):
        if (m - parity) % 2:
            continue
        if _half_pi_multiple(m).intersects(x):
            if ((m - parity) // 2) % 2 == 0:
                hi = 1.0
            else:
                lo = -1.0
    return Interval._raw(max(lo, -1.0), min(hi, 1.0))


def range_cos(x: Interval) -> Interval:
    """Enclosure of ``{cos t : t in x}``."""
    return _trig_range(x, math.cos, 0)


def range_sin(x: Interval) -> Interval:
    """Enclosure of ``{sin t : t in x}``."""
    return _trig_range(x, math.sin, 1)


class ComplexBox:
    """Axis-aligned rectangle ``re + i*im`` in the complex plane."""

    __slots__ = ("re", "im")

    def __init__(self, re: Interval, im: Interval):
        self.re = re
        self.im = im

    def __repr__(self) -> str:
        return f"ComplexBox(re={self.re!r}, im={self.im!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ComplexBox) and self.re == other.re and self.im == other.im

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + other.re, self.im + other.im)

    def contains(self, z) -> bool:
        if isinstance(z, ComplexBox):
            return self.re.contains(z.re) and self.im.contains(z.im)
        z = complex(z)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    __contains__ = contains

    def contains_zero(self) -> bool:
        return self.re.lo <= 0.0 <= self.re.hi and self.im.lo <= 0.0 <= self.im.hi

    def intersects(self, other: "ComplexBox") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def abs_lower(self) -> float:
        """Rigorous lower bound of ``|z|`` over the box (0 if it contains 0)."""
        a, b = self.re.mig, self.im.mig
        if a == 0.0 and b == 0.0:
            return 0.0
        sq = add_down(mul_down(a, a), mul_down(b, b))
        return max(0.0, next_down(math.sqrt(sq)))

    def nearest_point(self) -> complex:
        """Point of the box closest to the origin."""
        return complex(min(max(0.0, self.re.lo), self.re.hi),
                       min(max(0.0, self.im.lo), self.im.hi))

    def corners(self):
        for x in (self.re.lo, self.re.hi):
            for y in (self.im.lo, self.im.hi):
                yield complex(x, y)
