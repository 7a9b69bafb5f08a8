"""Outward-rounded interval arithmetic.

Every operation returns an interval that provably contains the true real
result for all inputs in the operand intervals.  Endpoints are computed in
double precision and widened with ``math.nextafter``: one ulp for the
correctly rounded IEEE operations (+, -, *, /, sqrt), two ulps for libm
transcendentals whose rounding is not guaranteed.  Products and quotients
with an exactly-zero endpoint are kept at zero (multiplication by real zero
is exact, and the zero endpoint of an operand interval represents real
zero).

The rounding realization is recorded in proof certificates as
``ROUNDING_MODE``.
"""

from __future__ import annotations

import math

__all__ = ["Interval", "DomainError", "ROUNDING_MODE", "acos_clip_events"]

ROUNDING_MODE = "nextafter-outward (1 ulp arithmetic, 2 ulp libm)"

_INF = math.inf

#: Number of times an arccos argument had to be clipped into [-1, 1].
acos_clip_events = 0


class DomainError(ValueError):
    """Operand interval leaves the mathematical domain of an operation."""


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _down2(x: float) -> float:
    return math.nextafter(math.nextafter(x, -_INF), -_INF)


def _up2(x: float) -> float:
    return math.nextafter(math.nextafter(x, _INF), _INF)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        if hi is None:
            hi = lo
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = float(lo)
        self.hi = float(hi)

    # -- structure ---------------------------------------------------------

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise DomainError(f"empty intersection of {self} and {other}")
        return Interval(lo, hi)

    def split(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        if not (self.lo < m < self.hi):
            raise DomainError(f"interval {self} too thin to split")
        return Interval(self.lo, m), Interval(m, self.hi)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval(float(x))

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        o = self._coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = self._coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other) - self

    @staticmethod
    def _prod(a: float, b: float, direction: int) -> float:
        # Multiplication by an exactly-zero endpoint is exact.
        if a == 0.0 or b == 0.0:
            return 0.0
        p = a * b
        return _down(p) if direction < 0 else _up(p)

    def __mul__(self, other) -> "Interval":
        o = self._coerce(other)
        c = (
            self._prod(self.lo, o.lo, -1),
            self._prod(self.lo, o.hi, -1),
            self._prod(self.hi, o.lo, -1),
            self._prod(self.hi, o.hi, -1),
        )
        d = (
            self._prod(self.lo, o.lo, +1),
            self._prod(self.lo, o.hi, +1),
            self._prod(self.hi, o.lo, +1),
            self._prod(self.hi, o.hi, +1),
        )
        return Interval(min(c), max(d))

    __rmul__ = __mul__

    @staticmethod
    def _quot(a: float, b: float, direction: int) -> float:
        if a == 0.0:
            return 0.0
        q = a / b
        return _down(q) if direction < 0 else _up(q)

    def __truediv__(self, other) -> "Interval":
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise DomainError(f"division by interval containing zero: {o}")
        c = (
            self._quot(self.lo, o.lo, -1),
            self._quot(self.lo, o.hi, -1),
            self._quot(self.hi, o.lo, -1),
            self._quot(self.hi, o.hi, -1),
        )
        d = (
            self._quot(self.lo, o.lo, +1),
            self._quot(self.lo, o.hi, +1),
            self._quot(self.hi, o.lo, +1),
            self._quot(self.hi, o.hi, +1),
        )
        return Interval(min(c), max(d))

    def __rtruediv__(self, other) -> "Interval":
        return self._coerce(other) / self

    # -- elementary functions ---------------------------------------------

    def sqrt(self) -> "Interval":
        if self.hi < 0.0:
            raise DomainError(f"sqrt of negative interval {self}")
        lo = max(self.lo, 0.0)
        slo = 0.0 if lo == 0.0 else max(_down(math.sqrt(lo)), 0.0)
        shi = 0.0 if self.hi == 0.0 else _up(math.sqrt(self.hi))
        return Interval(slo, shi)

    def pow32(self) -> "Interval":
        """x ** (3/2) for nonnegative x, via the monotone form x * sqrt(x)."""
        if self.hi < 0.0:
            raise DomainError(f"pow32 of negative interval {self}")
        lo = max(self.lo, 0.0)
        plo = 0.0 if lo == 0.0 else _down2(lo * math.sqrt(lo))
        phi = 0.0 if self.hi == 0.0 else _up2(self.hi * math.sqrt(self.hi))
        return Interval(max(plo, 0.0), phi)

    def sq(self) -> "Interval":
        """x ** 2 as a single monotone-on-|x| operation (tighter than x*x)."""
        a, b = abs(self.lo), abs(self.hi)
        lo_abs, hi_abs = min(a, b), max(a, b)
        if self.lo <= 0.0 <= self.hi:
            lo_abs = 0.0
        lo = 0.0 if lo_abs == 0.0 else _down(lo_abs * lo_abs)
        return Interval(lo, _up(hi_abs * hi_abs))

    def acos(self) -> "Interval":
        """arccos, decreasing; arguments clipped into [-1, 1] (events counted)."""
        global acos_clip_events
        lo, hi = self.lo, self.hi
        if lo < -1.0 or hi > 1.0:
            acos_clip_events += 1
            lo = max(lo, -1.0)
            hi = min(hi, 1.0)
        if lo > 1.0 or hi < -1.0:
            raise DomainError(f"acos argument interval {self} outside [-1, 1]")
        return Interval(
            max(_down2(math.acos(hi)), 0.0), min(_up2(math.acos(lo)), _up2(math.pi))
        )
