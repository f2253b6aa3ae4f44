"""
Closed real intervals and axis-aligned boxes.

An interval ``[lo, hi]`` may have infinite endpoints. The empty interval is a
regular value (``Interval.empty()``) and is absorbing under intersection and
arithmetic, so contractors can return it without raising.

Endpoints are plain doubles. By default no outward rounding is applied; call
:func:`set_outward_ulps` with a positive count to widen every arithmetic
result by that many ulps on each side.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Interval",
    "IntervalBox",
    "BoolInterval",
    "UnbisectableError",
    "set_outward_ulps",
    "get_outward_ulps",
    "set_minus_hull",
    "fmt_real",
]

_INF = math.inf
_OUTWARD_ULPS = 0


def set_outward_ulps(n: int) -> None:
    """Widen each arithmetic result by ``n`` ulps per endpoint (0 disables)."""
    global _OUTWARD_ULPS
    if n < 0:
        raise ValueError("ulp count must be non-negative")
    _OUTWARD_ULPS = int(n)


def get_outward_ulps() -> int:
    return _OUTWARD_ULPS


def _widen(lo: float, hi: float) -> tuple[float, float]:
    for _ in range(_OUTWARD_ULPS):
        lo = math.nextafter(lo, -_INF)
        hi = math.nextafter(hi, _INF)
    return lo, hi


def fmt_real(v: float) -> str:
    """Render a double with 17 significant digits (round-trips exactly)."""
    if v == _INF:
        return "inf"
    if v == -_INF:
        return "-inf"
    return format(v, ".17g")


class BoolInterval(enum.Enum):
    """Three-valued test result: [0,0], [1,1] or [0,1]."""

    FALSE = 0
    TRUE = 1
    MAYBE = 2

    def __invert__(self) -> BoolInterval:
        if self is BoolInterval.FALSE:
            return BoolInterval.TRUE
        if self is BoolInterval.TRUE:
            return BoolInterval.FALSE
        return BoolInterval.MAYBE


class UnbisectableError(ValueError):
    """Raised when bisecting a box of zero width."""


class Interval:
    """Closed interval ``[lo, hi]`` of extended reals, or the empty set."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None) -> None:
        if hi is None:
            hi = lo
        lo = float(lo)
        hi = float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"lo > hi: [{lo}, {hi}] (use Interval.empty())")
        self.lo = lo
        self.hi = hi

    @classmethod
    def empty(cls) -> Interval:
        return _EMPTY

    @classmethod
    def entire(cls) -> Interval:
        return cls(-_INF, _INF)

    @classmethod
    def _raw(cls, lo: float, hi: float) -> Interval:
        # no validation; caller guarantees lo <= hi
        obj = object.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def _rounded(cls, lo: float, hi: float) -> Interval:
        if _OUTWARD_ULPS:
            lo, hi = _widen(lo, hi)
        return cls._raw(lo, hi)

    @classmethod
    def hull_of(cls, values: Iterable[float]) -> Interval:
        lo, hi = _INF, -_INF
        for v in values:
            if v < lo:
                lo = v
            if v > hi:
                hi = v
        if lo > hi:
            return _EMPTY
        return cls._raw(lo, hi)

    # -- predicates ---------------------------------------------------------

    def is_empty(self) -> bool:
        return self.lo > self.hi

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def width(self) -> float:
        if self.is_empty():
            return 0.0
        return self.hi - self.lo

    def mid(self) -> float:
        if self.is_empty():
            raise ValueError("midpoint of empty interval")
        if self.lo == -_INF and self.hi == _INF:
            return 0.0
        if self.lo == -_INF:
            return -math.ldexp(1.0, 1023)
        if self.hi == _INF:
            return math.ldexp(1.0, 1023)
        return 0.5 * self.lo + 0.5 * self.hi

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def __contains__(self, v: float) -> bool:
        return self.contains(v)

    def subset(self, other: Interval) -> bool:
        """True if ``self`` is a subset of ``other`` (empty is a subset of all)."""
        if self.is_empty():
            return True
        return other.lo <= self.lo and self.hi <= other.hi

    def overlaps(self, other: Interval) -> bool:
        return not (self & other).is_empty()

    # -- lattice ------------------------------------------------------------

    def intersect(self, other: Interval) -> Interval:
        lo = self.lo if self.lo > other.lo else other.lo
        hi = self.hi if self.hi < other.hi else other.hi
        if lo > hi:
            return _EMPTY
        return Interval._raw(lo, hi)

    def hull(self, other: Interval) -> Interval:
        if self.is_empty():
            return other
        if other.is_empty():
            return self
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    __and__ = intersect
    __or__ = hull

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> Interval:
        if self.is_empty():
            return _EMPTY
        return Interval._raw(-self.hi, -self.lo)

    def __add__(self, other: Interval | float) -> Interval:
        other = _coerce(other)
        if self.is_empty() or other.is_empty():
            return _EMPTY
        return Interval._rounded(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other: Interval | float) -> Interval:
        other = _coerce(other)
        if self.is_empty() or other.is_empty():
            return _EMPTY
        return Interval._rounded(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other: float) -> Interval:
        return _coerce(other) - self

    def __mul__(self, other: Interval | float) -> Interval:
        other = _coerce(other)
        if self.is_empty() or other.is_empty():
            return _EMPTY
        prods = [
            _mul0(self.lo, other.lo),
            _mul0(self.lo, other.hi),
            _mul0(self.hi, other.lo),
            _mul0(self.hi, other.hi),
        ]
        return Interval._rounded(min(prods), max(prods))

    __rmul__ = __mul__

    def sqr(self) -> Interval:
        if self.is_empty():
            return _EMPTY
        lo, hi = self.lo, self.hi
        if lo >= 0.0:
            return Interval._rounded(lo * lo, hi * hi)
        if hi <= 0.0:
            return Interval._rounded(hi * hi, lo * lo)
        m = max(-lo, hi)
        return Interval._rounded(0.0, m * m)

    def sqrt(self) -> Interval:
        if self.is_empty() or self.hi < 0.0:
            return _EMPTY
        lo = max(self.lo, 0.0)
        r = Interval._rounded(math.sqrt(lo), math.sqrt(self.hi))
        if r.lo < 0.0:
            r = Interval._raw(0.0, r.hi)
        return r

    def __abs__(self) -> Interval:
        if self.is_empty():
            return _EMPTY
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval._raw(0.0, max(-self.lo, self.hi))

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        if self.is_empty() or other.is_empty():
            return self.is_empty() and other.is_empty()
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        if self.is_empty():
            return hash("EMPTY")
        return hash((self.lo, self.hi))

    def __iter__(self) -> Iterator[float]:
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        if self.is_empty():
            return "Interval.empty()"
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self) -> str:
        if self.is_empty():
            return "EMPTY"
        return f"[{fmt_real(self.lo)},{fmt_real(self.hi)}]"

    @classmethod
    def parse(cls, text: str) -> Interval:
        """Inverse of ``str()``: accepts ``[lo,hi]`` or ``EMPTY``."""
        text = text.strip()
        if text == "EMPTY":
            return _EMPTY
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"cannot parse interval: {text!r}")
        lo, hi = text[1:-1].split(",")
        return cls(float(lo), float(hi))


def _mul0(x: float, y: float) -> float:
    # 0 * inf is taken as 0 (set semantics)
    if x == 0.0 or y == 0.0:
        return 0.0
    return x * y


def _coerce(v: Interval | float) -> Interval:
    if isinstance(v, Interval):
        return v
    return Interval(v)


_EMPTY = Interval._raw(_INF, -_INF)


def set_minus_hull(y: Interval, a: Interval) -> Interval:
    """Interval hull of ``{v in y : v not in a}``."""
    if y.is_empty():
        return _EMPTY
    common = y & a
    if common.is_empty():
        return y
    # pieces of y strictly left / right of a; their hull
    left = y.lo < common.lo
    right = common.hi < y.hi
    if left and right:
        return y
    if left:
        return Interval._raw(y.lo, common.lo)
    if right:
        return Interval._raw(common.hi, y.hi)
    return _EMPTY


class IntervalBox:
    """Cartesian product of intervals. Empty if any component is empty."""

    __slots__ = ("_dims",)

    def __init__(self, dims: Iterable[Interval | Sequence[float]]) -> None:
        out = []
        for d in dims:
            if not isinstance(d, Interval):
                lo, hi = d
                d = Interval(lo, hi)
            out.append(d)
        if not out:
            raise ValueError("a box needs at least one dimension")
        self._dims = tuple(out)

    @classmethod
    def from_bounds(cls, *bounds: float) -> IntervalBox:
        """``from_bounds(x1lo, x1hi, x2lo, x2hi, ...)``."""
        if len(bounds) % 2:
            raise ValueError("need an even number of bounds")
        return cls(Interval(bounds[i], bounds[i + 1]) for i in range(0, len(bounds), 2))

    @classmethod
    def point(cls, *coords: float) -> IntervalBox:
        return cls(Interval(c) for c in coords)

    @classmethod
    def empty(cls, n: int) -> IntervalBox:
        return cls([_EMPTY] * n)

    @classmethod
    def entire(cls, n: int) -> IntervalBox:
        return cls([Interval.entire()] * n)

    # sequence protocol
    def __len__(self) -> int:
        return len(self._dims)

    def __getitem__(self, i: int) -> Interval:
        return self._dims[i]

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._dims)

    @property
    def dims(self) -> tuple[Interval, ...]:
        return self._dims

    def is_empty(self) -> bool:
        return any(d.lo > d.hi for d in self._dims)

    def is_finite(self) -> bool:
        return all(d.is_finite() for d in self._dims)

    def width(self) -> float:
        """Max-component (infinity-norm) width."""
        if self.is_empty():
            return 0.0
        return max(d.hi - d.lo for d in self._dims)

    def volume(self) -> float:
        if self.is_empty():
            return 0.0
        v = 1.0
        for d in self._dims:
            v *= d.hi - d.lo
        return v

    def lower(self) -> tuple[float, ...]:
        return tuple(d.lo for d in self._dims)

    def upper(self) -> tuple[float, ...]:
        return tuple(d.hi for d in self._dims)

    def bounds(self) -> tuple[float, ...]:
        out: list[float] = []
        for d in self._dims:
            out += (d.lo, d.hi)
        return tuple(out)

    def mid(self) -> tuple[float, ...]:
        return tuple(d.mid() for d in self._dims)

    def contains(self, p: Sequence[float]) -> bool:
        return all(d.lo <= v <= d.hi for d, v in zip(self._dims, p))

    def subset(self, other: IntervalBox) -> bool:
        if self.is_empty():
            return True
        return all(a.subset(b) for a, b in zip(self._dims, other._dims))

    def intersect(self, other: IntervalBox) -> IntervalBox:
        _check_dim(self, other)
        res = IntervalBox.__new__(IntervalBox)
        res._dims = tuple(a & b for a, b in zip(self._dims, other._dims))
        if res.is_empty():
            return IntervalBox.empty(len(self))
        return res

    def hull(self, other: IntervalBox) -> IntervalBox:
        _check_dim(self, other)
        if self.is_empty():
            return other
        if other.is_empty():
            return self
        res = IntervalBox.__new__(IntervalBox)
        res._dims = tuple(a | b for a, b in zip(self._dims, other._dims))
        return res

    __and__ = intersect
    __or__ = hull

    def bisect(self) -> tuple[IntervalBox, IntervalBox]:
        """Split the widest component at its midpoint (lowest index on ties)."""
        if self.is_empty():
            raise UnbisectableError("cannot bisect an empty box")
        k = 0
        wk = -1.0
        for i, d in enumerate(self._dims):
            w = d.hi - d.lo
            if w > wk:
                k, wk = i, w
        if wk <= 0.0:
            raise UnbisectableError(f"cannot bisect degenerate box {self}")
        d = self._dims[k]
        m = d.mid()
        left = list(self._dims)
        right = list(self._dims)
        left[k] = Interval._raw(d.lo, m)
        right[k] = Interval._raw(m, d.hi)
        return IntervalBox(left), IntervalBox(right)

    def diff(self, other: IntervalBox) -> list[IntervalBox]:
        """Boxes covering ``self \\ other`` (closures; they may share faces)."""
        _check_dim(self, other)
        if self.is_empty():
            return []
        inter = self & other
        if inter.is_empty():
            return [self]
        pieces = []
        rest = list(self._dims)
        for i, (s, c) in enumerate(zip(self._dims, inter._dims)):
            if s.lo < c.lo:
                piece = list(rest)
                piece[i] = Interval._raw(s.lo, c.lo)
                pieces.append(IntervalBox(piece))
            if c.hi < s.hi:
                piece = list(rest)
                piece[i] = Interval._raw(c.hi, s.hi)
                pieces.append(IntervalBox(piece))
            rest[i] = c
        return pieces

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalBox):
            return NotImplemented
        if self.is_empty() or other.is_empty():
            return self.is_empty() and other.is_empty() and len(self) == len(other)
        return self._dims == other._dims

    def __hash__(self) -> int:
        if self.is_empty():
            return hash(("EMPTY", len(self)))
        return hash(self._dims)

    def __repr__(self) -> str:
        return f"IntervalBox({list(self._dims)!r})"

    def __str__(self) -> str:
        if self.is_empty():
            return "EMPTY"
        return "x".join(str(d) for d in self._dims)


def _check_dim(a: IntervalBox, b: IntervalBox) -> None:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
