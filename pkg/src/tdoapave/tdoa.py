"""
Exact range of the TDoA function over a 2-D box.

For foci ``a`` and ``b`` the TDoA function is

    f(x) = ||x - a|| - ||x - b||

Over a non-degenerate box, the extrema of ``f`` can only sit at the four
corners, at one stationary point per edge, or on the two half-lines of the
line ``(a, b)`` that lie outside the segment ``[a, b]`` (where ``f`` is
constant and equal to ``-||a-b||`` beyond ``a`` and ``+||a-b||`` beyond
``b``). Those half-lines always cross the box boundary when they meet the
box, so enumerating boundary candidates is enough to get the exact range.

On the vertical edge ``x1 = c`` the stationary ordinate is

    x2 = (a2 |c - b1| - b2 |c - a1|) / (|c - b1| - |c - a1|)

valid when ``(x2 - a2)(x2 - b2) >= 0``; horizontal edges are symmetric.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .interval import BoolInterval, Interval, IntervalBox, get_outward_ulps

__all__ = [
    "TdoaConstraint",
    "CriticalPointSet",
    "DegenerateFociWarning",
    "tdoa_eval",
    "tdoa_gradient",
    "phi1",
    "phi2",
    "critical_points",
    "minimal_range",
    "natural_range",
    "inclusion_test",
    "range_of",
]

_hypot = math.hypot
_DENOM_RTOL = 1e-12
_SIGN_TOL = 1e-12


class DegenerateFociWarning(UserWarning):
    """Emitted when both foci coincide, in which case f is identically zero."""


@dataclass(frozen=True)
class TdoaConstraint:
    """Pair of foci ``(a, b)`` defining ``f(x) = ||x-a|| - ||x-b||``."""

    a: tuple[float, float]
    b: tuple[float, float]

    def __post_init__(self) -> None:
        a = (float(self.a[0]), float(self.a[1]))
        b = (float(self.b[0]), float(self.b[1]))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a == b:
            warnings.warn(
                f"coincident foci {a}: TDoA function is identically 0",
                DegenerateFociWarning,
                stacklevel=3,
            )

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    @property
    def baseline(self) -> float:
        """``||a - b||``, the bound on ``|f|``."""
        return _hypot(self.a[0] - self.b[0], self.a[1] - self.b[1])

    def global_range(self) -> Interval:
        d = self.baseline
        return Interval(-d, d)

    def swapped(self) -> TdoaConstraint:
        return TdoaConstraint(self.b, self.a)

    def __call__(self, x: Sequence[float]) -> float:
        return tdoa_eval(x, self)


def tdoa_eval(x: Sequence[float], c: TdoaConstraint) -> float:
    (a1, a2), (b1, b2) = c.a, c.b
    return _hypot(x[0] - a1, x[1] - a2) - _hypot(x[0] - b1, x[1] - b2)


def tdoa_gradient(x: Sequence[float], c: TdoaConstraint) -> tuple[float, float] | None:
    """Analytic gradient of f, or None at a focus (f is not differentiable there)."""
    (a1, a2), (b1, b2) = c.a, c.b
    da = _hypot(x[0] - a1, x[1] - a2)
    db = _hypot(x[0] - b1, x[1] - b2)
    if da == 0.0 or db == 0.0:
        return None
    return (
        (x[0] - a1) / da - (x[0] - b1) / db,
        (x[1] - a2) / da - (x[1] - b2) / db,
    )


def _phi(u: float, ua: float, va: float, ub: float, vb: float) -> float | None:
    # stationary coordinate v on the line {coord u fixed}
    pa = abs(u - ua)
    pb = abs(u - ub)
    den = pb - pa
    if abs(den) <= _DENOM_RTOL * (1.0 + abs(u)):
        return None
    return (va * pb - vb * pa) / den


def phi1(x1: float, c: TdoaConstraint) -> float | None:
    """Ordinate of the stationary point of ``x2 -> f(x1, x2)``, if isolated."""
    return _phi(x1, c.a[0], c.a[1], c.b[0], c.b[1])


def phi2(x2: float, c: TdoaConstraint) -> float | None:
    """Abscissa of the stationary point of ``x1 -> f(x1, x2)``, if isolated."""
    return _phi(x2, c.a[1], c.a[0], c.b[1], c.b[0])


@dataclass
class CriticalPointSet:
    """Boundary candidates for the extrema of f over a box.

    ``edge_points`` holds ``(point, edge)`` pairs with ``edge`` one of
    ``"x1lo"``, ``"x1hi"`` (vertical edges) or ``"x2lo"``, ``"x2hi"``.
    ``ray_ends[i]`` is ``"a"`` or ``"b"``: the focus beyond which
    ``ray_points[i]`` lies.
    """

    corners: list[tuple[float, float]] = field(default_factory=list)
    edge_points: list[tuple[tuple[float, float], str]] = field(default_factory=list)
    ray_points: list[tuple[float, float]] = field(default_factory=list)
    ray_ends: list[str] = field(default_factory=list)

    def points(self) -> list[tuple[float, float]]:
        return self.corners + [p for p, _ in self.edge_points] + self.ray_points

    def values(self, c: TdoaConstraint) -> list[float]:
        """f at every candidate; exterior-ray points get their exact value -d or +d."""
        d = c.baseline
        vals = [tdoa_eval(p, c) for p in self.corners + [p for p, _ in self.edge_points]]
        vals += [-d if end == "a" else d for end in self.ray_ends]
        return [min(max(v, -d), d) for v in vals]


def _candidates(x1l, x1h, x2l, x2h, a1, a2, b1, b2):
    corners = [(x1l, x2l), (x1l, x2h), (x1h, x2l), (x1h, x2h)]

    edges = []
    for x1, tag in ((x1l, "x1lo"), (x1h, "x1hi")):
        t = _phi(x1, a1, a2, b1, b2)
        if t is not None and x2l <= t <= x2h and (t - a2) * (t - b2) >= -_SIGN_TOL:
            edges.append(((x1, t), tag))
        if x1h == x1l:
            break
    for x2, tag in ((x2l, "x2lo"), (x2h, "x2hi")):
        s = _phi(x2, a2, a1, b2, b1)
        if s is not None and x1l <= s <= x1h and (s - a1) * (s - b1) >= -_SIGN_TOL:
            edges.append(((s, x2), tag))
        if x2h == x2l:
            break

    # line through the foci, parameterised from the lexicographically smaller one
    # so that swapping a and b yields bit-identical candidates
    # (each ray point is tagged with the focus its half-line starts from)
    if (a1, a2) > (b1, b2):
        p1, p2, q1, q2, pe, qe = b1, b2, a1, a2, "b", "a"
    else:
        p1, p2, q1, q2, pe, qe = a1, a2, b1, b2, "a", "b"
    d1 = q1 - p1
    d2 = q2 - p2
    rays = []
    if d1 != 0.0:
        for x1 in (x1l, x1h):
            s = (x1 - p1) / d1
            if s <= 0.0 or s >= 1.0:
                y = p2 + s * d2
                if x2l <= y <= x2h:
                    rays.append(((x1, y), pe if s <= 0.0 else qe))
    if d2 != 0.0:
        for x2 in (x2l, x2h):
            s = (x2 - p2) / d2
            if s <= 0.0 or s >= 1.0:
                x = p1 + s * d1
                if x1l <= x <= x1h:
                    rays.append(((x, x2), pe if s <= 0.0 else qe))
    return corners, edges, rays


def critical_points(box: IntervalBox, c: TdoaConstraint) -> CriticalPointSet:
    """Corners, stationary edge points and exterior-ray crossings of ``box``."""
    if len(box) != 2:
        raise ValueError("TDoA boxes are 2-D")
    if box.is_empty():
        return CriticalPointSet()
    (x1l, x1h), (x2l, x2h) = box[0], box[1]
    (a1, a2), (b1, b2) = c.a, c.b
    corners, edges, rays = _candidates(x1l, x1h, x2l, x2h, a1, a2, b1, b2)
    corners = list(dict.fromkeys(corners))
    return CriticalPointSet(corners, edges, [p for p, _ in rays], [e for _, e in rays])


def kkt_bounds(x1l, x1h, x2l, x2h, a1, a2, b1, b2) -> tuple[float, float]:
    """Float-level core of :func:`minimal_range` (no degeneracy handling)."""
    corners, edges, rays = _candidates(x1l, x1h, x2l, x2h, a1, a2, b1, b2)
    lo = math.inf
    hi = -math.inf
    for p1, p2 in corners:
        v = _hypot(p1 - a1, p2 - a2) - _hypot(p1 - b1, p2 - b2)
        if v < lo:
            lo = v
        if v > hi:
            hi = v
    for (p1, p2), _ in edges:
        v = _hypot(p1 - a1, p2 - a2) - _hypot(p1 - b1, p2 - b2)
        if v < lo:
            lo = v
        if v > hi:
            hi = v
    # f is exactly -d beyond a and +d beyond b on the foci line
    d = _hypot(b1 - a1, b2 - a2)
    for _, end in rays:
        if end == "a":
            lo = -d
        else:
            hi = d
    if lo < -d:
        lo = -d
    if hi > d:
        hi = d
    return lo, hi


def minimal_range(box: IntervalBox, c: TdoaConstraint) -> Interval:
    """Exact image ``f(box)`` (up to floating-point evaluation of f)."""
    if len(box) != 2:
        raise ValueError("TDoA boxes are 2-D")
    if box.is_empty():
        return Interval.empty()
    if c.degenerate:
        return Interval(0.0)
    (x1l, x1h), (x2l, x2h) = box[0], box[1]
    if not box.is_finite():
        # unbounded boxes: fall back to the global bound, which is attained
        # on any unbounded box containing an exterior ray, else a superset
        return natural_range(box, c) & c.global_range()
    lo, hi = kkt_bounds(x1l, x1h, x2l, x2h, c.a[0], c.a[1], c.b[0], c.b[1])
    return Interval._rounded(lo, hi)


def _sqr_bounds(lo: float, hi: float) -> tuple[float, float]:
    if lo >= 0.0:
        return lo * lo, hi * hi
    if hi <= 0.0:
        return hi * hi, lo * lo
    m = -lo if -lo > hi else hi
    return 0.0, m * m


def natural_bounds(x1l, x1h, x2l, x2h, a1, a2, b1, b2) -> tuple[float, float]:
    """Float-level natural interval extension of f, without outward rounding."""
    s1l, s1h = _sqr_bounds(x1l - a1, x1h - a1)
    s2l, s2h = _sqr_bounds(x2l - a2, x2h - a2)
    t1l, t1h = _sqr_bounds(x1l - b1, x1h - b1)
    t2l, t2h = _sqr_bounds(x2l - b2, x2h - b2)
    ral, rah = math.sqrt(s1l + s2l), math.sqrt(s1h + s2h)
    rbl, rbh = math.sqrt(t1l + t2l), math.sqrt(t1h + t2h)
    return ral - rbh, rah - rbl


def natural_range(box: IntervalBox, c: TdoaConstraint) -> Interval:
    """Natural interval extension: sqrt of sums of interval squares, subtracted."""
    if len(box) != 2:
        raise ValueError("TDoA boxes are 2-D")
    if box.is_empty():
        return Interval.empty()
    x1, x2 = box[0], box[1]
    if get_outward_ulps() or not box.is_finite():
        (a1, a2), (b1, b2) = c.a, c.b
        da = ((x1 - a1).sqr() + (x2 - a2).sqr()).sqrt()
        db = ((x1 - b1).sqr() + (x2 - b2).sqr()).sqrt()
        return da - db
    lo, hi = natural_bounds(x1.lo, x1.hi, x2.lo, x2.hi, c.a[0], c.a[1], c.b[0], c.b[1])
    return Interval(lo, hi)


def range_of(box: IntervalBox, c: TdoaConstraint, method: str = "kkt") -> Interval:
    if method == "kkt":
        return minimal_range(box, c)
    if method == "natural":
        return natural_range(box, c)
    raise ValueError(f"unknown range method {method!r} (expected 'kkt' or 'natural')")


def classify_range(rng: Interval, y: Interval) -> BoolInterval:
    if (rng & y).is_empty():
        return BoolInterval.FALSE
    if rng.subset(y):
        return BoolInterval.TRUE
    return BoolInterval.MAYBE


def inclusion_test(
    box: IntervalBox, y: Interval, c: TdoaConstraint, method: str = "kkt"
) -> BoolInterval:
    """Test ``box`` against ``{x : f(x) in y}``."""
    return classify_range(range_of(box, c, method), y)
