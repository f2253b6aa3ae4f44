"""
Contractors, separators and the action of a correspondence on a separator.

A contractor maps a box to a sub-box without losing any point of its set. A
separator for ``X`` is a pair ``(inner, outer)``: ``outer`` is a contractor for
``X`` and ``inner`` a contractor for its complement. :meth:`Separator.separate`
returns ``(inner(box), outer(box))``.

The TDoA correspondence links a position ``x`` in the plane to the vector
``y`` of pseudo-distances ``y_i = ||x - m_i|| - ||x - m_{i+1}||``. Its
contractor tightens the ``y`` side with the exact range and is binary on the
``x`` side (the box is kept whole or emptied).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .interval import BoolInterval, Interval, IntervalBox, get_outward_ulps
from .tdoa import TdoaConstraint, kkt_bounds, natural_bounds, range_of

__all__ = [
    "Contractor",
    "Separator",
    "InclusionSeparator",
    "DiskSet",
    "Correspondence",
    "binary_contractor",
    "identity_contractor",
    "empty_contractor",
    "disk_separator",
    "box_separator",
    "tdoa_separator",
    "full_separator",
    "empty_separator",
    "sep_union",
    "sep_intersection",
    "contract_pair",
    "forward",
    "backward",
    "act_inverse",
    "act_forward",
]

Test = Callable[[IntervalBox], BoolInterval]
_INF = math.inf


class Contractor:
    """A box-to-box evaluation rule; ``C(box)`` must be a subset of ``box``."""

    def __init__(self, fn: Callable[[IntervalBox], IntervalBox], name: str = "") -> None:
        self._fn = fn
        self.name = name or getattr(fn, "__name__", "contractor")

    def __call__(self, box: IntervalBox) -> IntervalBox:
        if box.is_empty():
            return box
        return self._fn(box)

    def __repr__(self) -> str:
        return f"Contractor({self.name})"


def binary_contractor(test: Test) -> Contractor:
    """Empty the box when ``test`` says FALSE, otherwise leave it untouched."""

    def contract(box: IntervalBox) -> IntervalBox:
        if test(box) is BoolInterval.FALSE:
            return IntervalBox.empty(len(box))
        return box

    return Contractor(contract, "binary")


def identity_contractor() -> Contractor:
    return Contractor(lambda box: box, "identity")


def empty_contractor() -> Contractor:
    return Contractor(lambda box: IntervalBox.empty(len(box)), "empty")


class Separator:
    """Pair of contractors: ``outer`` for the set, ``inner`` for its complement."""

    def __init__(self, inner: Contractor, outer: Contractor) -> None:
        self.inner = inner
        self.outer = outer

    def separate(self, box: IntervalBox) -> tuple[IntervalBox, IntervalBox]:
        return self.inner(box), self.outer(box)

    def __or__(self, other: Separator) -> Separator:
        return sep_union(self, other)

    def __and__(self, other: Separator) -> Separator:
        return sep_intersection(self, other)


class InclusionSeparator(Separator):
    """Separator made of the two binary contractors of an inclusion test.

    The test is evaluated once per box in :meth:`separate`.
    """

    def __init__(self, test: Test) -> None:
        self.test = test
        super().__init__(
            inner=binary_contractor(lambda box: ~test(box)),
            outer=binary_contractor(test),
        )

    def separate(self, box: IntervalBox) -> tuple[IntervalBox, IntervalBox]:
        if box.is_empty():
            return box, box
        t = self.test(box)
        if t is BoolInterval.FALSE:
            return box, IntervalBox.empty(len(box))
        if t is BoolInterval.TRUE:
            return IntervalBox.empty(len(box)), box
        return box, box


@dataclass(frozen=True)
class DiskSet:
    """Closed disk ``{y : ||y - center|| <= radius}``."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius >= 0.0:
            raise ValueError(f"disk radius must be >= 0, got {self.radius}")

    def contains(self, p: Sequence[float]) -> bool:
        return math.hypot(p[0] - self.center[0], p[1] - self.center[1]) <= self.radius

    def distance_bounds(self, box: IntervalBox) -> tuple[float, float]:
        """Min and max distance from the center to points of ``box``."""
        cx, cy = self.center
        x, y = box[0], box[1]
        dx = max(x.lo - cx, 0.0, cx - x.hi)
        dy = max(y.lo - cy, 0.0, cy - y.hi)
        fx = max(abs(x.lo - cx), abs(x.hi - cx))
        fy = max(abs(y.lo - cy), abs(y.hi - cy))
        return math.hypot(dx, dy), math.hypot(fx, fy)

    def test(self, box: IntervalBox) -> BoolInterval:
        dmin, dmax = self.distance_bounds(box)
        if dmax <= self.radius:
            return BoolInterval.TRUE
        if dmin > self.radius:
            return BoolInterval.FALSE
        return BoolInterval.MAYBE


def disk_separator(d: DiskSet) -> InclusionSeparator:
    return InclusionSeparator(d.test)


def box_separator(target: IntervalBox) -> Separator:
    """Separator for an axis-aligned box: intersect outside, hull of difference inside."""

    def outer(box: IntervalBox) -> IntervalBox:
        return box & target

    def inner(box: IntervalBox) -> IntervalBox:
        pieces = box.diff(target)
        out = IntervalBox.empty(len(box))
        for p in pieces:
            out = out | p
        return out

    return Separator(Contractor(inner, "box-inner"), Contractor(outer, "box-outer"))


def full_separator() -> Separator:
    """Separator of the whole space: outer keeps everything, inner empties."""
    return Separator(empty_contractor(), identity_contractor())


def empty_separator() -> Separator:
    """Separator of the empty set."""
    return Separator(identity_contractor(), empty_contractor())


def tdoa_separator(c: TdoaConstraint, y: Interval, method: str = "kkt") -> InclusionSeparator:
    """Separator for ``{x : ||x-a|| - ||x-b|| in y}`` built from an inclusion test."""
    if method not in ("kkt", "natural"):
        raise ValueError(f"unknown range method {method!r}")
    (a1, a2), (b1, b2) = c.a, c.b
    ylo, yhi = y.lo, y.hi
    bounds = kkt_bounds if method == "kkt" else natural_bounds
    fast = not c.degenerate

    def test(box: IntervalBox) -> BoolInterval:
        x1, x2 = box._dims
        if fast and not get_outward_ulps() and -_INF < x1.lo and x1.hi < _INF and -_INF < x2.lo and x2.hi < _INF:
            lo, hi = bounds(x1.lo, x1.hi, x2.lo, x2.hi, a1, a2, b1, b2)
        else:
            r = range_of(box, c, method)
            lo, hi = r.lo, r.hi
        if hi < ylo or lo > yhi:
            return BoolInterval.FALSE
        if ylo <= lo and hi <= yhi:
            return BoolInterval.TRUE
        return BoolInterval.MAYBE

    sep = InclusionSeparator(test)
    sep.constraint = c
    sep.y = y
    sep.method = method
    return sep


def sep_union(s1: Separator, s2: Separator) -> Separator:
    """Separator for ``X1 | X2``: hull of outers, intersection of inners."""

    class _Union(Separator):
        def separate(self, box):
            i1, o1 = s1.separate(box)
            i2, o2 = s2.separate(box)
            return i1 & i2, o1 | o2

    return _Union(
        inner=Contractor(lambda b: s1.inner(b) & s2.inner(b), "union-inner"),
        outer=Contractor(lambda b: s1.outer(b) | s2.outer(b), "union-outer"),
    )


def sep_intersection(s1: Separator, s2: Separator) -> Separator:
    """Separator for ``X1 & X2``: intersection of outers, hull of inners."""

    class _Inter(Separator):
        def separate(self, box):
            i1, o1 = s1.separate(box)
            i2, o2 = s2.separate(box)
            return i1 | i2, o1 & o2

    return _Inter(
        inner=Contractor(lambda b: s1.inner(b) | s2.inner(b), "inter-inner"),
        outer=Contractor(lambda b: s1.outer(b) & s2.outer(b), "inter-outer"),
    )


# -- correspondences ---------------------------------------------------------


class Correspondence:
    """System of TDoA constraints ``y_i = ||x - a_i|| - ||x - b_i||``.

    ``method`` selects the range enclosure used on the ``y`` side.
    """

    x_dim = 2

    def __init__(self, constraints: Sequence[TdoaConstraint], method: str = "kkt") -> None:
        if not constraints:
            raise ValueError("a correspondence needs at least one constraint")
        self.constraints = tuple(constraints)
        self.method = method

    @classmethod
    def from_microphones(cls, mics: Sequence[Sequence[float]], method: str = "kkt") -> Correspondence:
        """Consecutive pairs: ``y_i = ||x - m_i|| - ||x - m_{i+1}||``."""
        if len(mics) < 2:
            raise ValueError("need at least two microphones")
        pts = [tuple(m) for m in mics]
        return cls([TdoaConstraint(pts[i], pts[i + 1]) for i in range(len(pts) - 1)], method)

    @property
    def y_dim(self) -> int:
        return len(self.constraints)

    def __call__(self, x: Sequence[float]) -> tuple[float, ...]:
        return tuple(c(x) for c in self.constraints)

    def global_range(self) -> IntervalBox:
        return IntervalBox(c.global_range() for c in self.constraints)

    def ranges(self, xbox: IntervalBox) -> IntervalBox:
        if xbox.is_empty():
            return IntervalBox.empty(self.y_dim)
        return IntervalBox(range_of(xbox, c, self.method) for c in self.constraints)


def contract_pair(
    F: Correspondence, xbox: IntervalBox, ybox: IntervalBox
) -> tuple[IntervalBox, IntervalBox]:
    """Contract ``(xbox, ybox)`` w.r.t. ``F``; the x side is binary."""
    if len(ybox) != F.y_dim:
        raise ValueError(f"ybox has {len(ybox)} components, expected {F.y_dim}")
    if xbox.is_empty() or ybox.is_empty():
        return IntervalBox.empty(F.x_dim), IntervalBox.empty(F.y_dim)
    y_new = ybox & F.ranges(xbox)
    if y_new.is_empty():
        return IntervalBox.empty(F.x_dim), IntervalBox.empty(F.y_dim)
    return xbox, y_new


def forward(F: Correspondence, xbox: IntervalBox, ybox: IntervalBox) -> IntervalBox:
    return contract_pair(F, xbox, ybox)[1]


def backward(F: Correspondence, xbox: IntervalBox, ybox: IntervalBox) -> IntervalBox:
    return contract_pair(F, xbox, ybox)[0]


def _diff_hull(box: IntervalBox, other: IntervalBox) -> IntervalBox:
    out = IntervalBox.empty(len(box))
    for p in box.diff(other):
        out = out | p
    return out


class _InverseAction(Separator):
    def __init__(self, F: Correspondence, sY: Separator, frame: IntervalBox) -> None:
        self.F = F
        self.sY = sY
        self.frame = frame
        self._yall = IntervalBox.entire(F.y_dim)
        super().__init__(
            inner=Contractor(lambda b: self.separate(b)[0], "action-inner"),
            outer=Contractor(lambda b: self.separate(b)[1], "action-outer"),
        )

    def separate(self, xbox):
        F = self.F
        empty = IntervalBox.empty(F.x_dim)
        if xbox.is_empty():
            return empty, empty
        yhat = forward(F, xbox, self._yall)
        yin, yout = self.sY.separate(yhat)
        x_out = backward(F, xbox, yout)
        x_in = backward(F, xbox, yin)
        # dom F is the whole plane; the frame stands in for it
        x_in = _diff_hull(xbox, self.frame) | x_in
        return x_in, x_out


def act_inverse(F: Correspondence, sY: Separator, frame: IntervalBox) -> Separator:
    """Separator for ``{x : exists y in Y, (x, y) in F}`` given a separator for Y."""
    return _InverseAction(F, sY, frame)


class _ForwardAction(Separator):
    def __init__(self, F: Correspondence, sX: Separator, frame: IntervalBox) -> None:
        self.F = F
        self.sX = sX
        self.frame = frame
        # hull of F applied to the frame, standing in for the range of F
        self.image_hull = F.ranges(frame)
        super().__init__(
            inner=Contractor(lambda b: self.separate(b)[0], "action-inner"),
            outer=Contractor(lambda b: self.separate(b)[1], "action-outer"),
        )

    def separate(self, ybox):
        F = self.F
        empty = IntervalBox.empty(F.y_dim)
        if ybox.is_empty():
            return empty, empty
        xhat = backward(F, self.frame, ybox)
        xin, xout = self.sX.separate(xhat)
        y_out = forward(F, xout, ybox)
        y_in = forward(F, xin, ybox)
        y_in = _diff_hull(ybox, self.image_hull) | y_in
        return y_in, y_out


def act_forward(F: Correspondence, sX: Separator, frame: IntervalBox) -> Separator:
    """Separator for the image ``{y : exists x in X, (x, y) in F}`` of X."""
    return _ForwardAction(F, sX, frame)
