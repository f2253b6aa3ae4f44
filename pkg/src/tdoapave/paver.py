"""
Branch-and-classify paver (SIVIA) and the paving exchange formats.

Boxes are processed depth-first, lower half first. Parts removed by a
separator's outer contractor are outside the set, parts removed by the inner
contractor are inside; what remains is bisected until its width drops to
``eps`` or below. The resulting leaf lists are sorted lexicographically, so
the output does not depend on the processing schedule.
"""

from __future__ import annotations

import enum
import math
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .interval import Interval, IntervalBox, fmt_real
from .separators import Separator

__all__ = [
    "Paving",
    "PavingStats",
    "Membership",
    "NumericalFailure",
    "pave",
    "paving_contains",
    "read_paving",
    "paving_to_svg",
    "layered_svg",
]

FORMAT_HEADER = "# paving v1"


class Membership(enum.Enum):
    IN = "IN"
    OUT = "OUT"
    MAYBE = "MAYBE"


class NumericalFailure(RuntimeError):
    """A contractor returned a box that is not a subset of its input."""


@dataclass
class PavingStats:
    n_inside: int = 0
    n_outside: int = 0
    n_boundary: int = 0
    n_bisections: int = 0
    wall_time: float = 0.0

    @property
    def n_leaves(self) -> int:
        return self.n_inside + self.n_outside + self.n_boundary

    @property
    def n_boxes(self) -> int:
        """Boxes handled by the paver: every leaf plus every bisected box."""
        return self.n_leaves + self.n_bisections

    def as_dict(self) -> dict:
        return {
            "n_inside": self.n_inside,
            "n_outside": self.n_outside,
            "n_boundary": self.n_boundary,
            "n_leaves": self.n_leaves,
            "n_boxes": self.n_boxes,
            "n_bisections": self.n_bisections,
            "wall_time": self.wall_time,
        }


def _box_key(box: IntervalBox) -> tuple[float, ...]:
    return box.lower() + box.upper()


@dataclass
class Paving:
    inside: list[IntervalBox]
    outside: list[IntervalBox]
    boundary: list[IntervalBox]
    eps: float
    frame: IntervalBox
    stats: PavingStats = field(default_factory=PavingStats)

    def __post_init__(self) -> None:
        self._index = None
        self._buckets = None

    @property
    def n_leaves(self) -> int:
        return len(self.inside) + len(self.outside) + len(self.boundary)

    def leaves(self) -> list[tuple[Membership, IntervalBox]]:
        """All leaves, sorted lexicographically by lower then upper corner."""
        tagged = (
            [(Membership.IN, b) for b in self.inside]
            + [(Membership.OUT, b) for b in self.outside]
            + [(Membership.MAYBE, b) for b in self.boundary]
        )
        tagged.sort(key=lambda t: _box_key(t[1]))
        return tagged

    def area(self, which: str = "all") -> float:
        lists = {
            "inside": self.inside,
            "outside": self.outside,
            "boundary": self.boundary,
            "all": self.inside + self.outside + self.boundary,
        }[which]
        return math.fsum(b.volume() for b in lists)

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(lo, hi, cls)``: arrays of shape (n, d), (n, d), (n,) in sorted order.

        ``cls`` holds 0 for OUT, 1 for IN and 2 for MAYBE.
        """
        if self._index is None:
            leaves = self.leaves()
            d = len(self.frame)
            lo = np.array([b.lower() for _, b in leaves], dtype=float).reshape(-1, d)
            hi = np.array([b.upper() for _, b in leaves], dtype=float).reshape(-1, d)
            code = {Membership.OUT: 0, Membership.IN: 1, Membership.MAYBE: 2}
            cls = np.array([code[m] for m, _ in leaves], dtype=np.int8)
            self._index = (lo, hi, cls)
        return self._index

    def contains(self, x: Sequence[float]) -> Membership:
        return paving_contains(self, x)

    def classify_points(self, pts: np.ndarray) -> np.ndarray:
        """Vectorised membership codes (0 OUT, 1 IN, 2 MAYBE) for an (m, d) array.

        Points on shared faces get the class of the lexicographically first
        leaf; points outside every leaf get -1.
        """
        lo, hi, cls = self.as_arrays()
        pts = np.asarray(pts, dtype=float).reshape(-1, lo.shape[1] if len(lo) else len(self.frame))
        out = np.full(len(pts), -1, dtype=np.int8)
        if not len(lo) or not len(pts):
            return out
        buckets = self._grid()
        flo = np.array(self.frame.lower())
        fw = np.array(self.frame.upper()) - flo
        fw[fw == 0] = 1.0
        g = self._grid_n
        ij = np.clip(((pts - flo) / fw * g).astype(np.int64), 0, g - 1)
        cell_id = np.ravel_multi_index(tuple(ij.T), (g,) * ij.shape[1])
        order = np.argsort(cell_id, kind="stable")
        ids, starts = np.unique(cell_id[order], return_index=True)
        ends = np.append(starts[1:], len(order))
        for cid, s0, s1 in zip(ids, starts, ends):
            cand = buckets.get(int(cid))
            if cand is None:
                continue
            sel = order[s0:s1]
            p = pts[sel]
            hit = np.all((p[:, None, :] >= lo[cand][None]) & (p[:, None, :] <= hi[cand][None]), axis=2)
            first = hit.argmax(axis=1)
            found = hit[np.arange(len(sel)), first]
            out[sel] = np.where(found, cls[cand[first]], -1)
        return out

    _grid_n = 64

    def _grid(self):
        # leaves bucketed on a coarse uniform grid over the frame; each bucket
        # keeps leaf indices in sorted (lexicographic) order
        if getattr(self, "_buckets", None) is None:
            lo, hi, _ = self.as_arrays()
            g = self._grid_n
            flo = np.array(self.frame.lower())
            fw = np.array(self.frame.upper()) - flo
            fw[fw == 0] = 1.0
            a = np.clip(np.floor((lo - flo) / fw * g).astype(np.int64), 0, g - 1)
            b = np.clip(np.floor((hi - flo) / fw * g).astype(np.int64), 0, g - 1)
            buckets: dict[int, list[int]] = {}
            d = lo.shape[1]
            for k in range(len(lo)):
                ranges = [range(a[k, j], b[k, j] + 1) for j in range(d)]
                for idx in np.ndindex(*[len(r) for r in ranges]):
                    cid = int(np.ravel_multi_index(tuple(r[i] for r, i in zip(ranges, idx)), (g,) * d))
                    buckets.setdefault(cid, []).append(k)
            self._buckets = {c: np.array(v, dtype=np.int64) for c, v in buckets.items()}
        return self._buckets

    # -- text format ------------------------------------------------------

    def header(self) -> str:
        return f"{FORMAT_HEADER} eps={fmt_real(self.eps)} frame={self.frame}"

    def to_text(self) -> str:
        lines = [self.header()]
        for m, b in self.leaves():
            lines.append(" ".join([m.value] + [fmt_real(v) for v in b.bounds()]))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


def read_paving(source: str | Path) -> Paving:
    """Parse the text format written by :meth:`Paving.write`.

    ``source`` is a path or the text itself. Statistics other than the counts
    are not stored in the file and come back as zero.
    """
    text = str(source)
    if "\n" not in text:
        text = Path(source).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith(FORMAT_HEADER):
        raise ValueError("not a paving v1 file")
    head = dict(tok.split("=", 1) for tok in lines[0][len(FORMAT_HEADER) :].split())
    eps = float(head["eps"])
    frame = IntervalBox(Interval.parse(s) for s in head["frame"].split("x"))
    lists: dict[str, list[IntervalBox]] = {"IN": [], "OUT": [], "MAYBE": []}
    for ln in lines[1:]:
        if not ln.strip() or ln.startswith("#"):
            continue
        cls, *nums = ln.split()
        lists[cls].append(IntervalBox.from_bounds(*map(float, nums)))
    stats = PavingStats(len(lists["IN"]), len(lists["OUT"]), len(lists["MAYBE"]))
    return Paving(lists["IN"], lists["OUT"], lists["MAYBE"], eps, frame, stats)


def paving_contains(p: Paving, x: Sequence[float]) -> Membership:
    if not p.frame.contains(x):
        raise ValueError(f"point {tuple(x)} lies outside the frame {p.frame}")
    code = int(p.classify_points(np.asarray([x], dtype=float))[0])
    if code < 0:
        # only reachable if the paving does not cover the frame
        raise ValueError(f"no leaf contains {tuple(x)}")
    return (Membership.OUT, Membership.IN, Membership.MAYBE)[code]


# -- the paver -----------------------------------------------------------


class _Leaves:
    __slots__ = ("inside", "outside", "boundary", "n_bisections")

    def __init__(self) -> None:
        self.inside: list[IntervalBox] = []
        self.outside: list[IntervalBox] = []
        self.boundary: list[IntervalBox] = []
        self.n_bisections = 0

    def merge(self, other: _Leaves) -> None:
        self.inside += other.inside
        self.outside += other.outside
        self.boundary += other.boundary
        self.n_bisections += other.n_bisections


def _step(sep: Separator, box: IntervalBox, eps: float, acc: _Leaves):
    """Classify ``box``; return the two halves to process next, or None."""
    x_in, x_out = sep.separate(box)
    if x_out is not box:
        if not x_out.subset(box):
            raise NumericalFailure(f"outer contractor enlarged {box} to {x_out}")
        if x_out.is_empty():
            acc.outside.append(box)
            return None
        acc.outside += box.diff(x_out)
    rest = x_out
    if x_in is not box:
        if not x_in.subset(box):
            raise NumericalFailure(f"inner contractor enlarged {box} to {x_in}")
        x_in = x_in & rest
        if x_in.is_empty():
            acc.inside.append(rest)
            return None
        acc.inside += rest.diff(x_in)
        rest = x_in
    if rest.width() <= eps:
        acc.boundary.append(rest)
        return None
    acc.n_bisections += 1
    return rest.bisect()


def _run_dfs(sep: Separator, boxes: Sequence[IntervalBox], eps: float) -> _Leaves:
    acc = _Leaves()
    stack = list(reversed(boxes))
    pop, push = stack.pop, stack.append
    while stack:
        halves = _step(sep, pop(), eps, acc)
        if halves is not None:
            push(halves[1])
            push(halves[0])
    return acc


def pave(sep: Separator, frame: IntervalBox, eps: float, threads: int = 1) -> Paving:
    """Pave ``frame`` with ``sep`` down to boxes of width ``eps``.

    With ``threads > 1`` the top of the bisection tree is expanded
    breadth-first and the pending subtrees are handed to a thread pool. The
    tree, and therefore the sorted output, is the same as the serial run.
    """
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if frame.is_empty():
        raise ValueError("frame is empty")
    if not frame.is_finite():
        raise ValueError(f"frame must be finite, got {frame}")
    if threads < 1:
        raise ValueError("threads must be >= 1")

    t0 = time.perf_counter()
    if threads == 1:
        acc = _run_dfs(sep, [frame], eps)
    else:
        acc = _Leaves()
        pending: deque[IntervalBox] = deque([frame])
        while pending and len(pending) < 8 * threads:
            halves = _step(sep, pending.popleft(), eps, acc)
            if halves is not None:
                pending.extend(halves)
        chunks = [list(pending)[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for part in ex.map(lambda bs: _run_dfs(sep, bs, eps), chunks):
                acc.merge(part)
    wall = time.perf_counter() - t0

    for lst in (acc.inside, acc.outside, acc.boundary):
        lst.sort(key=_box_key)
    stats = PavingStats(
        n_inside=len(acc.inside),
        n_outside=len(acc.outside),
        n_boundary=len(acc.boundary),
        n_bisections=acc.n_bisections,
        wall_time=wall,
    )
    return Paving(acc.inside, acc.outside, acc.boundary, eps, frame, stats)


# -- SVG -----------------------------------------------------------------

DEFAULT_COLORS = {"inside": "#d62728", "outside": "#1f77b4", "boundary": "#ffdd55"}


def _svg_rects(boxes: Sequence[IntervalBox], fill: str, opacity: float = 1.0) -> Iterator[str]:
    op = "" if opacity == 1.0 else f' fill-opacity="{opacity:g}"'
    for b in boxes:
        x, y = b[0], b[1]
        yield (
            f'<rect x="{fmt_real(x.lo)}" y="{fmt_real(-y.hi)}" '
            f'width="{fmt_real(x.hi - x.lo)}" height="{fmt_real(y.hi - y.lo)}" '
            f'fill="{fill}"{op}/>'
        )


def _svg_doc(frame: IntervalBox, body: list[str], width_px: int) -> str:
    x, y = frame[0], frame[1]
    w, h = x.hi - x.lo, y.hi - y.lo
    height_px = max(1, round(width_px * h / w))
    # y axis flipped so that x2 grows upwards
    return "\n".join(
        [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height_px}" '
            f'viewBox="{fmt_real(x.lo)} {fmt_real(-y.hi)} {fmt_real(w)} {fmt_real(h)}" '
            'shape-rendering="crispEdges">',
            *body,
            "</svg>",
            "",
        ]
    )


def paving_to_svg(
    p: Paving, path: str | Path | None = None, colors: dict | None = None, width_px: int = 800
) -> str:
    """Render a 2-D paving; ``viewBox`` equals the frame."""
    if len(p.frame) != 2:
        raise ValueError("SVG output needs a 2-D paving")
    colors = {**DEFAULT_COLORS, **(colors or {})}
    body = [
        *_svg_rects(p.outside, colors["outside"]),
        *_svg_rects(p.inside, colors["inside"]),
        *_svg_rects(p.boundary, colors["boundary"]),
    ]
    doc = _svg_doc(p.frame, body, width_px)
    if path is not None:
        Path(path).write_text(doc)
    return doc


def layered_svg(
    pavings: Sequence[Paving], path: str | Path | None = None, width_px: int = 800
) -> str:
    """Stack pavings (e.g. alpha-cuts) over a common frame.

    Pavings are drawn from the last to the first, so the first one ends on top.
    Each layer's inside boxes get a darker shade than the next.
    """
    if not pavings:
        raise ValueError("no pavings to draw")
    frame = pavings[0].frame
    n = len(pavings)
    body = [*_svg_rects([frame], "#ffffff")]
    for k in range(n - 1, -1, -1):
        p = pavings[k]
        shade = int(40 + 180 * k / max(n - 1, 1))
        fill = f"#{shade:02x}{shade:02x}ff"
        body.append(f'<g id="level{k}">')
        body += _svg_rects(p.inside, fill)
        body += _svg_rects(p.boundary, "#ffdd55", 0.5)
        body.append("</g>")
    doc = _svg_doc(frame, body, width_px)
    if path is not None:
        Path(path).write_text(doc)
    return doc
