import math

import numpy as np
import pytest

from oracles import f_np
from tdoapave.interval import BoolInterval, Interval, IntervalBox
from tdoapave.paver import (
    Membership,
    NumericalFailure,
    pave,
    paving_contains,
    paving_to_svg,
    layered_svg,
    read_paving,
)
from tdoapave.separators import Separator, Contractor, InclusionSeparator, disk_separator, DiskSet, tdoa_separator
from tdoapave.tdoa import TdoaConstraint, minimal_range

A, B = (-1.0, -2.0), (2.0, 3.0)
C = TdoaConstraint(A, B)
Y = Interval(3, 5)
FRAME = IntervalBox.from_bounds(-15, 15, -15, 15)


@pytest.fixture(scope="module")
def kkt_coarse():
    return pave(tdoa_separator(C, Y, "kkt"), FRAME, 0.1)


@pytest.fixture(scope="module")
def natural_coarse():
    return pave(tdoa_separator(C, Y, "natural"), FRAME, 0.1)


def test_everything_inside():
    p = pave(InclusionSeparator(lambda b: BoolInterval.TRUE), FRAME, 0.01)
    assert p.inside == [FRAME] and p.outside == [] and p.boundary == []
    assert p.stats.n_bisections == 0


def test_everything_outside():
    p = pave(InclusionSeparator(lambda b: BoolInterval.FALSE), FRAME, 0.01)
    assert p.outside == [FRAME]


def test_bad_arguments():
    sep = tdoa_separator(C, Y)
    with pytest.raises(ValueError):
        pave(sep, FRAME, 0.0)
    with pytest.raises(ValueError):
        pave(sep, IntervalBox.from_bounds(0, math.inf, 0, 1), 0.1)
    with pytest.raises(ValueError):
        pave(sep, IntervalBox.empty(2), 0.1)


def test_boundary_width(kkt_coarse):
    assert kkt_coarse.boundary
    assert all(b.width() <= 0.1 for b in kkt_coarse.boundary)
    assert kkt_coarse.stats.n_leaves == kkt_coarse.n_leaves


def test_coverage_and_disjointness(kkt_coarse):
    assert kkt_coarse.area() == pytest.approx(FRAME.volume(), rel=1e-6)
    lo, hi, _ = kkt_coarse.as_arrays()
    # dyadic leaves from one bisection tree: any positive-area overlap shows up
    # as a repeated lower corner or a cell covered twice on a fine grid
    keys = {tuple(r) for r in lo}
    assert len(keys) == len(lo)
    g = np.linspace(-15, 15, 401)[:-1] + 30 / 800
    xx, yy = np.meshgrid(g, g)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    counts = np.zeros(len(pts), dtype=int)
    for k in range(len(lo)):
        inside = np.all((pts > lo[k]) & (pts < hi[k]), axis=1)
        counts += inside
    assert counts.max() <= 1


def test_soundness_points(kkt_coarse, natural_coarse):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-15, 15, (10**5, 2))
    f = f_np(pts[:, 0], pts[:, 1], A, B)
    inX = (f >= 3) & (f <= 5)
    for p in (kkt_coarse, natural_coarse):
        cls = p.classify_points(pts)
        assert (cls >= 0).all()
        assert not ((cls == 1) & ~inX).any()
        assert not ((cls == 0) & inX).any()


def test_no_clustering_kkt(kkt_coarse, natural_coarse):
    def meets_boundary(b):
        r = minimal_range(b, C)
        return r.contains(3.0) or r.contains(5.0)

    assert all(meets_boundary(b) for b in kkt_coarse.boundary)
    assert not all(meets_boundary(b) for b in natural_coarse.boundary)


def test_sorted_output(kkt_coarse):
    keys = [b.lower() + b.upper() for _, b in kkt_coarse.leaves()]
    assert keys == sorted(keys)


def test_threads_same_result(kkt_coarse):
    p4 = pave(tdoa_separator(C, Y), FRAME, 0.1, threads=4)
    assert p4.to_text() == kkt_coarse.to_text()
    assert p4.stats.n_bisections == kkt_coarse.stats.n_bisections


def test_contains(kkt_coarse):
    b = kkt_coarse.inside[0]
    assert paving_contains(kkt_coarse, b.mid()) is Membership.IN
    b = kkt_coarse.outside[0]
    assert kkt_coarse.contains(b.mid()) is Membership.OUT
    b = kkt_coarse.boundary[0]
    assert kkt_coarse.contains(b.mid()) is Membership.MAYBE
    with pytest.raises(ValueError):
        kkt_coarse.contains((20, 0))


def test_contains_corner_tie_rule(kkt_coarse):
    leaves = kkt_coarse.leaves()
    # corner (-15,-15) belongs to exactly one leaf; a shared vertex goes to
    # the lexicographically first leaf containing it
    first = next(m for m, b in leaves if b.contains((-15, -15)))
    assert kkt_coarse.contains((-15, -15)) is first
    v = leaves[0][1].upper()
    first = next(m for m, b in leaves if b.contains(v))
    assert kkt_coarse.contains(v) is first


def test_text_roundtrip(kkt_coarse, tmp_path):
    path = tmp_path / "p.txt"
    kkt_coarse.write(path)
    text = path.read_text()
    assert text.startswith("# paving v1 eps=0.10000000000000001 frame=[-15,15]x[-15,15]\n")
    q = read_paving(path)
    assert q.to_text() == text
    assert q.stats.n_leaves == kkt_coarse.stats.n_leaves
    line = text.splitlines()[1].split()
    assert line[0] in ("IN", "OUT", "MAYBE") and len(line) == 5


def test_svg(kkt_coarse, tmp_path):
    doc = paving_to_svg(kkt_coarse, tmp_path / "p.svg")
    assert 'viewBox="-15 -15 30 30"' in doc
    assert doc.count("<rect") == kkt_coarse.n_leaves
    doc = layered_svg([kkt_coarse, kkt_coarse])
    assert 'id="level1"' in doc


def test_general_contractor_pieces():
    # outer contractor that tightens to a sub-box: removed slabs are outside
    target = IntervalBox.from_bounds(0, 1, 0, 1)
    sep = Separator(
        inner=Contractor(lambda b: b),
        outer=Contractor(lambda b: b & target),
    )
    p = pave(sep, IntervalBox.from_bounds(-1, 2, -1, 2), 0.5)
    assert p.area("outside") == pytest.approx(9 - 1)
    assert p.area("boundary") == pytest.approx(1)


def test_numerical_failure():
    grow = Contractor(lambda b: IntervalBox.from_bounds(-5, 5, -5, 5))
    sep = Separator(inner=Contractor(lambda b: b), outer=grow)
    with pytest.raises(NumericalFailure):
        pave(sep, IntervalBox.from_bounds(0, 1, 0, 1), 0.1)


def test_disk_paving_area():
    p = pave(disk_separator(DiskSet((0, 0), 1)), IntervalBox.from_bounds(-2, 2, -2, 2), 0.02)
    assert p.area("inside") <= math.pi <= p.area("inside") + p.area("boundary")
