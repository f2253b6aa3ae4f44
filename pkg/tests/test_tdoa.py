import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    boundary_range,
    fd_grad,
    f_scalar,
    golden_min,
    grad_scalar,
    interior_samples,
    random_config,
)
from tdoapave.interval import BoolInterval, Interval, IntervalBox
from tdoapave.tdoa import (
    DegenerateFociWarning,
    TdoaConstraint,
    critical_points,
    inclusion_test,
    minimal_range,
    natural_range,
    phi1,
    phi2,
    tdoa_eval,
    tdoa_gradient,
)

A, B = (-1.0, -2.0), (2.0, 3.0)
C = TdoaConstraint(A, B)
SQRT34 = math.sqrt(34.0)
FRAME = IntervalBox.from_bounds(-15, 15, -15, 15)
FIXTURES = json.loads((Path(__file__).parent / "fixtures" / "ranges.json").read_text())


def box(*b):
    return IntervalBox.from_bounds(*b)


class TestEval:
    def test_at_focus(self):
        assert tdoa_eval(A, C) == -SQRT34

    def test_midpoint(self):
        assert tdoa_eval((0.5, 0.5), C) == 0.0

    def test_far_point_against_direct_norms(self):
        x = np.array([10.0, 10.0])
        expect = np.linalg.norm(x - np.array(A)) - np.linalg.norm(x - np.array(B))
        assert tdoa_eval(x, C) == pytest.approx(expect, abs=1e-13)

    @given(st.floats(-100, 100), st.floats(-100, 100))
    def test_bounded_by_baseline(self, x1, x2):
        assert abs(tdoa_eval((x1, x2), C)) <= C.baseline + 1e-12

    def test_gradient_undefined_at_focus(self):
        assert tdoa_gradient(A, C) is None
        assert tdoa_gradient((0.0, 0.0), C) == pytest.approx(grad_scalar(0.0, 0.0, A, B))


class TestPhi:
    def test_collinear_on_axis(self):
        assert phi1(3.0, TdoaConstraint((-1, 0), (1, 0))) == 0.0

    def test_phi1_equidistant_abscissa(self):
        assert phi1(0.5, C) is None

    def test_phi2_symmetric(self):
        assert phi2(3.0, TdoaConstraint((0, -1), (0, 1))) == 0.0

    def test_phi2_equidistant_ordinate(self):
        assert phi2(0.5, C) is None

    def test_phi1_matches_golden_section(self):
        # x2 -> f(15, x2) has its interior extremum (a maximum) at phi1(15)
        t, _ = golden_min(lambda t: -f_scalar(15.0, t, A, B), -100.0, 100.0)
        assert phi1(15.0, C) == pytest.approx(t, abs=1e-5)
        assert phi1(15.0, C) == pytest.approx(74.0 / 3.0, rel=1e-15)

    def test_phi2_matches_golden_section(self):
        t, _ = golden_min(lambda t: f_scalar(t, -15.0, A, B), -100.0, 100.0)
        assert phi2(-15.0, C) == pytest.approx(t, abs=1e-5)
        assert phi2(-15.0, C) == pytest.approx(-8.8, rel=1e-15)


def _assert_stationary(cps, a, b):
    for (x1, x2), edge in cps.edge_points:
        if math.hypot(x1 - a[0], x2 - a[1]) < 1e-5 or math.hypot(x1 - b[0], x2 - b[1]) < 1e-5:
            continue
        g = grad_scalar(x1, x2, a, b)
        fd = fd_grad(x1, x2, a, b)
        k = 1 if edge.startswith("x1") else 0
        assert abs(g[k]) <= 1e-9
        assert abs(fd[k] - g[k]) <= 1e-4


class TestCriticalPoints:
    def test_frame(self):
        cps = critical_points(FRAME, C)
        assert sorted(cps.corners) == [(-15, -15), (-15, 15), (15, -15), (15, 15)]
        _assert_stationary(cps, A, B)
        for p in cps.points():
            assert FRAME.contains(p)
            on_edge = p[0] in (-15, 15) or p[1] in (-15, 15)
            assert on_edge

    def test_no_edge_extremum(self):
        # far box: dense edge sampling shows the extremes sit on corners
        b = box(10, 11, 10, 11)
        cps = critical_points(b, C)
        assert cps.edge_points == []
        lo, hi = boundary_range((10, 11, 10, 11), A, B, n=20001)
        corner_vals = [tdoa_eval(p, C) for p in cps.corners]
        assert min(corner_vals) == pytest.approx(lo, abs=1e-12)
        assert max(corner_vals) == pytest.approx(hi, abs=1e-12)

    def test_ray_beyond_b(self):
        # line through a, b: x2 = -2 + 5/3 (x1 + 1); beyond b it passes x1 = 5, x2 = 8
        b = box(4, 6, 7, 9)
        cps = critical_points(b, C)
        assert cps.ray_points
        vals = [tdoa_eval(p, C) for p in cps.points()]
        assert max(vals) == pytest.approx(SQRT34, abs=1e-12)

    def test_points_inside_box(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a, b, bb = random_config(rng)
            c = TdoaConstraint(a, b)
            bx = box(*bb)
            cps = critical_points(bx, c)
            for p in cps.points():
                assert bx.contains(p)
            _assert_stationary(cps, a, b)


class TestMinimalRange:
    def test_frame_is_global(self):
        r = minimal_range(FRAME, C)
        assert r.lo == pytest.approx(-SQRT34, abs=1e-12)
        assert r.hi == pytest.approx(SQRT34, abs=1e-12)

    @pytest.mark.parametrize("case", FIXTURES, ids=[c["name"] for c in FIXTURES])
    def test_fixture_oracle(self, case):
        r = minimal_range(box(*case["box"]), TdoaConstraint(case["a"], case["b"]))
        assert r.lo == pytest.approx(case["range"][0], abs=1e-6)
        assert r.hi == pytest.approx(case["range"][1], abs=1e-6)

    def test_point_box_midpoint(self):
        assert minimal_range(box(0.5, 0.5, 0.5, 0.5), C) == Interval(0, 0)

    def test_segment_box(self):
        # vertical segment through the stationary point at x1 = 15
        r = minimal_range(box(15, 15, -100, 100), C)
        lo, hi = boundary_range((15, 15, -100, 100), A, B)
        assert r.lo == pytest.approx(lo, abs=1e-9) and r.hi == pytest.approx(hi, abs=1e-9)

    def test_empty(self):
        assert minimal_range(IntervalBox.empty(2), C).is_empty()

    def test_coincident_foci(self):
        with pytest.warns(DegenerateFociWarning):
            c = TdoaConstraint((1, 1), (1, 1))
        assert minimal_range(FRAME, c) == Interval(0, 0)

    def test_random_against_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(150):
            a, b, bb = random_config(rng)
            c = TdoaConstraint(a, b)
            r = minimal_range(box(*bb), c)
            lo, hi = boundary_range(bb, a, b, n=1001)
            assert r.lo == pytest.approx(lo, abs=1e-6)
            assert r.hi == pytest.approx(hi, abs=1e-6)
            vals = interior_samples(bb, a, b, 2000, rng)
            assert vals.min() >= r.lo and vals.max() <= r.hi
            assert r.subset(c.global_range() | Interval(-c.baseline - 1e-12, c.baseline + 1e-12))

    @settings(max_examples=200, deadline=None)
    @given(
        st.tuples(*[st.floats(-10, 10)] * 4),
        st.tuples(*[st.floats(-20, 20)] * 4),
    )
    def test_antisymmetry(self, foci, corners):
        a, b = foci[:2], foci[2:]
        if a == b:
            return
        bx = box(min(corners[0], corners[1]), max(corners[0], corners[1]),
                 min(corners[2], corners[3]), max(corners[2], corners[3]))
        r = minimal_range(bx, TdoaConstraint(a, b))
        s = minimal_range(bx, TdoaConstraint(b, a))
        assert r.lo == -s.hi and r.hi == -s.lo

    def test_translation_equivariance(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            a, b, bb = random_config(rng)
            v = rng.choice([-4.0, -1.5, 0.25, 2.0, 8.0], 2)
            r = minimal_range(box(*bb), TdoaConstraint(a, b))
            moved = box(bb[0] + v[0], bb[1] + v[0], bb[2] + v[1], bb[3] + v[1])
            s = minimal_range(moved, TdoaConstraint((a[0] + v[0], a[1] + v[1]), (b[0] + v[0], b[1] + v[1])))
            assert s.lo == pytest.approx(r.lo, abs=1e-12) and s.hi == pytest.approx(r.hi, abs=1e-12)


class TestNaturalRange:
    def test_point_box_exact(self):
        r = natural_range(box(10, 10, 10, 10), C)
        assert r.lo == pytest.approx(tdoa_eval((10, 10), C), abs=1e-12)
        assert r.hi == pytest.approx(tdoa_eval((10, 10), C), abs=1e-12)

    def test_far_box_wider(self):
        b = box(10, 11, 10, 11)
        m, n = minimal_range(b, C), natural_range(b, C)
        assert m.subset(n)
        assert n.width() > m.width()

    def test_frame_encloses_global(self):
        assert Interval(-SQRT34, SQRT34).subset(natural_range(FRAME, C))

    def test_dominance_random(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            a, b, bb = random_config(rng)
            c = TdoaConstraint(a, b)
            m, n = minimal_range(box(*bb), c), natural_range(box(*bb), c)
            assert n.lo <= m.lo + 1e-12 and m.hi <= n.hi + 1e-12


class TestInclusionTest:
    def test_true_when_y_covers_global_range(self):
        assert inclusion_test(box(3, 4, -7, 2), Interval(-10, 10), C) is BoolInterval.TRUE

    def test_false_near_midpoint(self):
        assert inclusion_test(box(0.4, 0.6, 0.4, 0.6), Interval(3, 5), C) is BoolInterval.FALSE

    def test_maybe_on_frame(self):
        assert inclusion_test(FRAME, Interval(3, 5), C) is BoolInterval.MAYBE

    def test_natural_method(self):
        assert inclusion_test(FRAME, Interval(3, 5), C, "natural") is BoolInterval.MAYBE
        with pytest.raises(ValueError):
            inclusion_test(FRAME, Interval(3, 5), C, "bogus")


def test_minimal_range_is_hull_of_candidate_values():
    rng = np.random.default_rng(21)
    for _ in range(300):
        a, b, bb = random_config(rng)
        c = TdoaConstraint(a, b)
        vals = critical_points(box(*bb), c).values(c)
        assert minimal_range(box(*bb), c) == Interval(min(vals), max(vals))


def test_degenerate_boxes_match_oracle():
    rng = np.random.default_rng(5)
    for _ in range(500):
        a = tuple(rng.uniform(-10, 10, 2))
        b = tuple(rng.uniform(-10, 10, 2))
        lo = rng.uniform(-20, 20, 2)
        w = rng.uniform(0, 20, 2)
        w[rng.integers(2)] = 0.0
        if rng.random() < 0.3:
            w[:] = 0.0
        bx = (lo[0], lo[0] + w[0], lo[1], lo[1] + w[1])
        r = minimal_range(IntervalBox.from_bounds(*bx), TdoaConstraint(a, b))
        olo, ohi = boundary_range(bx, a, b)
        assert r.lo == pytest.approx(olo, abs=1e-9)
        assert r.hi == pytest.approx(ohi, abs=1e-9)
