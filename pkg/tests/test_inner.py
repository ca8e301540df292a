"""Both per-coordinate solvers on hand-solvable and random envelopes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pinchmm import bsm, csm
from pinchmm.envelope import NoFeasiblePosition, Parabolas
from pinchmm.intervals import IntervalSet
from pinchmm.oracle import grid_search_envelope
from pinchmm.verify import random_instance

# h1 = 10 - (x-1)^2, h2 = 8 - 0.5 (x-5)^2
WORKED = Parabolas((10.0, 8.0), (1.0, 0.5), (1.0, 5.0))
BOX = IntervalSet(((0.0, 4.0),))
SPLIT = IntervalSet(((0.0, 2.0), (8.0, 10.0)))


class TestCandidates:
    def test_worked_candidates(self):
        cs = csm.candidates(0.0, 4.0, WORKED)
        assert sorted(cs.xs()) == pytest.approx([0.0, 1.0, 3.0, 4.0])
        kinds = {round(c.x, 9): c.kind for c in cs.points}
        assert kinds[3.0] == csm.INTERSECTION and kinds[1.0] == csm.VERTEX

    def test_crossing_roots(self):
        assert sorted(csm.crossings(WORKED, 0, 1)) == pytest.approx([-9.0, 3.0])
        assert sorted(csm.crossings(WORKED, 0, 1, origin=2.0)) == pytest.approx([-9.0, 3.0])

    def test_equal_curvature_is_linear(self):
        par = Parabolas((5.0, 5.0), (1.0, 1.0), (0.0, 2.0))
        assert csm.crossings(par, 0, 1) == pytest.approx([1.0])

    def test_single_user_and_degenerate(self):
        par = Parabolas((3.0,), (2.0,), (1.5,))
        assert sorted(csm.candidates(0.0, 4.0, par).xs()) == [0.0, 1.5, 4.0]
        assert csm.candidates(2.0, 2.0, par).xs() == [2.0]


class TestCsm:
    def test_worked_optimum(self):
        x, v = csm.maximize_on_region(WORKED, BOX)
        assert x == pytest.approx(3.0) and v == pytest.approx(6.0)

    def test_single_vertex(self):
        assert csm.maximize_on_region(Parabolas((3.0,), (2.0,), (1.5,)), BOX)[0] == 1.5

    def test_nearest_feasible_tie_goes_left(self):
        x, _ = csm.maximize_on_region(Parabolas((1.0,), (1.0,), (5.0,)), SPLIT)
        assert x == 2.0

    def test_empty_region(self):
        with pytest.raises(NoFeasiblePosition):
            csm.maximize_on_region(WORKED, IntervalSet())

    def test_incumbent_wins_ties(self):
        flat = Parabolas((1.0,), (0.0,), (0.0,))
        assert csm.maximize_on_region(flat, BOX)[0] == 0.0
        assert csm.maximize_on_region(flat, BOX, current=2.5)[0] == 2.5
        # a strictly better point still beats the incumbent
        assert csm.maximize_on_region(WORKED, BOX, current=0.5)[0] == pytest.approx(3.0)

    def test_tiny_scale_envelope(self):
        # worst user many decades below a steep neighbour
        par = Parabolas((30060.0, 7.2e-12), (249.4, 5.4e-17), (-6.285, 18.44))
        region = IntervalSet(((0.2, 10.0),))
        _, v = csm.maximize_on_region(par, region)
        _, g = grid_search_envelope(par, region, 1e-4)
        assert v >= g * (1 - 1e-6)


class TestBsm:
    def test_q_radius(self):
        assert bsm.q_radius(0, 10.0, WORKED) == 0.0
        assert bsm.q_radius(0, 6.0, Parabolas((10.0,), (1.0,), (0.0,))) == pytest.approx(2.0)
        assert bsm.q_radius(0, 11.0, WORKED) is None
        assert bsm.q_radius(0, 0.0, Parabolas((1.0,), (0.0,), (0.0,))) == math.inf

    def test_windows(self):
        w = bsm.window(6.0, WORKED)
        assert (w.lo, w.hi, w.empty) == pytest.approx((3.0, 3.0, False))
        w = bsm.window(6.5, WORKED)
        assert w.empty
        assert w.lo == pytest.approx(5 - math.sqrt(3)) and w.hi == pytest.approx(1 + math.sqrt(3.5))
        w = bsm.window(-1e12, Parabolas((1.0,), (1.0,), (0.0,)))
        assert w.lo < -1e5 and w.hi > 1e5

    def test_level_bounds(self):
        s_min, s_max, x_min = bsm.level_bounds(WORKED, BOX)
        assert (s_min, s_max, x_min) == (1.0, 8.0, 4.0)

    def test_worked_bisection(self):
        res = bsm.maximize_on_region(WORKED, BOX, tau=1e-9)
        assert res.level == pytest.approx(6.0, abs=1e-8)
        assert res.x == pytest.approx(3.0, abs=1e-4)
        assert res.value >= res.level
        assert res.iterations <= math.ceil(math.log2((8.0 - 1.0) / 1e-9))

    def test_single_user_vertex(self):
        res = bsm.maximize_on_region(Parabolas((3.0,), (2.0,), (1.5,)), BOX)
        assert res.x == pytest.approx(1.5, abs=1e-6) and res.level == 3.0

    def test_boundary_optimum(self):
        res = bsm.maximize_on_region(Parabolas((1.0,), (1.0,), (5.0,)), SPLIT)
        assert res.x == pytest.approx(2.0, abs=1e-4)

    def test_point_region(self):
        res = bsm.maximize_on_region(WORKED, IntervalSet(((2.0, 2.0),)))
        assert res.x == 2.0 and res.level == pytest.approx(WORKED.envelope(2.0))

    def test_bad_tau_and_empty(self):
        with pytest.raises(ValueError):
            bsm.maximize_on_region(WORKED, BOX, tau=0.0)
        with pytest.raises(NoFeasiblePosition):
            bsm.maximize_on_region(WORKED, IntervalSet())


def test_random_instances_against_grid_and_each_other():
    rng = np.random.default_rng(5)
    for _ in range(40):
        par, region, cur = random_instance(rng)
        xc, vc = csm.maximize_on_region(par, region)
        _, vg = grid_search_envelope(par, region, 1e-3)
        assert vc >= vg - 1e-6 * abs(vg)
        res = bsm.maximize_on_region(par, region, current=cur)
        assert abs(res.value - vc) <= max(10 * bsm.default_tau(res.s_max), 1e-8 * abs(vc))
        assert any(a <= res.x <= b for a, b in region)
        assert any(a <= xc <= b for a, b in region)


@settings(max_examples=60, deadline=None)
@given(
    h=st.lists(st.floats(-5, 5), min_size=1, max_size=5),
    data=st.data(),
)
def test_csm_is_exact_on_small_envelopes(h, data):
    n = len(h)
    c = data.draw(st.lists(st.floats(0.01, 3), min_size=n, max_size=n))
    m = data.draw(st.lists(st.floats(-3, 7), min_size=n, max_size=n))
    par = Parabolas.from_arrays(h, c, m)
    x, v = csm.maximize_on_region(par, BOX)
    _, g = grid_search_envelope(par, BOX, 1e-3)
    assert v >= g - 1e-9 * max(1.0, abs(g))
    assert v == pytest.approx(par.envelope(x))
    res = bsm.maximize_on_region(par, BOX)
    assert res.level <= v + 1e-9 * max(1.0, abs(v))
    assert v - res.level <= 10 * bsm.default_tau(res.s_max)
