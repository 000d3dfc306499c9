import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperhaus.continua import PolylineArc, SampledContinuum
from hyperhaus.experiments import random_polyline
from hyperhaus.hyper import FiniteHyperFamily, circle_arc, full_circle, marked_hypercircle
from hyperhaus.metrics import (
    GridIndex,
    _windows,
    directed_hausdorff,
    directed_points,
    enumerate_iA,
    hausdorff,
    hausdorff_points,
    hyper_distance,
    second_order_distance,
    subarc_infimum,
    window_count,
)
from hyperhaus.spaces import CIRCLE, INTERVAL, PILLOWCASE, SQUARE, TORUS, UsageError

SPACES = [INTERVAL, CIRCLE, TORUS, PILLOWCASE, SQUARE]


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.kind)
def test_point_hausdorff_matches_brute(space):
    rng = np.random.default_rng(3)
    for n, m in [(1, 1), (1, 500), (700, 3), (1500, 2000)]:
        P, Q = space.random_points(rng, n), space.random_points(rng, m)
        assert hausdorff_points(space, P, Q) == hausdorff_points(space, P, Q, "brute")
        assert directed_points(space, P, Q) == directed_points(space, P, Q, "brute")


@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=40),
       st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=40))
def test_pillowcase_hausdorff_oracle(P, Q):
    P, Q = np.array(P), np.array(Q)
    assert hausdorff_points(PILLOWCASE, P, Q) == hausdorff_points(PILLOWCASE, P, Q, "brute")


def test_grid_index_nearest():
    rng = np.random.default_rng(0)
    pts = TORUS.random_points(rng, 400)
    q = TORUS.random_points(rng, 50)
    d, k = GridIndex(TORUS, pts).nearest(q)
    full = TORUS.dist(q[:, None, :], pts[None, :, :])
    assert np.array_equal(d, full.min(axis=1))
    assert np.array_equal(full[np.arange(50), k], d)


def test_hausdorff_budget_and_identity():
    a = PolylineArc.segment(TORUS, [0.1, 0.1], [0.4, 0.2], 0.01)
    h = hausdorff(a, a)
    assert h.value == 0.0 and h.slack == pytest.approx(0.015)
    b = a.translate([0.0, 0.05])
    assert hausdorff(a, b).value == pytest.approx(0.05)
    assert directed_hausdorff(a, b).value == pytest.approx(0.05)


def test_space_mismatch():
    a = PolylineArc.segment(TORUS, [0.1, 0.1], [0.2, 0.1], 0.01)
    b = PolylineArc.segment(PILLOWCASE, [0.1, 0.1], [0.2, 0.1], 0.01)
    with pytest.raises(UsageError):
        hausdorff(a, b)


@pytest.mark.parametrize("M,cyclic", [(1, False), (5, False), (1, True), (4, True)])
def test_window_enumeration(M, cyclic):
    w = _windows(M, cyclic)
    assert len(w) == window_count(M, cyclic)
    sets = {frozenset((lo + np.arange(k + 1)) % M) for lo, k in w}
    assert len(sets) == len(w)


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.kind)
def test_second_order_matches_brute(space):
    rng = np.random.default_rng(11)
    for _ in range(4):
        A, B = random_polyline(space, rng), random_polyline(space, rng)
        g = float(rng.choice([0.03, 0.05]))
        assert second_order_distance(A, B, g).value == second_order_distance(A, B, g, "brute").value


def test_second_order_with_closed_loop():
    S = full_circle(0.02, 0.3)
    A = circle_arc(0.3, 0.6, 0.02)
    fast = second_order_distance(A, S, 0.02).value
    assert fast == second_order_distance(A, S, 0.02, "brute").value
    assert fast == second_order_distance(S, A, 0.02).value


def test_subarc_infimum_matches_brute():
    rng = np.random.default_rng(5)
    for space in SPACES:
        for _ in range(3):
            C, B = random_polyline(space, rng), random_polyline(space, rng)
            assert subarc_infimum(C, B, 0.03).value == subarc_infimum(C, B, 0.03, "brute").value


def test_subarc_infimum_half_circle():
    C = circle_arc(0.05, 0.5, 0.005)
    B = circle_arc(0.3, 0.9, 0.005)
    assert subarc_infimum(C, B, 0.005).value == pytest.approx(0.25)


def test_hyper_distance_matches_brute_on_small_families():
    rng = np.random.default_rng(2)
    mk = lambda: [SampledContinuum(TORUS, TORUS.random_points(rng, int(rng.integers(1, 20))), 0.05)
                  for _ in range(int(rng.integers(1, 12)))]
    for _ in range(5):
        F = FiniteHyperFamily.from_continua(mk(), 0.05)
        G = FiniteHyperFamily.from_continua(mk(), 0.05,
                                            ambient=SampledContinuum.ambient(TORUS, 0.2) if rng.random() < 0.5 else None)
        assert hyper_distance(F, G).value == hyper_distance(F, G, "brute").value


def test_window_families_use_parent_arcs():
    g = 0.02
    iA = enumerate_iA(circle_arc(0.3, 0.5, g), g)
    mh = marked_hypercircle(0.3, g)
    fast = hyper_distance(iA, mh)
    assert fast.value == hyper_distance(iA, mh, "brute").value
    assert fast.slack == pytest.approx(2 * g)


def test_hausdorff_below_second_order():
    # with the grid no finer than the gauges, the whole-arc windows carry the arcs' own samples
    rng = np.random.default_rng(8)
    for space in SPACES:
        for _ in range(5):
            A, B = random_polyline(space, rng), random_polyline(space, rng)
            g = max(A.gauge, B.gauge)
            assert hausdorff(A, B).value <= second_order_distance(A, B, g).value + 1e-12


def test_on_grid_keeps_turning_vertices():
    a = PolylineArc.from_points(INTERVAL, [0.9, 1.0, 0.8], 0.1)
    assert a.on_grid(0.05).points.max() == 1.0
