import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperhaus.continua import PolylineArc, SampledContinuum, diameter, resample, subarc
from hyperhaus.spaces import CIRCLE, PILLOWCASE, TORUS, UsageError


def test_from_points_respects_gauge():
    a = PolylineArc.from_points(TORUS, [[0, 0], [0.3, 0.4]], 0.01)
    gaps = np.hypot(*np.diff(a.lifted_vertices, axis=0).T)
    assert gaps.max() <= 0.01 + 1e-15
    assert a.length == pytest.approx(0.5)


def test_gauge_bounds():
    with pytest.raises(UsageError):
        PolylineArc(TORUS, [[0, 0], [0.1, 0]], 0.3)
    with pytest.raises(UsageError):
        PolylineArc(TORUS, [[0, 0], [0.1, 0]], 0.05)


def test_closed_loop_must_close():
    with pytest.raises(UsageError):
        PolylineArc.from_points(CIRCLE, [0.0, 0.5], 0.1, closed=True)
    loop = PolylineArc.from_points(CIRCLE, [0.0, 1.0], 0.1, closed=True)
    g = loop.on_grid(0.1)
    assert g.cyclic and g.count == 10


def test_on_grid_hits_both_ends():
    a = PolylineArc.segment(TORUS, [0.1, 0.1], [0.1, 0.83], 0.01)
    g = a.on_grid(0.05)
    assert g.step <= 0.05
    assert np.allclose(g.points[0], [0.1, 0.1])
    assert np.allclose(g.points[-1], [0.1, 0.83])


@given(st.floats(0, 1), st.floats(0, 1))
def test_subarc_length(s, t):
    a = PolylineArc.from_points(TORUS, [[0, 0], [0.5, 0.2], [0.9, 0.9]], 0.05)
    s, t = sorted((s * a.length, t * a.length))
    assert subarc(a, s, t).length == pytest.approx(t - s, abs=1e-12)


def test_resample_keeps_vertices():
    a = PolylineArc.from_points(TORUS, [[0, 0], [0.2, 0.1]], 0.1)
    b = resample(a, 0.01)
    assert b.gauge == 0.01
    for v in a.lifted_vertices:
        assert np.min(np.hypot(*(b.lifted_vertices - v).T)) == 0.0


def test_diameter_wraps_on_torus():
    a = PolylineArc.segment(TORUS, [0.0, 0.5], [2.0, 0.5], 0.01)
    d = diameter(a)
    assert d.value == pytest.approx(0.5)
    assert d.slack == 0.01


def test_pillowcase_samples_are_canonical():
    a = PolylineArc.segment(PILLOWCASE, [0.7, 0.2], [0.9, 0.6], 0.01)
    s = a.samples()
    assert np.all(s[:, 0] <= 0.5)


def test_ambient_covers_space():
    amb = SampledContinuum.ambient(TORUS, 0.05)
    q = np.random.default_rng(0).uniform(0, 1, (200, 2))
    d = TORUS.dist(q[:, None, :], amb.points[None, :, :]).min(axis=1)
    assert d.max() <= 0.05
    assert amb.gauge == 0.05
    assert math.isclose(diameter(amb).value, TORUS.ambient_diameter, abs_tol=0.05)
