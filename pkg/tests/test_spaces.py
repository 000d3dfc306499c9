import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperhaus.spaces import (
    CIRCLE,
    INTERVAL,
    PILLOWCASE,
    SQUARE,
    TORUS,
    Point,
    UsageError,
    cone_curvature,
    dist,
    gauss_bonnet_check,
    get_space,
)

unit = st.floats(0, 1, allow_nan=False)
coord = st.floats(-3, 3, allow_nan=False)


def test_distance_examples():
    assert dist(INTERVAL, 0.2, 0.7) == pytest.approx(0.5)
    assert dist(CIRCLE, 0.1, 0.9) == pytest.approx(0.2)
    assert dist(TORUS, (0.05, 0.05), (0.95, 0.95)) == pytest.approx(math.hypot(0.1, 0.1))
    # -q is close to p on the pillowcase even when q is far on the torus
    assert dist(PILLOWCASE, (0.2, 0.3), (0.8, 0.7)) == pytest.approx(0.0, abs=1e-15)


def test_point_from_other_space_rejected():
    with pytest.raises(UsageError):
        dist(TORUS, Point(CIRCLE, (0.3,)), (0.1, 0.1))


def test_unknown_space():
    with pytest.raises(UsageError):
        get_space("sphere")


@given(coord, coord, coord, coord)
def test_torus_distance_is_shift_invariant(a, b, c, d):
    p, q = np.array([a, b]), np.array([c, d])
    assert TORUS.dist(p, q) == pytest.approx(TORUS.dist(p + [2, -1], q), abs=1e-12)
    assert TORUS.dist(p, q) <= math.sqrt(2) / 2 + 1e-12


@given(coord, coord)
def test_pillowcase_canonical_is_idempotent(a, b):
    c = PILLOWCASE.canonical([a, b])
    assert np.array_equal(PILLOWCASE.canonical(c), c)
    assert PILLOWCASE.dist(c, [a, b]) < 1e-12
    assert PILLOWCASE.dist(c, [-a, -b]) < 1e-12


@given(unit, unit, unit, unit, unit, unit)
def test_triangle_inequality_all_spaces(a, b, c, d, e, f):
    for sp in (TORUS, PILLOWCASE, SQUARE):
        p, q, r = np.array([a, b]), np.array([c, d]), np.array([e, f])
        assert sp.dist(p, r) <= sp.dist(p, q) + sp.dist(q, r) + 1e-12
    for sp in (INTERVAL, CIRCLE):
        assert sp.dist([a], [c]) <= sp.dist([a], [e]) + sp.dist([e], [c]) + 1e-12


def test_grid_sample_covering_radius():
    rng = np.random.default_rng(1)
    for sp in (INTERVAL, CIRCLE, TORUS, PILLOWCASE, SQUARE):
        g = sp.grid_sample(0.05)
        q = sp.random_points(rng, 300)
        d = sp.dist(q[:, None, :], g[None, :, :]).min(axis=1)
        assert d.max() <= 0.05


def test_pillowcase_ambient_diameter():
    g = PILLOWCASE.grid_sample(0.01)
    far = PILLOWCASE.dist(g, [0.0, 0.0]).max()
    assert far <= PILLOWCASE.ambient_diameter + 1e-12
    assert far >= PILLOWCASE.ambient_diameter - 0.02


def test_gauss_bonnet():
    assert gauss_bonnet_check(PILLOWCASE) == pytest.approx(4 * math.pi)
    assert gauss_bonnet_check(TORUS) == 0.0
    assert cone_curvature(3) == pytest.approx(-math.pi)
    with pytest.raises(UsageError):
        cone_curvature(0)
