import math

import numpy as np
import pytest

from hyperhaus.continua import PolylineArc
from hyperhaus.dynamics import (
    CAT_MAP,
    PillowcaseSystem,
    PrecisionError,
    ToralAutomorphism,
    apply,
    fold_segment,
    get_system,
    iterate_arc,
    stable_arc,
    translate_arc,
    unstable_arc,
)
from hyperhaus.spaces import PILLOWCASE, TORUS, UsageError


def test_cat_map_eigen_data():
    lu = (3 + math.sqrt(5)) / 2
    assert CAT_MAP.lambda_u == pytest.approx(lu)
    assert CAT_MAP.lambda_s == pytest.approx(1 / lu)
    m = np.array(CAT_MAP.matrix, dtype=float)
    assert np.allclose(m @ CAT_MAP.dir_u, lu * CAT_MAP.dir_u)
    assert np.allclose(m @ CAT_MAP.dir_s, CAT_MAP.dir_s / lu)


@pytest.mark.parametrize("bad", [((1, 1), (0, 1)), ((2, 0), (0, 1)), ((0, 1), (-1, 0)), ((1.5, 1), (1, 1))])
def test_rejects_non_anosov(bad):
    with pytest.raises(UsageError):
        ToralAutomorphism(bad)


def test_power_is_exact_inverse():
    P, Q = CAT_MAP.power(7), CAT_MAP.power(-7)
    assert (P.dot(Q) == np.eye(2, dtype=object)).all()
    assert get_system("torus", ((3, 2), (1, 1))).det == 1


def test_apply_fixed_point_and_pillowcase():
    assert apply(CAT_MAP, (0.0, 0.0), 5).coords == (0.0, 0.0)
    P = PillowcaseSystem()
    p = apply(P, (0.3, 0.1), 1)
    q = apply(CAT_MAP, (0.3, 0.1), 1)
    assert PILLOWCASE.dist(p, q.coords) < 1e-12


def test_stable_arc_contracts():
    a = stable_arc(CAT_MAP, (0.1, 0.2), 0.5)
    b = iterate_arc(CAT_MAP, a, 3, 0.01)
    assert b.length == pytest.approx(0.5 * CAT_MAP.lambda_u ** -3, rel=1e-9)
    c = iterate_arc(CAT_MAP, a, -3, 0.01)
    assert c.length == pytest.approx(0.5 * CAT_MAP.lambda_u ** 3, rel=1e-9)
    assert np.hypot(*np.diff(c.lifted_vertices, axis=0).T).max() <= 0.01 + 1e-12


def test_unstable_arc_direction():
    a = unstable_arc(CAT_MAP, (0.5, 0.5), 0.2)
    d = a.lifted_vertices[-1] - a.lifted_vertices[0]
    assert np.allclose(d / np.hypot(*d), CAT_MAP.dir_u)


def test_precision_budget():
    a = stable_arc(CAT_MAP, (0.1, 0.2), 0.05)
    with pytest.raises(PrecisionError):
        iterate_arc(CAT_MAP, a, -60, 0.01)


def test_fold_at_cone_point():
    u = CAT_MAP.dir_s
    q0, q1 = fold_segment(-0.1 * u, 0.3 * u)
    assert np.allclose(q0, 0.0, atol=1e-12)
    assert np.hypot(*(q1 - q0)) == pytest.approx(0.3)
    p0, p1 = fold_segment([0.1, 0.2], [0.12, 0.23])
    assert np.array_equal(p0, [0.1, 0.2]) and np.array_equal(p1, [0.12, 0.23])


def test_folded_arc_has_same_image():
    P = PillowcaseSystem()
    a = stable_arc(P, (0.0, 0.0), 0.4, offset=0.05)
    assert a.length == pytest.approx(0.25)
    u = CAT_MAP.dir_s
    full = PolylineArc.segment(PILLOWCASE, -0.15 * u, 0.25 * u, 0.01)
    d = PILLOWCASE.dist(full.samples()[:, None, :], a.samples()[None, :, :]).min(axis=1)
    assert d.max() <= 0.01


def test_translate_arc():
    a = stable_arc(CAT_MAP, (0.1, 0.2), 0.3)
    b = translate_arc(CAT_MAP, a, (0.1, 0.2), (0.6, 0.9))
    assert b.length == pytest.approx(a.length)
    mid = b.lift_at(b.length / 2)
    assert TORUS.dist(mid, [0.6, 0.9]) < 1e-12
    P = PillowcaseSystem()
    c = stable_arc(P, (0.3, 0.3), 0.1)
    d = translate_arc(P, c, (0.3, 0.3), (0.2, 0.4))
    assert PILLOWCASE.dist(d.lift_at(d.length / 2), [0.2, 0.4]) < 1e-12
