import math

import numpy as np
import pytest

from hyperhaus.dynamics import CAT_MAP, PillowcaseSystem
from hyperhaus.hyper import (
    FiniteHyperFamily,
    circle_arc,
    default_ladder,
    interval_arc,
    interval_triangle,
    marked_hypercircle,
    square_gap_arc,
    stable_family,
    triangle_interval,
)
from hyperhaus.metrics import hausdorff
from hyperhaus.spaces import TORUS, UsageError


def test_ladder():
    lad = default_ladder(2.0, 0.05)
    assert lad[0] == 0 and lad[-1] == 2.0 and lad.size == 41


def test_stable_family_shape():
    fam = stable_family(CAT_MAP, base_grid=4, L_max=0.2)
    assert fam.n_arcs == 16 * 5 and len(fam) == 81
    assert fam.includes_ambient
    assert fam.resolution == pytest.approx(max(math.sqrt(2) / 8, 0.025))
    e = fam.element(7)
    assert e.points.shape[1] == 2
    assert fam.without_ambient().includes_ambient is False
    m = fam.manifest()
    assert m["elements"] == 81 and m["base_grid"] == 4


def test_family_elements_are_straight_leaves():
    fam = stable_family(CAT_MAP, base_grid=2, L_max=0.3, ambient=False)
    c = fam.straight["centre"][3]
    h = fam.straight["half"][3]
    e = fam.element(3).points
    ends = np.array([c - h * CAT_MAP.dir_s, c + h * CAT_MAP.dir_s])
    assert TORUS.dist(e[0], ends[0]) < 1e-12 and TORUS.dist(e[-1], ends[1]) < 1e-12


def test_pillowcase_centres_are_folded():
    fam = stable_family(PillowcaseSystem(), base_grid=4, L_max=0.1, ambient=False)
    assert fam.n_arcs == len(np.unique(fam.straight["centre"], axis=0)) * 3


def test_bad_ladder():
    with pytest.raises(UsageError):
        stable_family(CAT_MAP, base_grid=2, ladder=[0.1, 0.2], L_max=0.2)


def test_marked_hypercircle_windows():
    fam = marked_hypercircle(0.3, 0.1)
    assert fam.n_arcs == 11 * 12 // 2
    # the whole circle, cut at the mark, is a member
    assert any(fam.element(i).points.shape[0] == 11 for i in range(fam.n_arcs))


def test_interval_triangle_round_trip():
    a = interval_arc(0.2, 0.7)
    assert interval_triangle(a) == (0.2, 0.7)
    assert hausdorff(triangle_interval((0.2, 0.7)), a).value == 0
    with pytest.raises(UsageError):
        interval_triangle((0.7, 0.2))


def test_square_gap_arc():
    a = square_gap_arc(0.2, 0.01)
    assert a.length == pytest.approx(3.8)
    with pytest.raises(UsageError):
        square_gap_arc(0.2, centre=0.05)


def test_from_continua():
    fam = FiniteHyperFamily.from_continua([circle_arc(0, 0.3), circle_arc(0.5, 0.2)], 0.01)
    assert len(fam) == 2
    with pytest.raises(UsageError):
        FiniteHyperFamily.from_continua([], 0.01)
