import math
from fractions import Fraction

import numpy as np
import pytest

from hyperhaus import experiments as E
from hyperhaus.budget import ErrorBudget
from hyperhaus.dynamics import CAT_MAP, PillowcaseSystem, iterate_arc, stable_arc
from hyperhaus.hyper import stable_family, unstable_family
from hyperhaus.metrics import hyper_distance, subarc_infimum
from hyperhaus.spaces import TORUS, UsageError


def _series(vals, slack=0.01):
    return E.ConvergenceSeries("t", list(range(len(vals))), [ErrorBudget(v, slack) for v in vals])


def test_series_helpers():
    s = _series([0.5, 0.6, 0.3, 0.305, 0.2])
    assert not s.eventually_decreasing(0)
    assert s.eventually_decreasing(1)
    assert s.value_at(2).value == 0.3
    assert s.csv_rows()[0] == "n,value,slack"
    with pytest.raises(UsageError):
        E.ConvergenceSeries("t", [1, 0], [ErrorBudget(0), ErrorBudget(0)])


@pytest.mark.parametrize("system", [CAT_MAP, PillowcaseSystem()], ids=["torus", "pillowcase"])
@pytest.mark.parametrize("n", [1, 3])
def test_family_to_arc_matches_brute_force(system, n):
    grid = 0.02
    fam = stable_family(system, base_grid=3, L_max=0.3, gauge=grid, ambient=False)
    A = iterate_arc(system, stable_arc(system, (0.1, 0.2), 0.05, gauge=grid), -n, grid)
    brute = max(subarc_infimum(fam.element(i), A, grid, "brute").value for i in range(fam.n_arcs))
    fast, _ = E.family_to_arc(fam, A, grid)
    assert fast == pytest.approx(brute, abs=1e-12)
    v0 = A.lifted_vertices
    u = (v0[-1] - v0[0]) / np.hypot(*(v0[-1] - v0[0]))
    ub = E._straight_bounds(system.space, fam, A.on_grid(grid), v0[0], u)
    per = np.array([subarc_infimum(fam.element(i), A, grid, "brute").value for i in range(fam.n_arcs)])
    assert np.all(per <= ub)
    fast_ub, _ = E.family_to_arc(fam, A, grid, ub)
    assert fast_ub == pytest.approx(brute, abs=1e-12)


def test_convergence_small_run_decreases():
    s = E.convergence_experiment(CAT_MAP, n_max=4, grid=0.02, base_grid=8, L_max=1.0)
    assert s.values[0].value > s.values[-1].value
    assert s.config["base_grid"] == 8


def test_covering_radius_against_dense_grid():
    A = stable_arc(CAT_MAP, (0.1, 0.2), 0.05)
    lifted = CAT_MAP.lift(A.lifted_vertices[[0, -1]], -4)
    b = E.covering_radius(TORUS, lifted, tol=0.01)
    # brute force: distance from a fine grid to a dense sample of the segment
    seg = lifted[0] + np.linspace(0, 1, 40001)[:, None] * (lifted[1] - lifted[0])
    from scipy.spatial import cKDTree

    tree = cKDTree(np.mod(seg, 1.0), boxsize=1.0)
    g = (np.arange(300) + 0.5) / 300
    grid_pts = np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
    d, _ = tree.query(grid_pts)
    seg_step = np.hypot(*(lifted[1] - lifted[0])) / 40000
    assert d.max() - seg_step / 2 <= b.value + b.slack + 1e-12
    assert b.value <= d.max() + math.sqrt(2) / 600 + 1e-12


def test_rational_orbit_is_exact():
    num = np.array([[1, 3], [5, 7]])
    orb = E._rational_orbit(CAT_MAP, num, 16, 20)
    m = CAT_MAP.matrix
    x = [Fraction(1, 16), Fraction(3, 16)]
    for n in range(21):
        assert orb[0, n, 0] == float(x[0] % 1) and orb[0, n, 1] == float(x[1] % 1)
        x = [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]


def test_mixing_small():
    rep = E.mixing_probe(CAT_MAP, cells=4, window=3)
    assert rep.failures == 0 and 0 <= rep.max_n <= 12
    assert rep.first_n.shape == (16, 16)


def test_density_grows():
    fr = [E.density_probe(CAT_MAP, (0.1, 0.2), n, 8) for n in range(8)]
    assert fr[0] < 1 and all(b >= a for a, b in zip(fr, fr[1:]))


def test_separation_reduction_matches_full():
    full = hyper_distance(stable_family(CAT_MAP, 4, L_max=0.5, ambient=False),
                          unstable_family(CAT_MAP, 4, L_max=0.5, ambient=False)).value
    assert E.separation_probe(CAT_MAP, 4, L_max=0.5).value == pytest.approx(full, abs=1e-12)


def test_cwe_small():
    rep = E.cwe_probe(CAT_MAP, n_arcs=10, seed=3)
    assert rep.all_pass and rep.diameters.min() >= 1e-3


def test_demo_dispatch():
    with pytest.raises(UsageError):
        E.demo("sphere")
    r = E.demo("interval", pairs=5)
    assert r.passed and len(r.csv_rows()) == 6


def test_oracle_equivalence_small():
    rep = E.oracle_equivalence(pairs=5, max_points=200, seed=1)
    for n, dev, tol in rep.values():
        assert dev <= tol
