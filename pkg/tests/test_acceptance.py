"""The twelve acceptance criteria, each at its stated tolerance.

The expensive ones read the outputs of two ``verify-all`` runs made once per
session; the metric properties are computed here directly.
"""

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE
from hyperhaus import cli
from hyperhaus.experiments import random_polyline
from hyperhaus.metrics import hausdorff, second_order_distance
from hyperhaus.spaces import get_space

SPACES = ["interval", "circle", "torus", "pillowcase", "square"]


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    assert ok, detail


@pytest.fixture(scope="session")
def runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("verify")
    codes = [cli.main(["verify-all", "--out", str(root / name)]) for name in ("first", "second")]
    return root / "first", root / "second", codes


def rows(path):
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def elapsed(run_dir):
    return json.loads((run_dir / "manifest.json").read_text())["elapsed_s"]


def series(path):
    return [(int(r["n"]), float(r["value"]), float(r["slack"])) for r in rows(path)]


def decreasing_from(s, start):
    return all(b[1] <= a[1] + a[2] for a, b in zip(s, s[1:]) if a[0] >= start)


def test_verify_all_exit_code(runs):
    assert runs[2] == [0, 0]


def test_c01_oracle_equivalence(runs):
    out = runs[0] / "oracle"
    dev = {r["quantity"]: r for r in rows(out / "deviations.csv")}
    ok = all(int(r["pairs"]) == 50 and float(r["max_deviation"]) <= float(r["tolerance"]) for r in dev.values())
    ok &= float(dev["hausdorff"]["tolerance"]) == 1e-12 and float(dev["second_order"]["tolerance"]) == 1e-9
    t = elapsed(out)
    detail = ", ".join(f"{k} dev={float(r['max_deviation']):.2g}" for k, r in dev.items()) + f", {t:.1f}s"
    record(1, ok and t < 120, detail)


def test_c02_metric_properties():
    rng = np.random.default_rng(2)
    worst_h = worst_2 = 0.0
    ok = True
    for kind in SPACES:
        sp = get_space(kind)
        for _ in range(100):
            A, B, C = (random_polyline(sp, rng) for _ in range(3))
            h = {p: hausdorff(*p).value for p in [(A, B), (B, A), (B, C), (A, C)]}
            ok &= min(h.values()) >= 0 and h[(A, B)] == h[(B, A)]
            worst_h = max(worst_h, h[(A, C)] - h[(A, B)] - h[(B, C)])
            g = max(A.gauge, B.gauge, C.gauge)
            ab, ba = second_order_distance(A, B, g), second_order_distance(B, A, g)
            bc, ac = second_order_distance(B, C, g), second_order_distance(A, C, g)
            ok &= min(ab.value, bc.value, ac.value) >= 0 and ab.value == ba.value
            slack = max(ab.slack, bc.slack, ac.slack)
            excess = ac.value - ab.value - bc.value
            ok &= excess <= 2 * slack
            worst_2 = max(worst_2, excess)
    ok &= worst_h <= 1e-12
    record(2, ok, f"worst triangle excess d_H={worst_h:.2g}, second-order={worst_2:.2g}")


def test_c03_hausdorff_below_second_order():
    rng = np.random.default_rng(3)
    worst = -np.inf
    for kind in SPACES:
        sp = get_space(kind)
        for _ in range(500):
            A, B = random_polyline(sp, rng), random_polyline(sp, rng)
            g = max(A.gauge, B.gauge)
            worst = max(worst, hausdorff(A, B).value - second_order_distance(A, B, g).value)
    record(3, worst <= 1e-12, f"max d_H - second-order = {worst:.3g} over {500 * len(SPACES)} pairs")


def test_c04_interval(runs):
    r = rows(runs[0] / "demo-interval" / "table.csv")
    dev = max(abs(float(x["second_order"]) - float(x["model"])) for x in r)
    record(4, len(r) == 200 and dev <= 2 * 0.01, f"max deviation {dev:.3g} on {len(r)} pairs")


def test_c05_circle(runs):
    r = rows(runs[0] / "demo-circle" / "table.csv")
    grid = 0.005
    ok = [int(x["n"]) for x in r] == [2, 4, 8, 16, 32]
    for x in r:
        n = int(x["n"])
        ok &= float(x["to_marked"]) <= 1 / n + 2 * grid
        ok &= float(x["to_circle"]) >= 0.25 - 1 / n - 2 * grid
        ok &= abs(float(x["hausdorff"]) - 1 / (2 * n)) <= grid
    record(5, ok, "n = 2..32 at grid 0.005")


def test_c06_torus_convergence(runs):
    out = runs[0] / "converge-torus"
    ss = [series(out / f"series_{i}.csv") for i in range(3)]
    ok = all(decreasing_from(s, 2) and s[10][1] < 0.05 for s in ss)
    t = elapsed(out)
    record(6, ok and t < 600, "D_10 = " + ", ".join(f"{s[10][1]:.4f}" for s in ss) + f"; {t:.0f}s")


def test_c07_pillowcase_convergence(runs):
    s = series(runs[0] / "converge-pillowcase" / "series_0.csv")
    record(7, decreasing_from(s, 2) and s[12][1] < 0.08, f"D_12 = {s[12][1]:.4f}")


def test_c08_covering_radius(runs):
    s = series(runs[0] / "cover-torus" / "series.csv")
    mono = all(b[1] <= a[1] + a[2] + b[2] for a, b in zip(s, s[1:]))
    v = {n: x for n, x, _ in s}
    mean = float(np.mean([v[n + 1] / v[n] for n in range(3, 9)]))
    record(8, mono and 0.33 <= mean <= 0.43, f"mean ratio {mean:.4f}")


def test_c09_cw_expansivity(runs):
    r = rows(runs[0] / "probe-cwe" / "arcs.csv")
    it = [int(x["iterations"]) for x in r]
    ok = len(r) == 200 and all(0 <= k <= 6 for k in it) and min(float(x["diameter"]) for x in r) >= 1e-3
    cfg = json.loads((runs[0] / "probe-cwe" / "manifest.json").read_text())["config"]
    record(9, ok and cfg["delta"] == 0.1, f"worst {max(it)} iterations")


def test_c10_mixing_and_density(runs):
    first = [int(x["first_n"]) for x in rows(runs[0] / "mixing" / "first_n.csv")]
    cfg = json.loads((runs[0] / "mixing" / "manifest.json").read_text())["config"]
    mix_ok = len(first) == 64 * 64 and min(first) >= 0 and max(first) <= 12
    mix_ok &= cfg["cells"] == 8 and cfg["window"] == 10
    cov = rows(runs[0] / "density" / "coverage.csv")
    dcfg = json.loads((runs[0] / "density" / "manifest.json").read_text())["config"]
    dens_ok = int(cov[-1]["n_max"]) == 12 and float(cov[-1]["coverage"]) == 1.0 and dcfg["density_cells"] == 16
    record(10, mix_ok and dens_ok, f"max N = {max(first)}, coverage = {cov[-1]['coverage']}")


def test_c11_separation(runs):
    r = rows(runs[0] / "separate" / "separation.csv")[0]
    v = float(r["value"])
    record(11, v >= 0.1, f"distance {v:.4f}")


def test_c12_determinism(runs):
    a, b = runs[0], runs[1]
    files = sorted(p.relative_to(a) for p in a.rglob("*.csv"))
    same = [(a / f).read_bytes() == (b / f).read_bytes() for f in files]
    ok = len(files) > 0 and all(same) and files == sorted(p.relative_to(b) for p in b.rglob("*.csv"))
    record(12, ok, f"{sum(same)}/{len(files)} CSV files identical")
