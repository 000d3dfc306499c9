import json

import numpy as np
import pytest

from hyperhaus.dynamics import CAT_MAP, stable_arc
from hyperhaus.budget import ErrorBudget
from hyperhaus.experiments import ConvergenceSeries
from hyperhaus.hyper import stable_family
from hyperhaus.io import export_family, read_arc, read_series, unwrap_samples, write_arc, write_series
from hyperhaus.spaces import TORUS, UsageError


def test_arc_round_trip_is_exact(tmp_path):
    a = stable_arc(CAT_MAP, (0.1, 0.2), 0.731)
    p = write_arc(tmp_path / "a.csv", a)
    b = read_arc(p, "torus", gauge=a.gauge)
    assert np.array_equal(a.lifted_vertices, b.lifted_vertices)
    assert np.array_equal(a.cumulative_length, b.cumulative_length)


def test_read_arc_header_required(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("0,0.1,0.2\n1,0.2,0.2\n")
    with pytest.raises(UsageError):
        read_arc(p)
    p.write_text("t,x,y\n0,a,0\n")
    with pytest.raises(UsageError):
        read_arc(p)


def test_read_arc_closed_detection(tmp_path):
    p = tmp_path / "loop.csv"
    p.write_text("t,x,y\n0,0,0\n1,1,0\n2,1,1\n3,0,0\n")
    assert read_arc(p, "square").closed


def test_series_round_trip(tmp_path):
    s = ConvergenceSeries("x", [0, 1], [ErrorBudget(0.5, 0.05), ErrorBudget(0.25, 0.05)])
    rows = read_series(write_series(tmp_path / "s.csv", s))
    assert rows == [(0, 0.5, 0.05), (1, 0.25, 0.05)]


def test_unwrap():
    lift = np.array([[0.95, 0.5], [1.02, 0.5], [1.09, 0.55]])
    out = unwrap_samples(TORUS, TORUS.canonical(lift))
    assert np.allclose(out - out[0], lift - lift[0])


def test_export_family(tmp_path):
    fam = stable_family(CAT_MAP, base_grid=2, L_max=0.1)
    d = export_family(fam, tmp_path / "fam")
    man = json.loads((d / "manifest.json").read_text())
    assert len(man["files"]) == fam.n_arcs and man["includes_ambient"]
    e = read_arc(d / man["files"][5], "torus", gauge=fam.gauge)
    assert e.length == pytest.approx(fam.straight["half"][5] * 2)
