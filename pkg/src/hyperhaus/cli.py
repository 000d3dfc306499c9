"""Command-line runner: ``hyperhaus <subcommand> [options]``.

Settings come from built-in defaults, then an optional flat ``key=value``
config file (``--config``), then flags.  Experiment subcommands write into
``--out``: one ``n,value,slack`` CSV per series (other tables get their own
columns), a ``manifest.json`` and, with ``--svg``, a log-scale plot.  The exit
status is 0 when every checked threshold holds, 1 when one fails and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import experiments as E
from .dynamics import get_system, iterate_arc
from .io import format_arc, read_arc, write_arc, write_series
from .metrics import hausdorff, second_order_distance
from .spaces import UsageError

DEMOS = ("interval", "circle", "square-gap")


@dataclasses.dataclass
class Config:
    space: str = "torus"
    matrix: str = "2,1,1,1"
    h: float = 0.01
    grid: float = 0.01
    base_grid: int = 32
    ladder_step: float = 0.05
    L_max: float = 2.0
    n_max: int = -1  # -1 picks the per-experiment default
    delta: float = 0.1
    cells: int = 8
    window: int = 10
    mixing_bound: int = 12
    density_cells: int = 16
    density_n: int = 12
    x0: str = "0.1,0.2"
    basepoints: str = "0.1,0.2;0.35,0.7;0.77,0.41"
    L0: float = 0.05
    arcs: int = 200
    cwe_iter: int = 6
    tol: float = 0.01
    seed: int = 0
    out: str = "runs"
    svg: bool = False

    def validate(self):
        for name in ("h", "grid", "ladder_step", "L_max", "delta", "L0", "tol"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name} must be positive")
        if self.h > 0.25:
            raise UsageError("gauge h must be at most 0.25")
        for name in ("base_grid", "cells", "window", "density_cells", "arcs"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be at least 1")
        self.matrix_tuple()
        self.point(self.x0)

    def matrix_tuple(self):
        try:
            a, b, c, d = (int(x) for x in self.matrix.split(","))
        except ValueError:
            raise UsageError(f"matrix must be four comma-separated integers, got {self.matrix!r}") from None
        return ((a, b), (c, d))

    @staticmethod
    def point(text):
        try:
            x, y = (float(v) for v in text.split(","))
        except ValueError:
            raise UsageError(f"a point is written x,y; got {text!r}") from None
        return (x, y)

    def system(self, space=None):
        return get_system(space or self.space, self.matrix_tuple())

    def ladder(self):
        n = int(round(self.L_max / self.ladder_step))
        if not np.isclose(n * self.ladder_step, self.L_max):
            raise UsageError("L_max must be a multiple of ladder_step")
        return np.round(np.arange(n + 1) * self.ladder_step, 12)

    def as_dict(self):
        return dataclasses.asdict(self)


def _coerce(name, text):
    typ = type(getattr(Config(), name))
    if typ is bool:
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{name}: expected a boolean, got {text!r}")
    try:
        return typ(text)
    except ValueError:
        raise UsageError(f"{name}: cannot read {text!r} as {typ.__name__}") from None


def load_config(path) -> dict:
    """Flat ``key=value`` file; blank lines and ``#`` comments are ignored."""
    known = {f.name for f in dataclasses.fields(Config)}
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, val)
    return out


def build_config(args) -> Config:
    cfg = Config()
    if getattr(args, "config", None):
        for k, v in load_config(args.config).items():
            setattr(cfg, k, v)
    for f in dataclasses.fields(Config):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# run bookkeeping
# ---------------------------------------------------------------------------


@contextmanager
def output_lock(directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    lock = directory / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise UsageError(f"{directory} is locked by another run (remove {lock} if stale)") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        lock.unlink(missing_ok=True)


def _version():
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("hyperhaus")
    except PackageNotFoundError:
        return "unknown"


class Run:
    """Collects the files and threshold checks of one experiment."""

    def __init__(self, name: str, cfg: Config, directory: Path, config: dict | None = None):
        self.name = name
        self.cfg = cfg
        self.dir = directory
        self.dir.mkdir(parents=True, exist_ok=True)
        self.manifest = E.RunManifest(name, config if config is not None else cfg.as_dict(),
                                      started=_now(), version=_version())
        self.checks = []
        self._t0 = time.perf_counter()

    def series(self, stem: str, series: E.ConvergenceSeries):
        write_series(self.dir / f"{stem}.csv", series)
        self.manifest.outputs.append(f"{stem}.csv")
        if self.cfg.svg:
            self._plot(stem, series)
        last = series.values[-1]
        print(f"{self.name}/{stem}: n={series.indices[-1]} value={last.value:.6g} slack={last.slack:.3g}")

    def table(self, stem: str, lines: list):
        (self.dir / f"{stem}.csv").write_text("\n".join(lines) + "\n")
        self.manifest.outputs.append(f"{stem}.csv")

    def check(self, label: str, ok: bool, detail: str = ""):
        self.checks.append((label, bool(ok), detail))

    def _plot(self, stem, series):
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        matplotlib.rcParams["svg.hashsalt"] = "hyperhaus"
        v = np.array([b.value for b in series.values])
        s = np.array([b.slack for b in series.values])
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.errorbar(series.indices, v, yerr=np.minimum(s, 0.999 * v), marker="o", ms=3, capsize=2)
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("value")
        ax.set_title(series.label)
        fig.tight_layout()
        fig.savefig(self.dir / f"{stem}.svg", metadata={"Date": None})
        plt.close(fig)
        self.manifest.outputs.append(f"{stem}.svg")

    def finish(self) -> bool:
        self.manifest.finished = _now()
        self.manifest.elapsed_s = round(time.perf_counter() - self._t0, 3)
        doc = self.manifest.as_dict()
        doc["checks"] = [{"check": c, "passed": ok, "detail": d} for c, ok, d in self.checks]
        (self.dir / "manifest.json").write_text(json.dumps(doc, indent=2, default=_jsonable) + "\n")
        for c, ok, d in self.checks:
            print(f"  [{'pass' if ok else 'FAIL'}] {c}" + (f"  ({d})" if d else ""))
        return all(ok for _, ok, _ in self.checks)


def _now():
    return time.strftime("%Y-%m-%dT%H:%M:%S")


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    return str(x)


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def _converge_targets(space):
    # (index, bound) for the final check
    return {"torus": (10, 0.05), "pillowcase": (12, 0.08)}.get(space)


def run_converge(cfg: Config, root: Path, space=None, basepoints=None) -> bool:
    space = space or cfg.space
    system = cfg.system(space)
    target = _converge_targets(space)
    n_max = cfg.n_max if cfg.n_max >= 0 else target[0]
    pts = basepoints or [cfg.point(cfg.x0)]
    run = Run(f"converge-{space}", cfg, root / f"converge-{space}")
    fam = E.stable_family(system, cfg.base_grid, cfg.ladder(), cfg.L_max, gauge=cfg.grid)
    for i, x0 in enumerate(pts):
        s = E.convergence_experiment(system, x0, cfg.L0, n_max, cfg.grid, cfg.base_grid, cfg.ladder(), cfg.L_max,
                                     label=f"{space} x0={x0[0]:g},{x0[1]:g}", family=fam)
        run.series(f"series_{i}", s)
        run.check(f"x0={x0}: D_n eventually decreasing for n >= 2 within slack", s.eventually_decreasing(2))
        run.check(f"x0={x0}: D_0 >= 0.2", s.values[0].value >= 0.2, f"D_0={s.values[0].value:.6g}")
        if target and n_max >= target[0]:
            d = s.value_at(target[0]).value
            run.check(f"x0={x0}: D_{target[0]} < {target[1]}", d < target[1], f"D={d:.6g}")
    return run.finish()


def run_cover(cfg: Config, root: Path) -> bool:
    system = cfg.system()
    n_max = cfg.n_max if cfg.n_max >= 0 else 9
    run = Run(f"cover-{cfg.space}", cfg, root / f"cover-{cfg.space}")
    s = E.covering_radius_series(system, cfg.point(cfg.x0), cfg.L0, n_max, cfg.tol)
    run.series("series", s)
    mono = all(b.value <= a.value + a.slack + b.slack for a, b in zip(s.values, s.values[1:]))
    run.check("r_n nonincreasing within slack", mono)
    if n_max >= 9:
        m = E.mean_ratio(s, 3, 8)
        run.check("mean r_{n+1}/r_n over n=3..8 in [0.33, 0.43]", 0.33 <= m <= 0.43, f"mean={m:.6g}")
    return run.finish()


def run_mixing(cfg: Config, root: Path) -> bool:
    run = Run("mixing", cfg, root / "mixing")
    rep = E.mixing_probe(cfg.system(), cfg.cells, cfg.window)
    nc = cfg.cells ** 2
    run.table("first_n", ["u,v,first_n"] + [f"{u},{v},{rep.first_n[u, v]}" for u in range(nc) for v in range(nc)])
    print(f"mixing: max N = {rep.max_n} over {nc * nc} pairs, {rep.failures} not found")
    run.check(f"every pair mixes by n <= {rep.n_cap}", rep.failures == 0, f"failures={rep.failures}")
    run.check(f"max N <= {cfg.mixing_bound}", 0 <= rep.max_n <= cfg.mixing_bound, f"max N={rep.max_n}")
    return run.finish()


def run_separate(cfg: Config, root: Path) -> bool:
    run = Run("separate", cfg, root / "separate")
    b = E.separation_probe(cfg.system(), cfg.base_grid, cfg.ladder(), cfg.L_max, cfg.grid)
    run.table("separation", ["value,slack", b.csv()])
    print(f"separate: {b.value:.6g} (slack {b.slack:.3g})")
    run.check("stable and unstable families at distance >= 0.1", b.value >= 0.1, f"value={b.value:.6g}")
    return run.finish()


def run_density(cfg: Config, root: Path) -> bool:
    run = Run("density", cfg, root / "density")
    system = cfg.system()
    fr = [E.density_probe(system, cfg.point(cfg.x0), n, cfg.density_cells, cfg.delta)
          for n in range(cfg.density_n + 1)]
    run.table("coverage", ["n_max,coverage"] + [f"{n},{f!r}" for n, f in enumerate(fr)])
    print(f"density: coverage {fr[-1]:.4g} at n_max={cfg.density_n}, {cfg.density_cells}x{cfg.density_cells} cells")
    run.check("coverage nondecreasing in n_max", all(b >= a for a, b in zip(fr, fr[1:])))
    run.check("coverage 1.0", fr[-1] == 1.0, f"coverage={fr[-1]!r}")
    return run.finish()


def run_cwe(cfg: Config, root: Path) -> bool:
    run = Run("probe-cwe", cfg, root / "probe-cwe")
    rep = E.cwe_probe(cfg.system(), cfg.arcs, cfg.delta, cfg.cwe_iter, seed=cfg.seed)
    run.table("arcs", ["arc,diameter,iterations"] +
              [f"{i},{float(d)!r},{k}" for i, (d, k) in enumerate(zip(rep.diameters, rep.needed))])
    print(f"probe-cwe: worst |n| = {rep.worst} over {cfg.arcs} arcs")
    run.check(f"every arc exceeds {cfg.delta} within {cfg.cwe_iter} iterations", rep.all_pass, f"worst={rep.worst}")
    return run.finish()


def run_demo(cfg: Config, root: Path, name: str) -> bool:
    run = Run(f"demo-{name}", cfg, root / f"demo-{name}")
    res = E.demo(name)
    run.table("table", res.csv_rows())
    print(res.summary)
    run.check(f"{name} bounds", res.passed)
    return run.finish()


def run_oracle(cfg: Config, root: Path) -> bool:
    run = Run("oracle", cfg, root / "oracle")
    rep = E.oracle_equivalence(seed=cfg.seed)
    run.table("deviations", ["quantity,pairs,max_deviation,tolerance"] +
              [f"{k},{n},{d!r},{t!r}" for k, (n, d, t) in rep.items()])
    for k, (n, d, t) in rep.items():
        run.check(f"{k}: fast equals brute force on {n} pairs", d <= t, f"max deviation={d:.3g}")
    return run.finish()


def run_verify_all(cfg: Config, root: Path) -> bool:
    pts = [cfg.point(p) for p in cfg.basepoints.split(";")]
    steps = [
        lambda: run_oracle(cfg, root),
        lambda: run_demo(cfg, root, "interval"),
        lambda: run_demo(cfg, root, "circle"),
        lambda: run_demo(cfg, root, "square-gap"),
        lambda: run_converge(cfg, root, "torus", pts),
        lambda: run_converge(cfg, root, "pillowcase"),
        lambda: run_cover(dataclasses.replace(cfg, space="torus"), root),
        lambda: run_mixing(cfg, root),
        lambda: run_density(cfg, root),
        lambda: run_separate(cfg, root),
        lambda: run_cwe(cfg, root),
    ]
    ok = True
    for step in steps:
        ok &= step()
    print("verify-all: " + ("all checks passed" if ok else "some checks FAILED"))
    return ok


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p, experiment=True):
    p.add_argument("--config", help="flat key=value file")
    p.add_argument("--space", choices=["interval", "circle", "torus", "pillowcase", "square"])
    p.add_argument("--matrix", help="a,b,c,d for the map [[a,b],[c,d]]")
    if experiment:
        p.add_argument("--out", help="output directory")
        p.add_argument("--svg", action="store_const", const=True, help="also write log-scale SVG plots")
        p.add_argument("--seed", type=int)


def make_parser():
    ap = argparse.ArgumentParser(prog="hyperhaus", description="Hausdorff and second-order Hausdorff distances "
                                 "between continua on model surfaces, and checks of the Anosov examples.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hausdorff", help="Hausdorff distance between two arc CSVs; prints value,slack")
    _add_common(p, False)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("hyper2", help="second-order Hausdorff distance between two arc CSVs")
    _add_common(p, False)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--grid", type=float)

    p = sub.add_parser("iterate", help="image of an arc CSV under the n-th iterate; writes t,x,y")
    _add_common(p, False)
    p.add_argument("--arc", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--h", type=float)
    p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("converge", help="distance from the stable family to i(f^-n(A0)), n = 0..n_max")
    _add_common(p)
    p.add_argument("-n", "--n-max", dest="n_max", type=int)
    p.add_argument("--grid", type=float)
    p.add_argument("--base-grid", dest="base_grid", type=int)
    p.add_argument("--x0")
    p.add_argument("--L0", type=float)

    p = sub.add_parser("cover", help="covering radius of f^-n(A0)")
    _add_common(p)
    p.add_argument("-n", "--n-max", dest="n_max", type=int)
    p.add_argument("--x0")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("mixing", help="first N after which every cell meets the images of every other")
    _add_common(p)
    p.add_argument("--cells", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--mixing-bound", dest="mixing_bound", type=int)

    p = sub.add_parser("separate", help="distance between the stable and unstable families")
    _add_common(p)
    p.add_argument("--base-grid", dest="base_grid", type=int)
    p.add_argument("--L-max", dest="L_max", type=float)

    p = sub.add_parser("density", help="cells met by the stable arcs through one point")
    _add_common(p)
    p.add_argument("--cells", dest="density_cells", type=int)
    p.add_argument("-n", "--n-max", dest="density_n", type=int)
    p.add_argument("--x0")

    p = sub.add_parser("probe-cwe", help="random small arcs grow past delta within a few iterations")
    _add_common(p)
    p.add_argument("--arcs", type=int)
    p.add_argument("--delta", type=float)

    p = sub.add_parser("demo", help="interval, circle and square examples")
    _add_common(p)
    p.add_argument("name", choices=DEMOS)

    p = sub.add_parser("verify-all", help="every check at its default configuration")
    _add_common(p)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        cfg = build_config(args)
        return _dispatch(args, cfg)
    except UsageError as exc:
        print(f"hyperhaus: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, cfg: Config) -> int:
    cmd = args.command
    if cmd == "hausdorff":
        a, b = read_arc(args.a, cfg.space), read_arc(args.b, cfg.space)
        print(hausdorff(a, b).csv())
        return 0
    if cmd == "hyper2":
        a, b = read_arc(args.a, cfg.space), read_arc(args.b, cfg.space)
        print(second_order_distance(a, b, cfg.grid).csv())
        return 0
    if cmd == "iterate":
        a = read_arc(args.arc, cfg.space)
        img = iterate_arc(cfg.system(), a, args.n, cfg.h)
        if args.output:
            write_arc(args.output, img)
        else:
            sys.stdout.write(format_arc(img))
        return 0
    root = Path(cfg.out)
    with output_lock(root):
        if cmd == "converge":
            ok = run_converge(cfg, root)
        elif cmd == "cover":
            ok = run_cover(cfg, root)
        elif cmd == "mixing":
            ok = run_mixing(cfg, root)
        elif cmd == "separate":
            ok = run_separate(cfg, root)
        elif cmd == "density":
            ok = run_density(cfg, root)
        elif cmd == "probe-cwe":
            ok = run_cwe(cfg, root)
        elif cmd == "demo":
            ok = run_demo(cfg, root, args.name)
        else:
            ok = run_verify_all(cfg, root)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
