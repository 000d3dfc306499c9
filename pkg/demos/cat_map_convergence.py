"""Backward images of a short stable arc of the cat map.

f^{-n} stretches a stable arc by lambda_u per step, so the arc winds densely
around the torus.  Its hyperspace of subarcs approaches the closure of the
stable foliation's arcs, and its covering radius drops by about lambda_s
per step.  The family here uses a 16x16 base grid, coarser than the default,
so D_n levels off near its resolution of about 0.044.

Run:  python demos/cat_map_convergence.py [n_max]
"""

import sys

from hyperhaus.dynamics import CAT_MAP
from hyperhaus.experiments import convergence_experiment, covering_radius_series

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 8

print(f"lambda_s = {CAT_MAP.lambda_s:.6f}")
conv = convergence_experiment(CAT_MAP, x0=(0.1, 0.2), n_max=n_max, base_grid=16)
cover = covering_radius_series(CAT_MAP, x0=(0.1, 0.2), n_max=n_max)
print(f"{'n':>3} {'D_n':>8} {'r_n':>9} {'r_n/r_(n-1)':>12}")
prev = None
for n, d, r in zip(conv.indices, conv.values, cover.values):
    ratio = "" if prev is None else f"{r.value / prev:12.4f}"
    print(f"{n:>3} {d.value:8.4f} {r.value:9.5f} {ratio}")
    prev = r.value
print(f"slack on D_n: {conv.values[0].slack:.3f}")
