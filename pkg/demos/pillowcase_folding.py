"""Stable arcs on the pillowcase, where the cat map descends through x -> -x.

An arc through a cone point folds back on itself; its image is half as long.
Away from the cone points the torus and pillowcase pictures agree up to the
fold, and backward images still spread over the whole sphere.

Run:  python demos/pillowcase_folding.py
"""

from hyperhaus.dynamics import PillowcaseSystem, iterate_arc, stable_arc
from hyperhaus.experiments import density_probe

P = PillowcaseSystem()

a = stable_arc(P, (0.0, 0.0), 0.4, offset=0.05)
print(f"arc of length 0.4 starting 0.15 before a cone point folds to length {a.length:.3f}")

b = stable_arc(P, (0.1, 0.2), 0.05)
for n in (2, 4, 6):
    img = iterate_arc(P, b, -n, 0.01)
    print(f"f^-{n}: length {img.length:7.3f}, {len(img.lifted_vertices)} vertices")

for n in (0, 4, 8, 12):
    print(f"cells of a 16x16 grid met after {n:>2} steps: {density_probe(P, (0.1, 0.2), n, 16):.3f}")
