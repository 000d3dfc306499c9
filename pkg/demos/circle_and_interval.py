"""Why the map A -> i(A) is not continuous, on the circle and the interval.

Almost-full circle arcs converge to the circle in the Hausdorff metric, yet
their hyperspaces of subarcs settle on the marked hypercircle, not on the
hyperspace of the whole circle.  On the interval nothing of the sort happens:
the second-order distance between two intervals is the sup-distance of their
endpoints.

Run:  python demos/circle_and_interval.py
"""

import numpy as np

from hyperhaus.hyper import circle_arc, full_circle, interval_arc, marked_hypercircle
from hyperhaus.metrics import enumerate_iA, hausdorff, hyper_distance, second_order_distance

GRID = 0.005
MARK = 0.3


def circle_table():
    S = full_circle(GRID, MARK)
    iS = enumerate_iA(S, GRID)
    marked = marked_hypercircle(MARK, GRID)
    print(f"{'n':>3} {'d_H(A_n, S)':>12} {'to i(S)':>9} {'to marked':>10}")
    for n in (2, 4, 8, 16, 32):
        A = circle_arc(MARK, 1 - 1 / n, GRID)
        iA = enumerate_iA(A, GRID)
        print(f"{n:>3} {hausdorff(A, S).value:12.4f} {hyper_distance(iA, iS).value:9.4f} "
              f"{hyper_distance(iA, marked).value:10.4f}")
    print("the middle column stays near 1/4 while the first goes to 0\n")


def interval_table(pairs=5, seed=1):
    rng = np.random.default_rng(seed)
    for _ in range(pairs):
        a, b = np.sort(rng.uniform(0, 1, 2)), np.sort(rng.uniform(0, 1, 2))
        d2 = second_order_distance(interval_arc(*a), interval_arc(*b), 0.01).value
        model = max(abs(a[0] - b[0]), abs(a[1] - b[1]))
        print(f"[{a[0]:.3f}, {a[1]:.3f}] vs [{b[0]:.3f}, {b[1]:.3f}]: second-order {d2:.4f}, endpoints {model:.4f}")


if __name__ == "__main__":
    circle_table()
    interval_table()
