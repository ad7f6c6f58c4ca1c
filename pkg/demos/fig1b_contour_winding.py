"""Counting the unstable eigenvalue with the argument principle.

The image of the circle 0.16 + 0.05 e^{2 pi i t} under D winds once around
the origin, so exactly one eigenvalue lies inside.  We compute it with the
polar-coordinate method and with the exterior-product method and compare
the two pointwise.  For s = 0.6 (a stable wave) the same circle gives
winding zero.
"""

import numpy as np

from polarevans import ContourSpec, SchemeConfig, boussinesq_problem, evaluate_contour

SPEC = ContourSpec(0.16, 0.05, 20)


def run(s):
    problem = boussinesq_problem(s)
    polar = evaluate_contour(problem, SPEC, SchemeConfig("drury"))
    ext = evaluate_contour(problem, SPEC, SchemeConfig("exterior"))
    print(f"\ns = {s}")
    print(f"{'t':>5} {'Re D':>12} {'Im D':>12} {'|polar - exterior|':>20}")
    for t, a, b in zip(polar.ts, polar.values, ext.values):
        print(f"{t:5.2f} {a.real:12.4e} {a.imag:12.4e} {abs(a - b):20.2e}")
    diff = np.abs(polar.values - ext.values)
    print(f"winding: polar {polar.winding}, exterior {ext.winding}")
    print(f"max abs difference {diff.max():.2e}, max rel {np.max(diff / np.abs(ext.values)):.2e}")


if __name__ == "__main__":
    print(__doc__)
    run(0.4)
    run(0.6)
