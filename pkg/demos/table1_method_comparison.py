"""How do the orthogonalization schemes compare on a hard contour?

On the circle 0.16 + 40i + 0.15 e^{2 pi i t} the coefficient matrix is
large (|lambda|^2 ~ 1600), which makes the frame equations fast.  Each
scheme is compared against the exterior-product method run at very tight
tolerances.

Damping pulls the frame back onto the Stiefel manifold, but a large
damping constant makes the equation stiff: watch the mesh column for
c = 1600.  Pass --quick to skip the stiff rows (they take a few minutes).
"""

import sys

from polarevans import ContourSpec, SchemeConfig, boussinesq_problem, compare_methods

SPEC = ContourSpec(0.16 + 40j, 0.15, 20)


def methods(quick):
    cs = (0, 1, 5, 10, 20) if quick else (0, 1, 5, 10, 20, 1600)
    out = [SchemeConfig("drury"), SchemeConfig("davey")]
    for family in ("damped_drury", "damped_davey", "bridges_reich"):
        out += [SchemeConfig(family, float(c)) for c in cs if family != "bridges_reich" or c <= 20]
    return out


if __name__ == "__main__":
    print(__doc__)
    rows = compare_methods(boussinesq_problem(0.4), SPEC, methods("--quick" in sys.argv))
    print(f"{'method':<14}{'c':>6}{'stiefel':>11}{'mesh':>8}{'time[s]':>9}{'abs':>11}{'rel':>11}")
    for r in rows:
        print(
            f"{r.method:<14}{r.c:6g}{r.stiefel_err:11.1e}{r.mesh:8g}"
            f"{r.time_seconds:9.2f}{r.abs_diff:11.1e}{r.rel_diff:11.1e}"
        )
