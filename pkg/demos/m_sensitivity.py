"""How far out is far enough?

The shoot starts at x = -M and x = +M from the eigenspaces of the
profile-free limit matrix.  This script measures how D on the circle
0.16 + 0.05 e^{2 pi i t} changes as M grows, and where the real root
near 0.155 lands.
"""

import numpy as np

from polarevans import ContourSpec, SchemeConfig, boussinesq_problem, evaluate_contour, scan_real

SPEC = ContourSpec(0.16, 0.05, 20)
CFG = SchemeConfig("drury", abs_tol=1e-10, rel_tol=1e-8)


def values(M):
    return evaluate_contour(boussinesq_problem(0.4, M=M), SPEC, CFG).values


if __name__ == "__main__":
    print(__doc__)
    ref = values(20.0)
    print(f"{'M':>5} {'max rel change vs M=20':>24} {'root':>10}")
    for M in (8.0, 10.0, 12.0, 16.0):
        rel = np.max(np.abs(values(M) - ref) / np.abs(ref))
        roots = scan_real(boussinesq_problem(0.4, M=M), 0.14, 0.17, 7, CFG).roots
        print(f"{M:5g} {rel:24.2e} {roots[0]:10.5f}")
    d8, d10 = values(8.0), values(10.0)
    print(f"\nM = 8 vs M = 10: max relative change {np.max(np.abs(d8 - d10) / np.abs(d10)):.2e}")
