"""What each frame equation does to a frame that starts off the manifold.

We start the minus-side shoot at lambda = 0.16 + 40i from a frame whose
Gram matrix is 1e-2 away from the identity and follow the Stiefel error
||Omega* Omega - I||_F^2 along the way to x = 0.

* drury only preserves the manifold; off it, the error grows until the
  integrator gives up.
* davey keeps every level set of Omega* Omega, so the error stays put.
* the damped variants pull the frame back at rate ~2c.
"""

import numpy as np

from polarevans import SchemeConfig, boussinesq_problem, continue_frames
from polarevans.errors import StepSizeUnderflow
from polarevans.evans import init_side, integrate_polar
from polarevans.linalg import stiefel_error

LAM = 0.16 + 40j


def perturbed(omega, eps=0.05):
    H = np.array([[1.0, 0.3], [0.3, -0.5]])
    return omega @ (np.eye(2) + eps * H / np.linalg.norm(H))


if __name__ == "__main__":
    print(__doc__)
    problem = boussinesq_problem(0.4)
    W = continue_frames(problem, [LAM], "minus")[0].W
    init = init_side(problem, LAM, "minus", W)
    om0 = perturbed(init.omega_inf)
    print(f"initial error {stiefel_error(om0):.3e}\n")
    for cfg in (
        SchemeConfig("drury", drift_action="ignore"),
        SchemeConfig("davey"),
        SchemeConfig("damped_drury", 5.0),
        SchemeConfig("damped_davey", 5.0),
    ):
        try:
            _, res = integrate_polar(problem, LAM, "minus", cfg, om0, 1.0, init.mu_inf, keep_trajectory=True)
        except StepSizeUnderflow as exc:
            print(f"{cfg.label:<16} diverges: {exc}")
            continue
        errs = [stiefel_error(y[:8].reshape(4, 2)) for y in res.ys]
        picks = np.linspace(0, len(errs) - 1, 5).astype(int)
        trail = "  ".join(f"x={res.xs[i]:5.2f}: {errs[i]:.2e}" for i in picks)
        print(f"{cfg.label:<16} mesh {res.mesh_points:5d}   {trail}")
