"""Watch the scaled eigenvalue counts and eigenvector weights settle.

Scenario: two points 2 and -1, no Gaussian part. The count in [1.5, 2.5]
should become exactly one, and the eigenvector weight there should approach
the limit weight built from the same random field.
"""
import numpy as np

from centralmeasure import ErgodicParams, convergence_run

rep = convergence_run(
    ErgodicParams(points=(2.0, -1.0)), seed=7,
    intervals=["[1.5, 2.5]", "(-1.5, -0.5)"], pairs=[(1, 1), (1, 2)], replicas=20,
)

print("limit counts:", rep.lambda_inf.tolist())
for t, n in enumerate(rep.n_grid):
    exact = np.mean(rep.abs_err_lambda[:, t, :] == 0)
    med = np.median(rep.abs_err_sigma[:, t], axis=0)
    print(f"n={n:4d}  exact counts {exact:5.0%}  median weight error {np.array2string(med.ravel(), precision=3)}")
