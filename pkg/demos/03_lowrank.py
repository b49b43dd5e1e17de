"""Compare the p x p reduction with a dense eigensolver.

Without a Gaussian part the minor is a rank-p perturbation of a multiple of
the identity, so its spectrum comes from a p x p Gram-type matrix.
"""
import time

import numpy as np

from centralmeasure import ErgodicParams, eig_hermitian, lowrank_spectrum, minor, new_sample

params = ErgodicParams(points=(3.0, 1.5, -0.5, -2.0, 0.8))
sample = new_sample(params, seed=1)
n = 512

t0 = time.perf_counter()
dense = eig_hermitian(minor(sample, n)).eigenvalues
t1 = time.perf_counter()
fast = lowrank_spectrum(sample, n)
t2 = time.perf_counter()

# dense spectrum = reduced eigenvalues and n - p zeros, all shifted
full = np.sort(np.concatenate([fast, np.zeros(n - params.p)]) + params.shift)
print("max |dense - fast|:", np.max(np.abs(dense - full)))
print(f"dense {1e3 * (t1 - t0):.1f} ms, reduced {1e3 * (t2 - t1):.2f} ms")
print("scaled outliers:", np.round(fast / n, 3), "points:", params.points)
