"""First-coordinate mass of a uniformly random unit vector in C^n.

|u_1|^2 follows Beta(1, n-1); the KS distance to that law stays below the
1% critical value.
"""
import numpy as np

from centralmeasure import beta_tail_test, haar_column_entry_samples

for n in (2, 8, 32):
    r = beta_tail_test(n, draws=10_000, seed=0)
    print(f"n={n:3d}  KS={r.ks:.4f}  critical={r.threshold:.4f}  {'ok' if r.passed else 'REJECT'}")

x = haar_column_entry_samples(8, 10_000, seed=1)
print("mean |u_1|^2 at n=8:", round(float(np.mean(x)), 4), "expected", 1 / 8)
