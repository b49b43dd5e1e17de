"""Draw one coupled infinite matrix and look at its first few minors.

Every minor of a sample is the top-left block of the next one, so growing
``n`` never redraws entries that were already seen.
"""
import numpy as np

from centralmeasure import ErgodicParams, minor, new_sample

params = ErgodicParams(gamma1=0.5, gamma2=1.0, points=(2.0, -1.0))
sample = new_sample(params, seed=42)

m8 = minor(sample, 8).entries
m64 = minor(sample, 64).entries
print("8x8 minor is the corner of the 64x64 one:", np.array_equal(m64[:8, :8], m8))
print("Hermitian:", np.array_equal(m64, m64.conj().T))

# Scaled spectrum: the two points show up as outliers near 2 and -1,
# the Gaussian bulk shrinks toward 0 like 1/sqrt(n).
for n in (16, 64, 256):
    w = np.linalg.eigvalsh(minor(sample, n).entries) / n
    print(f"n={n:4d}  min {w.min():+.3f}  max {w.max():+.3f}")
