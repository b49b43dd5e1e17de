"""Cayley transform of a sampled minor.

The unitary (M - i)/(M + i) shares eigenvectors with M; its eigenangles are
2 atan2(-1, lambda), and the transform inverts cleanly.
"""
import numpy as np

from centralmeasure import (
    ErgodicParams, cayley, eig_hermitian, eigen_correspondence, inverse_cayley, minor, new_sample,
)
from centralmeasure.cayley import correspondence_residual

m = minor(new_sample(ErgodicParams(0.5, 1.0, (2.0, -1.0)), 9), 64).entries
u = cayley(m)
dec = eig_hermitian(m)

print("unitarity defect:", u.unitarity_defect())
print("eigenvector residual:", correspondence_residual(m, dec, u, relative=False))
print("round trip:", np.linalg.norm(inverse_cayley(u).entries - m) / np.linalg.norm(m))
for theta, i in eigen_correspondence(dec)[:3]:
    print(f"lambda={dec.eigenvalues[i]:+8.3f}  theta={theta:+.4f}")
