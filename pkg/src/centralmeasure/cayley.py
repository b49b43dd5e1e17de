"""Cayley transform ``x -> (x - i) / (x + i)`` between Hermitian and unitary minors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalSingularity, UnitEigenvalue
from .sampler import HermitianMinor
from .spectral import EigenDecomposition

__all__ = ["UnitaryMinor", "cayley", "inverse_cayley", "eigenangles", "eigen_correspondence",
           "correspondence_residual"]


@dataclass(frozen=True)
class UnitaryMinor:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=complex))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def unitarity_defect(self) -> float:
        u = self.entries
        return float(np.linalg.norm(u.conj().T @ u - np.eye(self.n)))


def cayley(m) -> UnitaryMinor:
    """``(M - iI)(M + iI)^{-1}``, computed by a solve against ``M + iI``."""
    a = np.asarray(m, dtype=complex)
    eye = np.eye(a.shape[0])
    lhs, rhs = a + 1j * eye, a - 1j * eye
    # the two factors commute, so U = (M + iI)^{-1} (M - iI)
    u = np.linalg.solve(lhs, rhs)
    resid = np.linalg.norm(lhs @ u - rhs)
    if not resid <= 1e-8 * max(1.0, np.linalg.norm(a)):
        raise NumericalSingularity(f"Cayley solve residual {resid:.3e}")
    return UnitaryMinor(u)


def inverse_cayley(u, tol: float = 1e-8) -> HermitianMinor:
    """``i (I + U)(I - U)^{-1}``; rejects ``U`` with an eigenvalue within ``tol`` of 1."""
    a = np.asarray(u, dtype=complex)
    eye = np.eye(a.shape[0])
    if a.size and np.min(np.abs(np.linalg.eigvals(a) - 1.0)) <= tol:
        raise UnitEigenvalue("1 is (numerically) an eigenvalue")
    h = 1j * np.linalg.solve(eye - a, eye + a)
    return HermitianMinor((h + h.conj().T) / 2)


def eigenangles(lam) -> np.ndarray:
    """Arguments in ``(-pi, pi]`` of ``(lam - i) / (lam + i)``; ``lam = 0`` maps to ``pi``."""
    lam = np.asarray(lam, dtype=float)
    theta = 2.0 * np.arctan2(-1.0, lam)
    return np.where(theta <= -np.pi, theta + 2.0 * np.pi, theta)


def eigen_correspondence(dec: EigenDecomposition) -> list[tuple[float, int]]:
    """``(theta, index)`` for every eigenpair: the Cayley image acts on
    eigenvector ``index`` as multiplication by ``exp(i theta)``."""
    return list(zip(eigenangles(dec.eigenvalues).tolist(), range(dec.n)))


def correspondence_residual(m, dec: EigenDecomposition, u: UnitaryMinor | None = None,
                            relative: bool = True) -> float:
    """``max_j ||U v_j - exp(i theta_j) v_j||``, divided by ``1 + |lambda_j|``
    when ``relative``."""
    u = cayley(m) if u is None else u
    v = dec.vectors
    phases = np.exp(1j * eigenangles(dec.eigenvalues))
    diff = np.linalg.norm(u.entries @ v - v * phases, axis=0)
    if relative:
        diff = diff / (1.0 + np.abs(dec.eigenvalues))
    return float(np.max(diff)) if dec.n else 0.0
