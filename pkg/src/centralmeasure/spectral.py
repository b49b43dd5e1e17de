"""Eigendecomposition of minors and their spectral projection-valued measures."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DegenerateEigenvalue,
    GaussianPartPresent,
    IndexOutOfRange,
    NoPhaseAnchor,
)
from .measures import COUNTING, PROJECTION, AtomicMeasure
from .sampler import CoupledSample

__all__ = [
    "EigenDecomposition",
    "eig_hermitian",
    "lambda_measure",
    "sigma_measure",
    "normalized_eigvec",
    "lowrank_spectrum",
    "TAU_MULT",
    "TAU_PHASE",
]

log = logging.getLogger(__name__)

TAU_MULT = 1e-8
TAU_PHASE = 1e-6


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues, orthonormal eigenvector columns and the
    multiplicity groups as half-open index ranges ``(start, stop)``."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    groups: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def group_of(self, i: int) -> tuple[int, int]:
        for g in self.groups:
            if g[0] <= i < g[1]:
                return g
        raise IndexOutOfRange(f"eigenvalue index {i} outside 0..{self.n - 1}")

    def projection(self, group: tuple[int, int]) -> np.ndarray:
        v = self.vectors[:, group[0]:group[1]]
        return v @ v.conj().T

    def group_starts(self) -> np.ndarray:
        return np.array([g[0] for g in self.groups], dtype=int)


def group_eigenvalues(w: np.ndarray, tau: float = TAU_MULT) -> tuple[tuple[int, int], ...]:
    """Maximal runs of ``w`` (ascending) whose consecutive gaps are ``<= tau * scale``."""
    if w.size == 0:
        return ()
    scale = max(float(w[-1] - w[0]), float(np.max(np.abs(w))))
    if scale == 0.0:
        scale = 1.0
    breaks = np.flatnonzero(np.diff(w) > tau * scale) + 1
    edges = np.concatenate([[0], breaks, [w.size]])
    return tuple((int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]))


def eig_hermitian(m, tol_resid: float = 1e-9, tol_orth: float = 1e-9,
                  tau_mult: float = TAU_MULT) -> EigenDecomposition:
    """Dense Hermitian eigendecomposition with residual and orthonormality checks."""
    a = np.asarray(m, dtype=complex)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    resid = np.linalg.norm(a @ v - v * w)
    orth = np.linalg.norm(v.conj().T @ v - np.eye(a.shape[0]))
    log.debug("eigh n=%d residual=%.3e orthogonality=%.3e", a.shape[0], resid, orth)
    if not resid <= tol_resid * max(1.0, np.linalg.norm(a)):
        raise ConvergenceFailure(f"residual {resid:.3e} above tolerance")
    if not orth <= tol_orth:
        raise ConvergenceFailure(f"orthogonality defect {orth:.3e} above tolerance")
    return EigenDecomposition(w, v, group_eigenvalues(w, tau_mult))


def _group_locations(dec: EigenDecomposition) -> np.ndarray:
    starts = dec.group_starts()
    sizes = np.array([b - a for a, b in dec.groups])
    return np.add.reduceat(dec.eigenvalues, starts) / sizes / dec.n


def lambda_measure(dec: EigenDecomposition) -> AtomicMeasure:
    """Counting measure ``sum m(lambda) delta_{lambda/n}``."""
    if dec.n == 0:
        return AtomicMeasure.empty(COUNTING)
    sizes = np.array([b - a for a, b in dec.groups], dtype=float)
    return AtomicMeasure(_group_locations(dec), sizes, COUNTING)


def sigma_measure(dec: EigenDecomposition, a: int, b: int) -> AtomicMeasure:
    """Projection measure ``sum n (Pi_lambda)_{a,b} delta_{lambda/n}`` (1-based ``a, b``)."""
    n = dec.n
    if not (1 <= a <= n and 1 <= b <= n):
        raise IndexOutOfRange(f"({a}, {b}) outside 1..{n}")
    if a > b:
        # exact Hermitian symmetry between (a, b) and (b, a)
        return sigma_measure(dec, b, a).conj()
    if a == b:
        prod = np.abs(dec.vectors[a - 1, :]) ** 2 + 0j
    else:
        prod = dec.vectors[a - 1, :] * dec.vectors[b - 1, :].conj()
    weights = n * np.add.reduceat(prod, dec.group_starts())
    return AtomicMeasure(_group_locations(dec), weights, PROJECTION)


def normalized_eigvec(dec: EigenDecomposition, r: int, side: str = "largest",
                      tau_phase: float = TAU_PHASE) -> np.ndarray:
    """Eigenvector of the ``r``-th largest/smallest eigenvalue scaled to norm
    ``sqrt(n)``, with its first coordinate above ``tau_phase`` made real positive."""
    n = dec.n
    if not 1 <= r <= n:
        raise IndexOutOfRange(f"rank {r} outside 1..{n}")
    if side == "largest":
        i = n - r
    elif side == "smallest":
        i = r - 1
    else:
        raise ValueError(f"side must be 'largest' or 'smallest', got {side!r}")
    g = dec.group_of(i)
    if g[1] - g[0] > 1:
        raise DegenerateEigenvalue(f"eigenvalue #{r} ({side}) has multiplicity {g[1] - g[0]}")
    v = dec.vectors[:, i] * np.sqrt(n) / np.linalg.norm(dec.vectors[:, i])
    # |V| = sqrt(n), so the threshold tau * |V| / sqrt(n) is just tau
    anchors = np.flatnonzero(np.abs(v) > tau_phase)
    if anchors.size == 0:
        raise NoPhaseAnchor("no coordinate above the phase threshold")
    c = v[anchors[0]]
    return v * (abs(c) / c)


def lowrank_spectrum(sample: CoupledSample, n: int, imag_tol: float = 1e-8) -> np.ndarray:
    """Eigenvalues of the point part ``sum_l x_l xi xi*`` restricted to the span
    of the ``xi_[n]^{(l)}``, from the ``p x p`` matrix ``x_l <xi^{(l)}, xi^{(m)}>``.

    Costs ``O(n p^2 + p^3)``. The caller re-adds the identity shift
    ``gamma1 - sum x_l`` when comparing with a full minor.
    """
    params = sample.params
    if params.gamma2 != 0:
        raise GaussianPartPresent("fast path needs gamma2 == 0")
    if params.p == 0:
        return np.empty(0)
    xi = sample.xi_matrix(n)
    gram = xi.conj().T @ xi
    reduced = np.asarray(params.points)[:, None] * gram
    # similar to gram^(1/2) diag(x) gram^(1/2), so the spectrum is real
    ev = np.linalg.eigvals(reduced)
    if np.max(np.abs(ev.imag)) > imag_tol * max(1.0, float(np.max(np.abs(ev)))):
        raise ConvergenceFailure("reduced matrix produced complex eigenvalues")
    return np.sort(ev.real)
