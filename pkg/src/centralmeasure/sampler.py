"""Coupled realizations of the Gaussian fields behind an ergodic central measure.

A :class:`CoupledSample` fixes one realization of the GUE field ``G_{j,k}`` and
of the complex Gaussian vectors ``xi^{(l)}``; its minors

    m_{j,k} = gamma1 delta_{jk} + sqrt(gamma2) G_{jk} + sum_l x_l (xi_j conj(xi_k) - delta_{jk})

are nested exactly: ``minor(s, n)`` is the top-left block of ``minor(s, n + 1)``.
Field values are produced column by column (GUE) and block by block (xi) from
keyed generators, so they do not depend on query order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange
from .params import ErgodicParams
from .rng import KIND_GUE, KIND_HAAR, KIND_XI, keyed_generator

__all__ = [
    "CoupledSample",
    "HermitianMinor",
    "new_sample",
    "xi_vector",
    "minor",
    "haar_column_entry_samples",
]

XI_BLOCK = 64
_SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class HermitianMinor:
    """Top-left ``n x n`` block of an infinite Hermitian matrix."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def block(self, n: int) -> "HermitianMinor":
        return HermitianMinor(self.entries[:n, :n])


@dataclass(frozen=True, eq=False)
class CoupledSample:
    """One seeded realization of the fields ``G`` and ``xi^{(l)}``.

    Use :func:`new_sample` for a random realization or :meth:`from_fields` to
    inject explicit values (then only the injected index range is defined).
    """

    params: ErgodicParams
    seed: int = 0
    injected_gue: np.ndarray | None = field(default=None, repr=False)
    injected_xi: np.ndarray | None = field(default=None, repr=False)
    _cols: dict = field(default_factory=dict, repr=False, compare=False)
    _blocks: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_fields(cls, params: ErgodicParams, gue=None, xi=None) -> "CoupledSample":
        """Sample with explicit fields.

        ``gue`` is an ``m x m`` Hermitian array, ``xi`` a ``p x m`` array whose
        row ``l - 1`` holds ``xi^{(l)}``.
        """
        g = None
        if gue is not None:
            g = np.array(gue, dtype=complex)
            if not np.array_equal(g, g.conj().T):
                raise ValueError("injected GUE field must be Hermitian")
        x = None
        if xi is not None:
            x = np.atleast_2d(np.array(xi, dtype=complex))
            if x.shape[0] != params.p:
                raise ValueError(f"need {params.p} xi rows, got {x.shape[0]}")
        return cls(params=params, seed=0, injected_gue=g, injected_xi=x)

    # -- GUE field --------------------------------------------------------

    def gue_column(self, k: int) -> np.ndarray:
        """Entries ``G_{1..k, k}`` (1-based ``k``); the last one is real."""
        if k < 1:
            raise IndexOutOfRange(f"column index must be >= 1, got {k}")
        if self.injected_gue is not None:
            if k > self.injected_gue.shape[0]:
                raise IndexOutOfRange(f"injected GUE field has no column {k}")
            return self.injected_gue[:k, k - 1]
        col = self._cols.get(k)
        if col is None:
            z = keyed_generator(self.seed, KIND_GUE, k).standard_normal(2 * k - 1)
            col = np.empty(k, dtype=complex)
            col[:-1] = (z[0:-1:2] + 1j * z[1:-1:2]) * _SQRT_HALF
            col[-1] = z[-1]
            self._cols[k] = col
        return col

    def gue(self, n: int) -> np.ndarray:
        """Hermitian ``n x n`` block of the GUE field."""
        g = np.zeros((n, n), dtype=complex)
        for k in range(1, n + 1):
            g[:k, k - 1] = self.gue_column(k)
        iu = np.triu_indices(n, 1)
        g[iu[1], iu[0]] = g[iu].conj()
        return g

    def gue_entry(self, j: int, k: int) -> complex:
        if j <= k:
            return complex(self.gue_column(k)[j - 1])
        return complex(self.gue_column(j)[k - 1]).conjugate()

    # -- xi fields --------------------------------------------------------

    def _xi_block(self, ell: int, b: int) -> np.ndarray:
        key = (ell, b)
        blk = self._blocks.get(key)
        if blk is None:
            z = keyed_generator(self.seed, KIND_XI, ell, b).standard_normal((XI_BLOCK, 2))
            blk = (z[:, 0] + 1j * z[:, 1]) * _SQRT_HALF
            self._blocks[key] = blk
        return blk

    def xi(self, ell: int, n: int) -> np.ndarray:
        """``(xi_1^{(l)}, ..., xi_n^{(l)})`` for 1-based ``ell``."""
        if not 1 <= ell <= self.params.p:
            raise IndexOutOfRange(f"point index {ell} outside 1..{self.params.p}")
        if self.injected_xi is not None:
            if n > self.injected_xi.shape[1]:
                raise IndexOutOfRange(f"injected xi field has only {self.injected_xi.shape[1]} coordinates")
            return self.injected_xi[ell - 1, :n].copy()
        nb = -(-n // XI_BLOCK)
        return np.concatenate([self._xi_block(ell, b) for b in range(nb)])[:n]

    def xi_matrix(self, n: int, ells=None) -> np.ndarray:
        """``n x q`` matrix whose columns are ``xi_[n]^{(l)}`` for the given
        1-based point indices (all points by default)."""
        ells = range(1, self.params.p + 1) if ells is None else list(ells)
        cols = [self.xi(ell, n) for ell in ells]
        if not cols:
            return np.zeros((n, 0), dtype=complex)
        return np.stack(cols, axis=1)

    # -- minors -----------------------------------------------------------

    def point_part(self, n: int, ells=None) -> np.ndarray:
        """``sum_l x_l xi_[n]^{(l)} xi_[n]^{(l)*}`` over the selected points,
        accumulated in point order so each entry is independent of ``n``."""
        ells = range(1, self.params.p + 1) if ells is None else list(ells)
        re = np.zeros((n, n))
        im = np.zeros((n, n))
        # real ufuncs only: the complex multiply loop may fuse operations
        # differently depending on length, which would break exact nesting
        for ell in ells:
            v = self.xi(ell, n)
            x = self.params.points[ell - 1]
            a, b = v.real, v.imag
            re += x * (np.multiply.outer(a, a) + np.multiply.outer(b, b))
            im += x * (np.multiply.outer(b, a) - np.multiply.outer(a, b))
        return re + 1j * im

    def minor(self, n: int) -> HermitianMinor:
        return minor(self, n)


def new_sample(params: ErgodicParams, seed: int) -> CoupledSample:
    return CoupledSample(params=params, seed=int(seed))


def xi_vector(sample: CoupledSample, ell: int, n: int) -> np.ndarray:
    return sample.xi(ell, n)


def _hermitize_upper(a: np.ndarray) -> np.ndarray:
    """Keep the upper triangle, mirror it, and make the diagonal real."""
    out = np.triu(a)
    out += np.triu(a, 1).conj().T
    out[np.diag_indices_from(out)] = out.diagonal().real
    return out


def assemble(sample: CoupledSample, n: int, ells=None, gamma1: float | None = None,
             gamma2: float | None = None) -> np.ndarray:
    """Matrix ``gamma1 I + sqrt(gamma2) G_n + sum_{l in ells} x_l (xi xi* - I)``."""
    p = sample.params
    gamma1 = p.gamma1 if gamma1 is None else gamma1
    gamma2 = p.gamma2 if gamma2 is None else gamma2
    ells = list(range(1, p.p + 1)) if ells is None else list(ells)
    m = sample.point_part(n, ells)
    if gamma2 > 0:
        g = sample.gue(n)
        m += np.sqrt(gamma2) * g.real + 1j * (np.sqrt(gamma2) * g.imag)
    # compensator summed once, not per point
    m[np.diag_indices(n)] += gamma1 - math.fsum(p.points[ell - 1] for ell in ells)
    return _hermitize_upper(m)


def minor(sample: CoupledSample, n: int) -> HermitianMinor:
    """Top-left ``n x n`` minor ``M_n`` of the sampled infinite matrix."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return HermitianMinor(assemble(sample, n))


def haar_column_entry_samples(n: int, count: int, seed: int) -> np.ndarray:
    """Draws of ``|u_{11}|**2`` for Haar-distributed ``U`` in ``U(n)``.

    Each draw is ``|z_1|**2 / ||z||**2`` for a standard complex Gaussian
    vector ``z`` of length ``n``, which is Beta(1, n - 1).
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    z = keyed_generator(seed, KIND_HAAR, n).standard_normal((count, n, 2))
    sq = (z**2).sum(axis=2)
    return sq[:, 0] / sq.sum(axis=1)
