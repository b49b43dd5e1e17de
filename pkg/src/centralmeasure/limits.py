"""Almost-sure limit objects of the scaled spectral measures of the minors."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoSuchPoint, NotUnique
from .measures import COUNTING, PROJECTION, AtomicMeasure
from .params import ErgodicParams
from .sampler import CoupledSample

__all__ = [
    "LimitPack",
    "lambda_limit",
    "sigma_limit",
    "eigvec_limit",
    "norm_bound",
    "ell_of_r",
    "limit_pack",
]


def lambda_limit(params: ErgodicParams) -> AtomicMeasure:
    """``sum_l delta_{x_l}``; repeated points become integer weights."""
    pts = np.asarray(params.points, dtype=float)
    return AtomicMeasure.from_atoms(pts, np.ones(pts.size), COUNTING)


def sigma_limit(sample: CoupledSample, a: int, b: int) -> AtomicMeasure:
    """``sum_l xi_a^{(l)} conj(xi_b^{(l)}) delta_{x_l}`` for the realized field."""
    params = sample.params
    if a < 1 or b < 1:
        raise ValueError(f"indices must be >= 1, got ({a}, {b})")
    if params.p == 0:
        return AtomicMeasure.empty(PROJECTION)
    if a > b:
        return sigma_limit(sample, b, a).conj()
    xi = sample.xi_matrix(b)
    w = np.abs(xi[a - 1, :]) ** 2 + 0j if a == b else xi[a - 1, :] * xi[b - 1, :].conj()
    return AtomicMeasure.from_atoms(params.points, w, PROJECTION)


def norm_bound(params: ErgodicParams) -> float:
    """``(sum x_l^2 + tail_bound)^(1/2)``, the bound on ``limsup ||M_n|| / n``."""
    return math.sqrt(params.sum_squares + params.tail_bound)


def ell_of_r(params: ErgodicParams, r: int, side: str = "largest") -> int:
    """1-based index ``l`` of the unique ``r``-th largest (smallest) point.

    The point must exist, be positive (negative for ``"smallest"``) and not
    be repeated.
    """
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    if side not in ("largest", "smallest"):
        raise ValueError(f"side must be 'largest' or 'smallest', got {side!r}")
    pts = params.points
    order = sorted(range(len(pts)), key=lambda i: pts[i], reverse=(side == "largest"))
    if r > len(order):
        raise NoSuchPoint(f"fewer than {r} points")
    i = order[r - 1]
    y = pts[i]
    if (side == "largest" and y <= 0) or (side == "smallest" and y >= 0):
        raise NoSuchPoint(f"rank-{r} {side} point {y} has the wrong sign")
    if pts.count(y) > 1:
        raise NotUnique(f"point {y} is repeated")
    return i + 1


def eigvec_limit(sample: CoupledSample, r: int, side: str, coords) -> np.ndarray:
    """Limits ``xi_a^{(l(r))} |xi_1^{(l(r))}| / xi_1^{(l(r))}`` of the normalized
    eigenvector coordinates ``a`` in ``coords`` (1-based)."""
    ell = ell_of_r(sample.params, r, side)
    coords = list(coords)
    xi = sample.xi(ell, max(coords + [1]))
    phase = abs(xi[0]) / xi[0]
    return np.array([xi[a - 1] * phase for a in coords])


@dataclass(frozen=True, eq=False)
class LimitPack:
    """Limit objects of one realization; ``sigma`` results are cached per pair."""

    sample: CoupledSample
    lambda_inf: AtomicMeasure
    norm_bound: float
    _sigma: dict = field(default_factory=dict, repr=False)

    def sigma_inf(self, a: int, b: int) -> AtomicMeasure:
        key = (a, b)
        if key not in self._sigma:
            self._sigma[key] = sigma_limit(self.sample, a, b)
        return self._sigma[key]

    def ell_of_r(self, r: int, side: str = "largest") -> int:
        return ell_of_r(self.sample.params, r, side)


def limit_pack(sample: CoupledSample) -> LimitPack:
    return LimitPack(sample, lambda_limit(sample.params), norm_bound(sample.params))
