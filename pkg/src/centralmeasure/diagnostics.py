"""Seeded experiments checking the spectral limit laws at desk scale.

Each experiment builds minors from :mod:`centralmeasure.sampler`, decomposes
them, and compares against the limit objects of :mod:`centralmeasure.limits`.
Replicas use seeds ``replica_seed(seed, k)`` and may run on a thread pool;
results are always collected in replica order.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryTooClose, DimensionTooSmall
from .limits import lambda_limit, limit_pack, norm_bound
from .measures import Interval, measure_query
from .params import ErgodicParams
from .rng import KIND_MOMENT, keyed_generator, replica_seed
from .sampler import CoupledSample, assemble, haar_column_entry_samples, minor, new_sample
from .spectral import eig_hermitian, lambda_measure, sigma_measure

__all__ = [
    "DEFAULT_N_GRID",
    "ConvergenceReport",
    "NormRow",
    "SplitReport",
    "BetaTailResult",
    "ParamEstimate",
    "default_clearance",
    "check_intervals",
    "convergence_run",
    "charfn_error",
    "moment_oracle",
    "moment_mc_check",
    "norm_check",
    "split_experiment",
    "ks_statistic",
    "beta_tail_test",
    "estimate_params",
    "map_replicas",
]

DEFAULT_N_GRID = (32, 64, 128, 256, 512)


def map_replicas(fn, items, threads: int = 1) -> list:
    """``[fn(x) for x in items]``, optionally on a thread pool; order is preserved."""
    items = list(items)
    if threads is None or threads <= 0:
        threads = min(32, len(items)) or 1
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- convergence of spectral measures ------------------------------------------

def default_clearance(params: ErgodicParams) -> float:
    """``1e-3`` times the spread of the limit atoms (falls back to ``max |x|``, then 1)."""
    pts = np.asarray(params.points, dtype=float)
    scale = float(pts.max() - pts.min()) if pts.size else 0.0
    if scale == 0.0:
        scale = float(np.max(np.abs(pts))) if pts.size else 1.0
    return 1e-3 * scale


def check_intervals(params: ErgodicParams, intervals, clearance: float) -> None:
    """Reject intervals that straddle zero or whose endpoints come within
    ``clearance`` of zero or of an atom of the limit counting measure."""
    lim = lambda_limit(params)
    for iv in intervals:
        if iv.lo < 0 < iv.hi or (iv.lo == 0 and iv.lo_closed) or (iv.hi == 0 and iv.hi_closed):
            raise BoundaryTooClose(f"interval {iv} is not contained in R+ or R-")
        measure_query(lim, iv, clearance, exclude_zero=True)


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Traces of ``Lambda_n(I)``, ``Sigma_{n,a,b}(I)`` and ``||M_n|| / n``.

    Array axes: replica ``R``, grid point ``N``, interval ``I``, pair ``P``.
    """

    params: ErgodicParams
    n_grid: tuple[int, ...]
    intervals: tuple[Interval, ...]
    pairs: tuple[tuple[int, int], ...]
    seeds: tuple[int, ...]
    lambda_n: np.ndarray      # (R, N, I)
    lambda_inf: np.ndarray    # (I,)
    sigma_n: np.ndarray       # (R, N, I, P) complex
    sigma_inf: np.ndarray     # (R, I, P) complex
    norm_over_n: np.ndarray   # (R, N)
    bound: float

    @property
    def replicas(self) -> int:
        return len(self.seeds)

    @property
    def abs_err_lambda(self) -> np.ndarray:
        return np.abs(self.lambda_n - self.lambda_inf[None, None, :])

    @property
    def abs_err_sigma(self) -> np.ndarray:
        return np.abs(self.sigma_n - self.sigma_inf[:, None, :, :])

    def rows(self):
        """Long-format records matching the ``converge.csv`` columns."""
        el, es = self.abs_err_lambda, self.abs_err_sigma
        for r in range(self.replicas):
            for t, n in enumerate(self.n_grid):
                for i, iv in enumerate(self.intervals):
                    for q, (a, b) in enumerate(self.pairs):
                        s, si = self.sigma_n[r, t, i, q], self.sigma_inf[r, i, q]
                        yield {
                            "replica": r, "n": n, "interval_lo": iv.lo, "interval_hi": iv.hi,
                            "a": a, "b": b,
                            "lambda_n": self.lambda_n[r, t, i], "lambda_inf": self.lambda_inf[i],
                            "sigma_re": s.real, "sigma_im": s.imag,
                            "sigma_inf_re": si.real, "sigma_inf_im": si.imag,
                            "abs_err_lambda": el[r, t, i], "abs_err_sigma": es[r, t, i, q],
                        }


def _one_replica(params, seed, n_grid, intervals, pairs):
    sample = new_sample(params, seed)
    pack = limit_pack(sample)
    full = minor(sample, n_grid[-1]).entries
    nI, nP = len(intervals), len(pairs)
    lam = np.zeros((len(n_grid), nI))
    sig = np.zeros((len(n_grid), nI, nP), dtype=complex)
    nrm = np.zeros(len(n_grid))
    for t, n in enumerate(n_grid):
        dec = eig_hermitian(full[:n, :n])
        lm = lambda_measure(dec)
        sms = [sigma_measure(dec, a, b) for a, b in pairs]
        for i, iv in enumerate(intervals):
            # limit-side clearance was checked up front; finite-n atoms are random
            lam[t, i] = measure_query(lm, iv, 0.0, exclude_zero=False).real
            for q, sm in enumerate(sms):
                sig[t, i, q] = measure_query(sm, iv, 0.0, exclude_zero=False)
        nrm[t] = np.max(np.abs(dec.eigenvalues - params.gamma1)) / n
    sinf = np.array([[measure_query(pack.sigma_inf(a, b), iv, 0.0, exclude_zero=False)
                      for a, b in pairs] for iv in intervals], dtype=complex).reshape(nI, nP)
    return lam, sig, sinf, nrm


def convergence_run(params: ErgodicParams, seed: int, n_grid=DEFAULT_N_GRID, intervals=(),
                    pairs=((1, 1),), clearance: float | None = None, replicas: int = 1,
                    threads: int = 1) -> ConvergenceReport:
    """Evaluate the scaled spectral measures of nested minors on test intervals.

    Replica ``k`` uses seed ``replica_seed(seed, k)``.
    """
    n_grid = tuple(int(n) for n in n_grid)
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be a nonempty increasing sequence")
    intervals = tuple(Interval.parse(iv) if isinstance(iv, str) else iv for iv in intervals)
    pairs = tuple((int(a), int(b)) for a, b in pairs)
    if pairs and max(max(p) for p in pairs) > n_grid[0]:
        raise DimensionTooSmall(f"pair index exceeds smallest dimension {n_grid[0]}")
    if clearance is None:
        clearance = default_clearance(params)
    check_intervals(params, intervals, clearance)

    seeds = tuple(replica_seed(seed, k) for k in range(replicas))
    results = map_replicas(lambda s: _one_replica(params, s, n_grid, intervals, pairs), seeds, threads)
    lim = lambda_limit(params)
    lam_inf = np.array([measure_query(lim, iv, 0.0, exclude_zero=False).real for iv in intervals])
    return ConvergenceReport(
        params=params, n_grid=n_grid, intervals=intervals, pairs=pairs, seeds=seeds,
        lambda_n=np.array([r[0] for r in results]).reshape(replicas, len(n_grid), len(intervals)),
        lambda_inf=lam_inf,
        sigma_n=np.array([r[1] for r in results]).reshape(replicas, len(n_grid), len(intervals), len(pairs)),
        sigma_inf=np.array([r[2] for r in results]).reshape(replicas, len(intervals), len(pairs)),
        norm_over_n=np.array([r[3] for r in results]).reshape(replicas, len(n_grid)),
        bound=norm_bound(params),
    )


def charfn_error(nonzero_eigs_over_n, params: ErgodicParams, mu: float) -> complex:
    """``sum_j exp(i mu lambda_j) - sum_l exp(i mu x_l)`` over the scaled nonzero spectrum."""
    lam = np.asarray(nonzero_eigs_over_n, dtype=float)
    x = np.asarray(params.points, dtype=float)
    return complex(np.exp(1j * mu * lam).sum() - np.exp(1j * mu * x).sum())


# -- norm and moment checks ----------------------------------------------------

def moment_oracle(n: int, r: int) -> int:
    """Exact ``E ||xi_[n]||^(2r) = n (n + 1) ... (n + r - 1)``.

    ``||xi_[n]||^2`` is a sum of ``n`` unit exponentials, i.e. Gamma(n, 1).
    """
    if n < 1 or r < 1:
        raise ValueError("n and r must be >= 1")
    return math.prod(range(n, n + r))


def moment_mc_check(n: int, r: int, replicas: int, seed: int, chunk: int = 20000):
    """Monte Carlo estimate of ``E ||xi_[n]||^(2r)``.

    Returns ``(empirical_mean, oracle, z)`` with ``z`` the deviation in
    standard errors.
    """
    if replicas < 100:
        raise ValueError("need at least 100 replicas")
    vals = []
    for c, start in enumerate(range(0, replicas, chunk)):
        m = min(chunk, replicas - start)
        z = keyed_generator(seed, KIND_MOMENT, n, c).standard_normal((m, n, 2))
        sq = 0.5 * (z**2).sum(axis=(1, 2))
        vals.append(sq**r)
    v = np.concatenate(vals)
    mean = float(v.mean())
    oracle = moment_oracle(n, r)
    se = float(v.std(ddof=1)) / math.sqrt(v.size)
    return mean, oracle, (mean - oracle) / se


@dataclass(frozen=True)
class NormRow:
    n: int
    norm_over_n: float
    bound: float
    passed: bool


def norm_check(sample: CoupledSample, n_grid=DEFAULT_N_GRID, slack: float = 0.25) -> list[NormRow]:
    """``||M_n - gamma1 I|| / n`` against ``norm_bound + slack`` along ``n_grid``."""
    n_grid = tuple(int(n) for n in n_grid)
    bound = norm_bound(sample.params)
    full = minor(sample, n_grid[-1]).entries
    out = []
    for n in n_grid:
        centered = full[:n, :n] - sample.params.gamma1 * np.eye(n)
        v = float(np.max(np.abs(np.linalg.eigvalsh(centered)))) / n
        out.append(NormRow(n, v, bound, v <= bound + slack))
    return out


@dataclass(frozen=True)
class SplitReport:
    epsilon: float
    n: int
    b_norm_over_n: float
    bound: float
    passed: bool


def split_experiment(params: ErgodicParams, epsilon: float, seed: int, n: int = 512,
                     slack: float = 0.2) -> SplitReport:
    """Norm of the small part ``B_n = sqrt(gamma2) G_n + sum_{|x_l| <= eps} x_l (xi xi* - I)``.

    ``bound`` already includes ``slack``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    sample = new_sample(params, seed)
    small = [ell for ell, x in enumerate(params.points, start=1) if abs(x) <= epsilon]
    b = assemble(sample, n, ells=small, gamma1=0.0)
    b_norm = float(np.max(np.abs(np.linalg.eigvalsh(b)))) / n
    sq = math.fsum(params.points[ell - 1] ** 2 for ell in small)
    bound = math.sqrt(sq + params.tail_bound) + slack
    return SplitReport(epsilon, n, b_norm, bound, b_norm <= bound)


# -- Haar column entries -----------------------------------------------------

def ks_statistic(samples, cdf) -> float:
    """One-sample Kolmogorov-Smirnov statistic ``sup |F_emp - F|``."""
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    f = cdf(x)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))


@dataclass(frozen=True)
class BetaTailResult:
    n: int
    draws: int
    ks: float
    threshold: float
    passed: bool


def beta_tail_test(n: int, draws: int = 10_000, seed: int = 0) -> BetaTailResult:
    """KS test of ``|u_{11}|^2`` draws against ``F(t) = 1 - (1 - t)^(n - 1)`` at the 1% level."""
    if draws < 1000:
        raise ValueError("need at least 1000 draws")
    x = haar_column_entry_samples(n, draws, seed)
    ks = ks_statistic(x, lambda t: 1.0 - (1.0 - t) ** (n - 1))
    thr = 1.63 / math.sqrt(draws)
    return BetaTailResult(n, draws, ks, thr, ks <= thr)


# -- inverse problem ---------------------------------------------------------

@dataclass(frozen=True)
class ParamEstimate:
    gamma1: float
    gamma2: float
    points: tuple[float, ...] = field(default=())


def estimate_params(sample: CoupledSample, n: int, threshold: float = 0.5) -> ParamEstimate:
    """Recover ``(gamma1, gamma2, {x_l})`` from one minor.

    ``gamma1`` is the normalized trace, the points are the scaled centered
    eigenvalues with modulus at least ``threshold``, and ``gamma2`` is the
    leftover normalized Frobenius mass.
    """
    if n < 4:
        raise DimensionTooSmall(f"need n >= 4, got {n}")
    m = minor(sample, n).entries
    g1 = float(np.trace(m).real) / n
    centered = m - g1 * np.eye(n)
    ev = np.linalg.eigvalsh(centered) / n
    pts = ev[np.abs(ev) >= threshold]
    frob = float(np.sum(np.abs(centered) ** 2)) / n**2
    g2 = max(0.0, frob - float(np.sum(pts**2)))
    order = sorted(pts.tolist(), key=lambda x: (-abs(x), 0 if x > 0 else 1))
    return ParamEstimate(g1, g2, tuple(order))
