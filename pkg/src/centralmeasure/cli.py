"""Config-driven experiment runner.

Usage::

    python -m centralmeasure <subcommand> [--config cfg.json] [--seed S] [--out DIR]
                             [--threads K] [--verbosity V]

Subcommands: ``sample converge norm split moments beta estimate cayley all``.
Exit status: 0 all checks pass, 1 invalid configuration, 2 numerical failure,
3 an acceptance check failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import platform
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .cayley import cayley, correspondence_residual, inverse_cayley
from .diagnostics import (
    DEFAULT_N_GRID,
    beta_tail_test,
    check_intervals,
    convergence_run,
    default_clearance,
    estimate_params,
    map_replicas,
    moment_mc_check,
    norm_check,
    split_experiment,
)
from .errors import CentralMeasureError, ConfigInvalid, NumericalFailure
from .io import (
    CONVERGE_COLUMNS,
    MOMENT_COLUMNS,
    NORM_COLUMNS,
    PLOT_COLUMNS,
    write_csv,
    write_matrix,
)
from .measures import Interval
from .params import ErgodicParams, params_from_config
from .rng import replica_seed
from .sampler import minor, new_sample
from .spectral import eig_hermitian

log = logging.getLogger("centralmeasure")

EXPERIMENTS = ("converge", "norm", "split", "moments", "beta", "estimate", "cayley")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_FAILED = 0, 1, 2, 3


@dataclass
class RunConfig:
    params: ErgodicParams
    seed: int = 0
    n_grid: tuple[int, ...] = DEFAULT_N_GRID
    intervals: tuple[Interval, ...] = ()
    clearances: tuple[float, ...] = ()
    pairs: tuple[tuple[int, int], ...] = ((1, 1),)
    replicas: int = 10
    experiments: tuple[str, ...] = EXPERIMENTS
    out: Path = Path("out")
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            pdict = d.get("params", d)
            params = params_from_config(pdict)
            intervals, clearances = [], []
            for item in d.get("intervals", ()):
                if isinstance(item, str):
                    intervals.append(Interval.parse(item))
                    clearances.append(None)
                else:
                    intervals.append(Interval(item["lo"], item["hi"], item.get("lo_closed", True),
                                              item.get("hi_closed", True)))
                    clearances.append(item.get("clearance"))
            default_c = default_clearance(params)
            clearances = tuple(default_c if c is None else float(c) for c in clearances)
            experiments = tuple(d.get("experiments", EXPERIMENTS))
            cfg = cls(
                params=params,
                seed=int(d.get("seed", 0)),
                n_grid=tuple(int(n) for n in d.get("n_grid", DEFAULT_N_GRID)),
                intervals=tuple(intervals),
                clearances=clearances,
                pairs=tuple((int(a), int(b)) for a, b in d.get("pairs", [(1, 1)])),
                replicas=int(d.get("replicas", 10)),
                experiments=experiments,
                out=Path(d.get("out", "out")),
                options={k: d[k] for k in EXPERIMENTS + ("sample",) if k in d},
            )
        except CentralMeasureError as exc:
            raise ConfigInvalid(str(exc)) from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigInvalid(f"malformed config: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not self.experiments:
            raise ConfigInvalid("no experiment selected")
        unknown = set(self.experiments) - set(EXPERIMENTS)
        if unknown:
            raise ConfigInvalid(f"unknown experiments {sorted(unknown)}")
        if self.replicas < 1:
            raise ConfigInvalid("replicas must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed must be an unsigned 64-bit integer")
        try:
            for iv, c in zip(self.intervals, self.clearances):
                check_intervals(self.params, [iv], c)
        except CentralMeasureError as exc:
            raise ConfigInvalid(str(exc)) from exc

    def opt(self, experiment: str, key: str, default):
        return self.options.get(experiment, {}).get(key, default)


# -- experiments: each returns (files, passed, details) ------------------------

def _converge(cfg: RunConfig, threads: int):
    if not cfg.intervals:
        raise ConfigInvalid("converge needs at least one interval")
    rep = convergence_run(cfg.params, cfg.seed, cfg.n_grid, cfg.intervals, cfg.pairs,
                          clearance=min(cfg.clearances), replicas=cfg.replicas, threads=threads)
    f1 = write_csv(cfg.out / "converge.csv", CONVERGE_COLUMNS, rep.rows())
    f2 = emit_plotdata(rep, cfg.out / "converge_plot.csv")
    exact = np.all(rep.abs_err_lambda[:, -2:, :] == 0, axis=1)          # (R, I)
    frac = exact.mean(axis=0)
    med = np.median(rep.abs_err_sigma[:, -1], axis=0)                   # (I, P)
    need = float(cfg.opt("converge", "min_exact_fraction", 0.95))
    tol = float(cfg.opt("converge", "max_median_sigma_err", 0.2))
    passed = bool(np.all(frac >= need) and np.all(med <= tol))
    return [f1, f2], passed, {"exact_fraction": frac.tolist(), "median_sigma_err_last": med.tolist()}


def emit_plotdata(report, path) -> Path:
    """Long-format ``(series, ..., n, error)`` rows for external plotting."""
    if report.replicas == 0 or not report.intervals:
        raise ValueError("empty report")
    el, es = report.abs_err_lambda, report.abs_err_sigma

    def rows():
        for r in range(report.replicas):
            for i, iv in enumerate(report.intervals):
                for t, n in enumerate(report.n_grid):
                    yield {"series": "lambda", "replica": r, "interval_lo": iv.lo, "interval_hi": iv.hi,
                           "a": "", "b": "", "n": n, "error": el[r, t, i]}
            for i, iv in enumerate(report.intervals):
                for q, (a, b) in enumerate(report.pairs):
                    for t, n in enumerate(report.n_grid):
                        yield {"series": "sigma", "replica": r, "interval_lo": iv.lo, "interval_hi": iv.hi,
                               "a": a, "b": b, "n": n, "error": es[r, t, i, q]}

    return write_csv(path, PLOT_COLUMNS, rows())


def _norm(cfg: RunConfig, threads: int):
    slack = float(cfg.opt("norm", "slack", 0.25))
    seeds = [replica_seed(cfg.seed, k) for k in range(cfg.replicas)]
    res = map_replicas(lambda s: norm_check(new_sample(cfg.params, s), cfg.n_grid, slack), seeds, threads)
    rows = [{"replica": k, "n": row.n, "norm_over_n": row.norm_over_n, "bound": row.bound, "pass": row.passed}
            for k, series in enumerate(res) for row in series]
    f = write_csv(cfg.out / "norm.csv", NORM_COLUMNS, rows)
    # the bound is asymptotic: judge the largest dimension only
    passed = all(series[-1].passed for series in res)
    return [f], passed, {"slack": slack}


def _split(cfg: RunConfig, threads: int):
    eps = float(cfg.opt("split", "epsilon", 0.1))
    n = int(cfg.opt("split", "n", cfg.n_grid[-1]))
    slack = float(cfg.opt("split", "slack", 0.2))
    seeds = [replica_seed(cfg.seed, k) for k in range(cfg.replicas)]
    res = map_replicas(lambda s: split_experiment(cfg.params, eps, s, n, slack), seeds, threads)
    rows = [{"replica": k, "n": r.n, "epsilon": r.epsilon, "b_norm_over_n": r.b_norm_over_n,
             "bound": r.bound, "pass": r.passed} for k, r in enumerate(res)]
    f = write_csv(cfg.out / "split.csv", ("replica", "n", "epsilon", "b_norm_over_n", "bound", "pass"), rows)
    return [f], all(r.passed for r in res), {"epsilon": eps, "slack": slack}


def _moments(cfg: RunConfig, threads: int):
    ns = cfg.opt("moments", "n", [10, 100])
    rs = cfg.opt("moments", "r", [2, 3])
    reps = int(cfg.opt("moments", "replicas", 100_000))
    zmax = float(cfg.opt("moments", "z_max", 4.0))
    jobs = [(int(n), int(r)) for n in ns for r in rs]
    res = map_replicas(lambda nr: moment_mc_check(nr[0], nr[1], reps, cfg.seed), jobs, threads)
    rows = [{"n": n, "r": r, "empirical": emp, "oracle": orc, "z": z} for (n, r), (emp, orc, z) in zip(jobs, res)]
    f = write_csv(cfg.out / "moments.csv", MOMENT_COLUMNS, rows)
    return [f], all(abs(z) <= zmax for _, _, z in res), {"z_max": zmax}


def _beta(cfg: RunConfig, threads: int):
    ns = [int(n) for n in cfg.opt("beta", "n", [2, 8, 32])]
    draws = int(cfg.opt("beta", "draws", 10_000))
    res = map_replicas(lambda n: beta_tail_test(n, draws, cfg.seed), ns, threads)
    rows = [{"n": r.n, "draws": r.draws, "ks": r.ks, "threshold": r.threshold, "pass": r.passed} for r in res]
    f = write_csv(cfg.out / "beta.csv", ("n", "draws", "ks", "threshold", "pass"), rows)
    return [f], all(r.passed for r in res), {}


def _estimate(cfg: RunConfig, threads: int):
    n = int(cfg.opt("estimate", "n", cfg.n_grid[-1]))
    thr = float(cfg.opt("estimate", "threshold", 0.5))
    seeds = [replica_seed(cfg.seed, k) for k in range(cfg.replicas)]
    res = map_replicas(lambda s: estimate_params(new_sample(cfg.params, s), n, thr), seeds, threads)
    rows = []
    for k, est in enumerate(res):
        rows.append({"replica": k, "n": n, "kind": "gamma1", "index": 0, "value": est.gamma1})
        rows.append({"replica": k, "n": n, "kind": "gamma2", "index": 0, "value": est.gamma2})
        rows.extend({"replica": k, "n": n, "kind": "point", "index": i, "value": x}
                    for i, x in enumerate(est.points, start=1))
    f = write_csv(cfg.out / "estimate.csv", ("replica", "n", "kind", "index", "value"), rows)
    expected = sum(abs(x) >= thr for x in cfg.params.points)
    passed = all(len(est.points) == expected for est in res)
    return [f], passed, {"threshold": thr, "expected_point_count": expected}


def _cayley_one(params, seed, n):
    m = minor(new_sample(params, seed), n).entries
    u = cayley(m)
    dec = eig_hermitian(m)
    back = inverse_cayley(u).entries
    return (u.unitarity_defect(), correspondence_residual(m, dec, u, relative=False),
            float(np.linalg.norm(m - back)) / max(1.0, float(np.linalg.norm(m))))


def _cayley(cfg: RunConfig, threads: int):
    n = int(cfg.opt("cayley", "n", 64))
    seeds = [replica_seed(cfg.seed, k) for k in range(cfg.replicas)]
    res = map_replicas(lambda s: _cayley_one(cfg.params, s, n), seeds, threads)
    rows = [{"replica": k, "n": n, "unitarity": a, "eigvec_residual": b, "roundtrip_rel": c}
            for k, (a, b, c) in enumerate(res)]
    f = write_csv(cfg.out / "cayley.csv", ("replica", "n", "unitarity", "eigvec_residual", "roundtrip_rel"), rows)
    passed = all(a <= 1e-10 * n and b <= 1e-8 and c <= 1e-8 for a, b, c in res)
    return [f], passed, {}


_RUNNERS = {
    "converge": _converge, "norm": _norm, "split": _split, "moments": _moments,
    "beta": _beta, "estimate": _estimate, "cayley": _cayley,
}


def run(cfg: RunConfig, threads: int = 1) -> dict:
    """Run the selected experiments, write their CSVs and ``summary.json``."""
    cfg.validate()
    cfg.out.mkdir(parents=True, exist_ok=True)
    results = {}
    for name in EXPERIMENTS:
        if name not in cfg.experiments:
            continue
        log.info("running %s", name)
        files, passed, details = _RUNNERS[name](cfg, threads)
        results[name] = {"passed": passed, "files": [p.name for p in files], **details}
    summary = {
        "all_passed": all(r["passed"] for r in results.values()),
        "experiments": results,
        "params": cfg.params.to_dict(),
        "seed": cfg.seed,
        "replicas": cfg.replicas,
        "versions": {"centralmeasure": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }
    (cfg.out / "summary.json").write_text(json.dumps(summary, indent=2, default=str) + "\n")
    return summary


def emit_sample(cfg: RunConfig) -> Path:
    n = int(cfg.opt("sample", "n", cfg.n_grid[0]))
    cfg.out.mkdir(parents=True, exist_ok=True)
    return write_matrix(cfg.out / "minor.txt", minor(new_sample(cfg.params, cfg.seed), n))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="centralmeasure", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=("sample",) + EXPERIMENTS + ("all",))
    ap.add_argument("--config", type=Path, help="JSON config file")
    ap.add_argument("--seed", type=int, help="unsigned 64-bit seed (overrides config)")
    ap.add_argument("--out", type=Path, help="output directory (overrides config)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
    ap.add_argument("--verbosity", type=int, default=1, choices=range(4))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG, 3: logging.DEBUG}[args.verbosity]
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        raw = json.loads(args.config.read_text()) if args.config else {}
        if args.seed is not None:
            raw["seed"] = args.seed
        if args.out is not None:
            raw["out"] = str(args.out)
        if args.command not in ("all", "sample"):
            raw["experiments"] = [args.command]
        cfg = RunConfig.from_dict(raw)
        if args.command == "sample":
            print(emit_sample(cfg))
            return EXIT_OK
        summary = run(cfg, args.threads)
    except (ConfigInvalid, OSError, json.JSONDecodeError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except CentralMeasureError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    for name, res in summary["experiments"].items():
        log.info("%-9s %s", name, "PASS" if res["passed"] else "FAIL")
    return EXIT_OK if summary["all_passed"] else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
