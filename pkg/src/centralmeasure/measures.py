"""Finite atomic measures on the real line and interval queries against them."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryTooClose

__all__ = ["Interval", "AtomicMeasure", "measure_query", "COUNTING", "PROJECTION"]

COUNTING = "counting"
PROJECTION = "projection"

_INTERVAL_RE = re.compile(r"^\s*([\[\(])\s*([^,]+?)\s*,\s*([^\]\)]+?)\s*([\]\)])\s*$")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise ValueError(f"bad interval endpoints ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse ``"[1.5, 2.5]"``, ``"(-1.5, -0.5)"``, ``"[1.5, inf)"`` etc."""
        m = _INTERVAL_RE.match(text)
        if m is None:
            raise ValueError(f"cannot parse interval {text!r}")
        lb, lo, hi, rb = m.groups()
        return cls(float(lo), float(hi), lb == "[", rb == "]")

    def __str__(self):
        return f"{'[' if self.lo_closed else '('}{self.lo:g}, {self.hi:g}{']' if self.hi_closed else ')'}"

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        left = x >= self.lo if self.lo_closed else x > self.lo
        right = x <= self.hi if self.hi_closed else x < self.hi
        return left & right

    def finite_endpoints(self) -> list[float]:
        return [e for e in (self.lo, self.hi) if math.isfinite(e)]


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Atoms at strictly increasing ``locations`` carrying ``weights``.

    ``kind`` is ``"counting"`` (real nonnegative weights) or ``"projection"``
    (complex weights).
    """

    locations: np.ndarray
    weights: np.ndarray
    kind: str = COUNTING

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float).reshape(-1)
        w = np.asarray(self.weights, dtype=complex).reshape(-1)
        if loc.shape != w.shape:
            raise ValueError("locations and weights differ in length")
        if loc.size > 1 and not np.all(np.diff(loc) > 0):
            raise ValueError("locations must be strictly increasing")
        if self.kind not in (COUNTING, PROJECTION):
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == COUNTING and w.size and (np.any(np.abs(w.imag) > 1e-12) or np.any(w.real < -1e-12)):
            raise ValueError("counting measures need real nonnegative weights")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_atoms(cls, locations, weights, kind=COUNTING, merge_tol=0.0) -> "AtomicMeasure":
        """Sort atoms and merge those whose locations differ by ``<= merge_tol``."""
        loc = np.asarray(locations, dtype=float).reshape(-1)
        w = np.asarray(weights, dtype=complex).reshape(-1)
        order = np.argsort(loc, kind="stable")
        loc, w = loc[order], w[order]
        if loc.size == 0:
            return cls(loc, w, kind)
        new_run = np.concatenate([[True], np.diff(loc) > merge_tol])
        starts = np.flatnonzero(new_run)
        merged_w = np.add.reduceat(w, starts)
        counts = np.diff(np.append(starts, loc.size))
        merged_loc = np.add.reduceat(loc, starts) / counts
        return cls(merged_loc, merged_w, kind)

    @classmethod
    def empty(cls, kind=COUNTING) -> "AtomicMeasure":
        return cls(np.empty(0), np.empty(0, dtype=complex), kind)

    def __len__(self):
        return self.locations.size

    def atoms(self) -> list[tuple[float, complex]]:
        return list(zip(self.locations.tolist(), self.weights.tolist()))

    def total_mass(self) -> complex:
        return complex(self.weights.sum())

    def query(self, interval: Interval, clearance: float = 0.0, exclude_zero: bool = True) -> complex:
        return measure_query(self, interval, clearance, exclude_zero)

    def conj(self) -> "AtomicMeasure":
        return AtomicMeasure(self.locations, self.weights.conj(), self.kind)


def measure_query(m: AtomicMeasure, interval: Interval, clearance: float = 0.0,
                  exclude_zero: bool = True) -> complex:
    """Sum of the weights of the atoms of ``m`` inside ``interval``.

    Raises :class:`BoundaryTooClose` when an atom, or ``0`` if ``exclude_zero``
    is set, lies within ``clearance`` of a finite endpoint. ``clearance = 0``
    disables the atom check but still rejects an endpoint exactly at zero
    when ``exclude_zero`` is set.
    """
    for e in interval.finite_endpoints():
        if exclude_zero and abs(e) <= clearance:
            raise BoundaryTooClose(f"endpoint {e} within {clearance} of zero")
        if clearance > 0 and len(m) and np.min(np.abs(m.locations - e)) <= clearance:
            raise BoundaryTooClose(f"endpoint {e} within {clearance} of an atom")
    if len(m) == 0:
        return 0j
    return complex(m.weights[interval.contains(m.locations)].sum())
