"""Ergodic parameters ``(gamma1, gamma2, {x_l})`` of a central measure.

An infinite square-summable point set is stored as a finite truncation plus a
declared upper bound ``tail_bound`` on the squared sum of the discarded points.
"""
from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .errors import DivergentTail, NegativeGaussianComponent, NonFinite, ZeroPoint

__all__ = ["ErgodicParams", "validate", "truncate_power_tail", "params_from_config"]


def _canonical_order(points: Sequence[float]) -> tuple[float, ...]:
    # |x| descending, positive before negative on ties; sorted() is stable
    return tuple(sorted(points, key=lambda x: (-abs(x), 0 if x > 0 else 1)))


@dataclass(frozen=True)
class ErgodicParams:
    """Point ``alpha = (gamma1, gamma2, {x_l})`` indexing an ergodic measure.

    Construction always canonicalizes: points are re-sorted by decreasing
    absolute value (positive first on ties) and checked for validity.
    """

    gamma1: float = 0.0
    gamma2: float = 0.0
    points: tuple[float, ...] = ()
    tail_bound: float = 0.0

    def __post_init__(self):
        g1, g2, tb = float(self.gamma1), float(self.gamma2), float(self.tail_bound)
        pts = tuple(float(x) for x in self.points)
        if not all(math.isfinite(v) for v in (g1, g2, tb, *pts)):
            raise NonFinite("parameters must be finite")
        if g2 < 0:
            raise NegativeGaussianComponent(f"gamma2 must be >= 0, got {g2}")
        if tb < 0:
            raise ValueError(f"tail_bound must be >= 0, got {tb}")
        if any(x == 0 for x in pts):
            raise ZeroPoint("points must be non-zero")
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)
        object.__setattr__(self, "tail_bound", tb)
        object.__setattr__(self, "points", _canonical_order(pts))

    @property
    def p(self) -> int:
        """Number of stored points (with multiplicity)."""
        return len(self.points)

    @property
    def sum_points(self) -> float:
        return math.fsum(self.points)

    @property
    def sum_squares(self) -> float:
        return math.fsum(x * x for x in self.points)

    @property
    def shift(self) -> float:
        """Scalar ``gamma1 - sum x_l`` multiplying the identity in every minor."""
        return self.gamma1 - self.sum_points

    def to_dict(self) -> dict:
        return {
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "points": list(self.points),
            "tail_bound": self.tail_bound,
        }


def validate(raw) -> ErgodicParams:
    """Return the canonical :class:`ErgodicParams` for a raw record.

    ``raw`` is either a mapping with keys ``gamma1``, ``gamma2``, ``points`` and
    optionally ``tail_bound``, or an existing :class:`ErgodicParams`.
    """
    if isinstance(raw, ErgodicParams):
        return ErgodicParams(raw.gamma1, raw.gamma2, raw.points, raw.tail_bound)
    if not isinstance(raw, Mapping):
        raise TypeError(f"cannot validate parameters from {type(raw).__name__}")
    return ErgodicParams(
        gamma1=raw.get("gamma1", 0.0),
        gamma2=raw.get("gamma2", 0.0),
        points=tuple(raw.get("points", ())),
        tail_bound=raw.get("tail_bound", 0.0),
    )


def truncate_power_tail(c: float, exponent: float, tol: float, max_points: int = 10**6) -> ErgodicParams:
    """Truncate ``x_l = c / l**exponent`` so the discarded squared sum is ``<= tol``.

    ``L`` is the smallest integer with ``c**2 * L**(1 - 2e) / (2e - 1) <= tol``,
    the integral comparison bound for ``sum_{l > L} x_l**2``. The returned
    params have ``gamma1 = gamma2 = 0``; only ``points`` and ``tail_bound``
    are meaningful. Raises ``ValueError`` if ``L`` would exceed ``max_points``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not 2 * exponent > 1:
        raise DivergentTail(f"sum of c^2/l^(2*{exponent}) diverges")
    if c == 0:
        return ErgodicParams()

    q = 2 * exponent - 1

    def bound(L: int) -> float:
        return c * c * L ** (-q) / q

    L_real = (c * c / (q * tol)) ** (1 / q)
    if L_real > max_points:
        raise ValueError(f"truncation needs about {L_real:.3g} points (max_points={max_points})")
    L = max(1, math.ceil(L_real))
    # guard against rounding on either side of the exact threshold
    while bound(L) > tol:
        L += 1
    while L > 1 and bound(L - 1) <= tol:
        L -= 1
    pts = tuple(c / ell**exponent for ell in range(1, L + 1))
    return ErgodicParams(points=pts, tail_bound=bound(L))


def params_from_config(cfg: Mapping) -> ErgodicParams:
    """Build params from a config record; an optional ``tail: {c, exponent, tol}``
    block is appended after the explicit points and adds its tail bound."""
    base = validate(cfg)
    tail = cfg.get("tail")
    if not tail:
        return base
    frag = truncate_power_tail(float(tail["c"]), float(tail["exponent"]), float(tail["tol"]))
    return ErgodicParams(
        gamma1=base.gamma1,
        gamma2=base.gamma2,
        points=tuple(cfg.get("points", ())) + frag.points,
        tail_bound=base.tail_bound + frag.tail_bound,
    )
