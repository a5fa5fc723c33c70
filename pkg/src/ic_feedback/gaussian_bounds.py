"""Outer bounds for the two-user Gaussian IC with rate-limited feedback.

All quantities are in bits (base-2 logs) and all gains are linear-scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .region_core import RateConstraint, RateRegion, max_weighted

__all__ = [
    "GaussianParams",
    "RhoQuery",
    "outer_region_at_rho",
    "region_sumrate_at_rho",
    "sumrate_outer",
    "symmetric_sumrate_outer",
    "symmetric_outer_terms",
]

log2 = math.log2


@dataclass(frozen=True)
class GaussianParams:
    snr1: float
    snr2: float
    inr12: float
    inr21: float
    cfb1: float = 0.0
    cfb2: float = 0.0

    def __post_init__(self):
        for name in ("snr1", "snr2", "inr12", "inr21", "cfb1", "cfb2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")

    @classmethod
    def symmetric(cls, snr, inr, cfb1=0.0, cfb2=0.0) -> "GaussianParams":
        return cls(snr, snr, inr, inr, cfb1, cfb2)


@dataclass(frozen=True)
class RhoQuery:
    """Magnitude of the input correlation."""

    rho: float

    def __post_init__(self):
        if not 0 <= self.rho <= 1:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")


def _coherent(snr, inr, rho):
    # log(1 + SNR + INR + 2 rho sqrt(SNR INR))
    return log2(1 + snr + inr + 2 * rho * math.sqrt(snr * inr))


def _private(snr, inr_out, u):
    # log(1 + u SNR / (1 + u INR)) with u = 1 - rho^2
    return log2(1 + u * snr / (1 + u * inr_out))


def _mixed(snr, inr_in, inr_out, u):
    return log2(1 + u * inr_in + u * snr / (1 + u * inr_out))


def outer_region_at_rho(p: GaussianParams, q) -> RateRegion:
    """The eleven-inequality outer region for a fixed correlation.

    ``q`` is a :class:`RhoQuery` or a bare float.
    """
    rho = q.rho if isinstance(q, RhoQuery) else RhoQuery(float(q)).rho
    u = 1 - rho * rho
    s1, s2, i12, i21 = p.snr1, p.snr2, p.inr12, p.inr21
    c1, c2 = p.cfb1, p.cfb2

    coh1 = _coherent(s1, i21, rho)          # everything at receiver 1
    coh2 = _coherent(s2, i12, rho)
    priv1 = _private(s1, i12, u)
    priv2 = _private(s2, i21, u)
    mix1 = _mixed(s1, i21, i12, u)
    mix2 = _mixed(s2, i12, i21, u)

    return RateRegion([
        RateConstraint(1, 0, coh1),
        RateConstraint(1, 0, priv1 + log2(1 + u * i12)),
        RateConstraint(1, 0, log2(1 + u * s1) + c2),
        RateConstraint(0, 1, coh2),
        RateConstraint(0, 1, priv2 + log2(1 + u * i21)),
        RateConstraint(0, 1, log2(1 + u * s2) + c1),
        RateConstraint(1, 1, mix1 + mix2 + c1 + c2),
        RateConstraint(1, 1, priv1 + coh2),
        RateConstraint(1, 1, priv2 + coh1),
        RateConstraint(2, 1, coh1 + priv1 + mix2 + c1 + c2),
        RateConstraint(1, 2, coh2 + priv2 + mix1 + c1 + c2),
    ])


def region_sumrate_at_rho(p: GaussianParams, rho: float) -> float:
    return max_weighted(outer_region_at_rho(p, rho), 1, 1)


def sumrate_outer(p: GaussianParams, rho_steps: int = 201, refine: bool = False) -> float:
    """Largest sum rate of the outer region over a uniform ``rho`` grid.

    With ``refine`` a bounded scalar search polishes the best grid cell; the
    result can only grow and stays a valid bound.
    """
    if rho_steps < 2:
        raise ValueError("rho_steps must be at least 2")
    grid = [i / (rho_steps - 1) for i in range(rho_steps)]
    vals = [region_sumrate_at_rho(p, r) for r in grid]
    k = max(range(rho_steps), key=vals.__getitem__)
    best = vals[k]
    if refine:
        from scipy.optimize import minimize_scalar

        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, rho_steps - 1)]
        res = minimize_scalar(lambda r: -region_sumrate_at_rho(p, r),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-10})
        best = max(best, -res.fun)
    return best


def symmetric_outer_terms(snr, inr, cfb1=0.0, cfb2=0.0) -> tuple:
    """The three closed-form symmetric sum-rate bounds, in order."""
    if snr < 0 or inr < 0:
        raise ValueError("snr and inr must be nonnegative")
    return (
        2 * log2(1 + snr) + cfb1 + cfb2,
        log2(1 + snr / (1 + inr)) + log2(1 + snr + inr + 2 * math.sqrt(snr * inr)),
        2 * log2(1 + inr + snr / (1 + inr)) + cfb1 + cfb2,
    )


def symmetric_sumrate_outer(snr, inr, cfb1=0.0, cfb2=0.0) -> float:
    """Closed-form symmetric sum-rate outer bound (min of three forms)."""
    return min(symmetric_outer_terms(snr, inr, cfb1, cfb2))
