"""Achievable sum rates of the symmetric Gaussian IC with rate-limited feedback.

The scheme splits each transmit power into layers: private, cooperative
common (lattice coded, so that a receiver can decode the sum of its own and
the interferer's codewords and feed the index back), relay (re-sends the
other user's cooperative message two blocks later) and non-cooperative
common. Which layers are used depends on the interference regime.

``rate_terms`` evaluates the closed-form per-layer rates for a given power
split. ``optimize_powers`` searches the split numerically against the full
set of decoding constraints, which is stricter than the closed-form sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .gaussian_bounds import symmetric_sumrate_outer

__all__ = [
    "PowerSplit",
    "RegimeCase",
    "REGIME_GAP_BOUNDS",
    "classify_regime",
    "applicable_regimes",
    "appendixD_powers",
    "rate_terms",
    "rsum_case",
    "rsum_nonfeedback",
    "constrained_terms",
    "optimize_powers",
    "regime_gap_bound",
    "achievable_sumrate_extreme",
    "achievable_sumrate",
    "achievable_by_regime",
    "gap",
]

log2 = math.log2
POWER_TOL = 1e-12
BOUNDARY_TOL = 1e-9


class RegimeCase(str, Enum):
    INR_BELOW_ONE = "inr_below_one"
    A = "a"
    B = "b"
    D = "d"
    E = "e"
    C = "c"

    def __str__(self):
        return self.value


FEEDBACK_CASES = (RegimeCase.A, RegimeCase.B, RegimeCase.C)
NONFEEDBACK_CASES = (RegimeCase.INR_BELOW_ONE, RegimeCase.D, RegimeCase.E)

#: Worst-case gap to the symmetric outer bound certified for each regime with
#: the fixed power assignment. Case c has two values, for SNR <= 1 and SNR > 1.
REGIME_GAP_BOUNDS = {
    RegimeCase.INR_BELOW_ONE: 2.6,
    RegimeCase.A: 9.6,
    RegimeCase.B: 14.8,
    RegimeCase.C: (2.6, 7.0),
    RegimeCase.D: 3.0,
    RegimeCase.E: 4.0,
}


def regime_gap_bound(case, snr) -> float:
    case = RegimeCase(case)
    bound = REGIME_GAP_BOUNDS[case]
    if isinstance(bound, tuple):
        return bound[0] if snr <= 1 else bound[1]
    return bound


@dataclass(frozen=True)
class PowerSplit:
    """Layer powers, normalised so each transmitter's total is at most 1."""

    p1: tuple = (0.0, 0.0, 0.0, 0.0)
    p2: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        p1 = tuple(float(v) for v in self.p1)
        p2 = tuple(float(v) for v in self.p2)
        if len(p1) != 4 or len(p2) != 3:
            raise ValueError("need four powers for TX1 and three for TX2")
        if min(p1 + p2) < 0:
            raise ValueError("powers must be nonnegative")
        if sum(p1) > 1 + POWER_TOL or sum(p2) > 1 + POWER_TOL:
            raise ValueError("power constraint violated")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    @classmethod
    def from_vector(cls, v) -> "PowerSplit":
        return cls(tuple(v[:4]), tuple(v[4:]))

    def as_vector(self) -> list:
        return list(self.p1) + list(self.p2)


# ---------------------------------------------------------------------------
# regimes


def applicable_regimes(snr, inr, tol=BOUNDARY_TOL) -> list:
    """Every regime whose closed inequalities hold (within ``tol`` in log2)."""
    if snr <= 0 or inr < 0:
        raise ValueError("snr must be positive and inr nonnegative")
    if inr < 1:
        return [RegimeCase.INR_BELOW_ONE]
    ls, li = log2(snr), log2(inr)
    out = []
    if li <= ls / 2 + tol:
        out.append(RegimeCase.A)
    if ls / 2 - tol <= li <= 2 * ls / 3 + tol:
        out.append(RegimeCase.B)
    if 2 * ls / 3 - tol <= li <= ls + tol:
        out.append(RegimeCase.D)
    if ls - tol <= li <= 2 * ls + tol:
        out.append(RegimeCase.E)
    if li >= 2 * ls - tol:
        out.append(RegimeCase.C)
    return out


def classify_regime(snr, inr) -> RegimeCase:
    """The first matching regime; boundary points match more than one."""
    return applicable_regimes(snr, inr, tol=0.0)[0]


# ---------------------------------------------------------------------------
# fixed power assignment


def _within_budget(p):
    # inside the regime the split fits; points admitted by the boundary
    # tolerance can overshoot by rounding, so scale back onto the budget
    total = sum(p)
    return [v / total for v in p] if total > 1 else p


def appendixD_powers(snr, inr, cfb, case) -> PowerSplit:
    """Closed-form power split for the feedback regimes a, b and c."""
    case = RegimeCase(case)
    S, I = snr, inr
    if case not in FEEDBACK_CASES:
        raise ValueError(f"regime {case} has no feedback power split")
    if I < 1:
        raise ValueError("the feedback power splits assume inr >= 1")
    g = 2.0 ** cfb
    if case is RegimeCase.A:
        M = min(g, I - 1)
        return PowerSplit((max(1 / I - M / S, 0.0), M / S, M / I, 0.0),
                          (1 / I, M / (2 * I), 0.0))
    if case is RegimeCase.B:
        M = max(0.0, min(g, S * S / I ** 3 - 1))
        p1 = _within_budget([max(1 / I - M / S, 0.0), M / S, M / I])
        p1.append(max(0.0, 1 - sum(p1)))
        p2 = _within_budget([1 / I, M / (2 * I)])
        p2.append(max(0.0, 1 - sum(p2)))
        return PowerSplit(tuple(p1), tuple(p2))
    if S <= 1:
        x = min(g, I) / I
        return PowerSplit((0.0, 0.0, x, 0.0), (0.0, x, 0.0))
    M = min(g, I / S ** 2)
    relay = S / I * M
    return PowerSplit((0.0, 0.0, relay, 1 - relay), (0.0, M / I, 1 - M / I))


# ---------------------------------------------------------------------------
# rate formulas


def _lg(x):
    return log2(1 + x)


def _lpos(x):
    """``[log2 x]^+``, zero for nonpositive arguments."""
    return log2(x) if x > 1 else 0.0


def rate_terms(snr, inr, cfb, ps: PowerSplit, case) -> dict:
    """Per-layer rates of the closed-form sum for ``case``.

    Keys name the layer (``r11`` is user 1 layer 1, and so on). Lattice
    coded layers are capped at ``cfb``.
    """
    case = RegimeCase(case)
    S, I = snr, inr
    a, b = ps.p1, ps.p2
    P1, P2 = sum(a), sum(b)
    if case is RegimeCase.A:
        return {
            "r11": _lg(S * a[0] / (1 + I * P2 + S * a[1])),
            "r12": min(_lpos(S * a[1] / (1 + I * b[0])), cfb),
            "r21": _lg(S * b[0] / (1 + I * (a[0] + a[1]))),
            "r22": min(_lpos(I * b[1] / (1 + I * b[0])), cfb),
        }
    if case is RegimeCase.B:
        return {
            "r11": _lg(S * a[0] / (1 + I * b[0])),
            "r12": min(_lpos(S * a[1] / (1 + I * b[0] + S * a[0])), cfb),
            "r14": _lg(I * a[3] / (1 + I * (a[0] + a[1]) + S * b[0])),
            "r21": _lg(S * b[0] / (1 + I * (a[0] + a[1]))),
            "r22": min(_lpos(I * b[1] / (1 + I * b[0] + S * a[0])), cfb),
            "r23": _lg(I * b[2] / (1 + I * (b[0] + b[1]) + S * (a[0] + a[1]))),
        }
    if case is RegimeCase.C:
        return {
            "r14": _lg(S * a[3] / (1 + S * a[2])),
            "r22": min(_lpos(I * b[1] / (1 + S * P1)), cfb),
            "r23": _lg(S * b[2] / (1 + S * b[1])),
        }
    raise ValueError(f"regime {case} has no feedback rate formula")


LATTICE_TERMS = ("r12", "r22")


def rsum_case(snr, inr, cfb, ps: PowerSplit, case) -> float:
    """Closed-form achievable sum rate for a feedback regime."""
    return sum(rate_terms(snr, inr, cfb, ps, case).values())


def rsum_nonfeedback(snr, inr, case) -> float:
    """Sum rate of the no-feedback scheme in regimes d, e and inr < 1."""
    case = RegimeCase(case)
    S, I = snr, inr
    if case is RegimeCase.D:
        return _lg(S) + _lg(S / (1 + I)) - 1
    if case is RegimeCase.E:
        return _lg(S + I) - 1
    if case is RegimeCase.INR_BELOW_ONE:
        return 2 * _lg(S / (1 + I))
    raise ValueError(f"regime {case} uses the feedback formulas")


def constrained_terms(snr, inr, cfb, ps: PowerSplit, case) -> dict:
    """Per-layer rates honouring every decoding constraint of the scheme.

    The closed-form sum keeps one constraint per layer. Here a layer decoded
    at both receivers takes the smaller rate, and each cooperative rate is
    also limited by the relay layer that must carry it.
    """
    case = RegimeCase(case)
    S, I = snr, inr
    a, b = ps.p1, ps.p2
    P1, P2 = sum(a), sum(b)
    if case is RegimeCase.A:
        r13 = _lg(S * a[2] / (1 + I * P2 + S * (a[0] + a[1])))
        return {
            "r11": _lg(S * a[0] / (1 + I * P2 + S * a[1])),
            "r12": min(_lpos(S * a[1] / (1 + I * b[0])), cfb),
            "r21": _lg(S * b[0] / (1 + I * (a[0] + a[1]))),
            "r22": min(_lpos(I * b[1] / (1 + I * b[0])), cfb,
                       _lpos(S * b[1] / (1 + S * b[0] + I * (a[0] + a[1]))), r13),
        }
    if case is RegimeCase.B:
        r13 = _lg(S * a[2] / (1 + I * P2 + S * (a[0] + a[1])))
        return {
            "r11": _lg(S * a[0] / (1 + I * b[0])),
            "r12": min(_lpos(S * a[1] / (1 + I * b[0] + S * a[0])), cfb),
            "r14": min(_lg(S * a[3] / (1 + I * P2 + S * (a[0] + a[1] + a[2]))),
                       _lg(I * a[3] / (1 + I * (a[0] + a[1]) + S * b[0]))),
            "r21": _lg(S * b[0] / (1 + I * (a[0] + a[1]))),
            "r22": min(_lpos(I * b[1] / (1 + I * b[0] + S * a[0])), cfb,
                       _lpos(S * b[1] / (1 + S * b[0] + I * (P1 - a[2]))), r13),
            "r23": min(_lg(I * b[2] / (1 + I * (b[0] + b[1]) + S * (a[0] + a[1]))),
                       _lg(S * b[2] / (1 + S * (b[0] + b[1]) + I * (P1 - a[2])))),
        }
    if case is RegimeCase.C:
        r13 = _lg(I * a[2] / (1 + S * P2))
        return {
            "r14": _lg(S * a[3] / (1 + S * a[2])),
            "r22": min(_lpos(I * b[1] / (1 + S * P1)), cfb, r13),
            "r23": _lg(S * b[2] / (1 + S * b[1])),
        }
    raise ValueError(f"regime {case} has no feedback rate formula")


# ---------------------------------------------------------------------------
# power optimisation

# coordinates of [P1(1..4), P2(1..3)] searched per regime; the relay power
# P1(3) is always derived from the cooperative rate it has to carry
_FREE = {RegimeCase.A: (0, 1, 4, 5), RegimeCase.B: (0, 1, 3, 4, 5, 6),
         RegimeCase.C: (3, 5, 6)}


def _coop_rate_before_relay(S, I, C, v, case):
    a, b = v[:4], v[4:]
    if case is RegimeCase.A:
        return min(_lpos(I * b[1] / (1 + I * b[0])), C,
                   _lpos(S * b[1] / (1 + S * b[0] + I * (a[0] + a[1]))))
    if case is RegimeCase.B:
        return min(_lpos(I * b[1] / (1 + I * b[0] + S * a[0])), C,
                   _lpos(S * b[1] / (1 + S * b[0] + I * (sum(a) - a[2]))))
    return min(_lpos(I * b[1] / (1 + S * sum(a))), C)


def _relay_power(S, I, case, r, v):
    a, b = v[:4], v[4:]
    if case is RegimeCase.C:
        return (2 ** r - 1) * (1 + S * sum(b)) / I
    return (2 ** r - 1) * (1 + I * sum(b) + S * (a[0] + a[1])) / S


def _settle(S, I, C, v, case):
    """Make ``v`` feasible: size the relay and let remainders absorb excess."""
    v = list(v)
    excess = sum(v[4:]) - 1
    if excess > 0:
        if case is RegimeCase.A:
            return None
        v[6] = max(0.0, v[6] - excess)
    for _ in range(3):
        v[2] = _relay_power(S, I, case, _coop_rate_before_relay(S, I, C, v, case), v)
        excess = sum(v[:4]) - 1
        if excess > 0:
            if case is not RegimeCase.A:
                v[3] = max(0.0, v[3] - excess)
            excess = sum(v[:4]) - 1
            if excess > 0:
                v[2] = max(0.0, v[2] - excess)
    if sum(v[:4]) > 1 + POWER_TOL or sum(v[4:]) > 1 + POWER_TOL:
        return None
    return v


def _power_grid(S, I, steps):
    lo = -math.log10(max(S, I, 2.0)) - 2
    if steps == 1:
        return [0.0, 1.0]
    return [0.0] + [10 ** (lo + (0 - lo) * i / (steps - 1)) for i in range(steps)]


def optimize_powers(snr, inr, cfb, case, grid_steps=32, sweeps=3):
    """Coordinate search over layer powers, seeded at the fixed assignment.

    Returns ``(sum_rate, PowerSplit)`` where the rate is measured with
    :func:`constrained_terms`.
    """
    case = RegimeCase(case)
    S, I, C = snr, inr, cfb

    def value(v):
        return sum(constrained_terms(S, I, C, PowerSplit.from_vector(v), case).values())

    x = appendixD_powers(S, I, C, case).as_vector()
    best = value(x)
    s = _settle(S, I, C, x, case)
    if s is not None:
        vs = value(s)
        if vs > best:
            best, x = vs, s
    grid = _power_grid(S, I, grid_steps)
    for _ in range(sweeps):
        for i in _FREE[case]:
            for g in grid:
                y = list(x)
                y[i] = g
                y = _settle(S, I, C, y, case)
                if y is None:
                    continue
                vy = value(y)
                if vy > best:
                    best, x = vy, y
    return best, PowerSplit.from_vector(x)


# ---------------------------------------------------------------------------
# achievable sum rate and gap


def achievable_by_regime(snr, inr, cfb, optimize=False, grid_steps=32) -> dict:
    """``{regime: sum rate}`` for every regime the point belongs to."""
    if snr == 0:
        return {RegimeCase.INR_BELOW_ONE: 0.0}
    out = {}
    for case in applicable_regimes(snr, inr):
        if case in NONFEEDBACK_CASES:
            out[case] = rsum_nonfeedback(snr, inr, case)
            continue
        v = rsum_case(snr, inr, cfb, appendixD_powers(snr, inr, cfb, case), case)
        if optimize:
            v = max(v, optimize_powers(snr, inr, cfb, case, grid_steps)[0])
        out[case] = v
    return out


def achievable_sumrate_extreme(snr, inr, cfb, optimize=False, grid_steps=32) -> float:
    """Sum rate with all feedback on one link; boundary points take the best regime."""
    if snr < 0 or inr < 0 or cfb < 0:
        raise ValueError("snr, inr and cfb must be nonnegative")
    return max(achievable_by_regime(snr, inr, cfb, optimize, grid_steps).values())


def achievable_sumrate(snr, inr, cfb1, cfb2, optimize=False, grid_steps=32) -> float:
    """Time share between the two one-sided feedback schemes.

    The fraction of time spent with feedback on link 1 is ``cfb1 / (cfb1 +
    cfb2)``; for a symmetric channel both one-sided schemes give the same
    rate, so the result depends only on the total.
    """
    total = cfb1 + cfb2
    lam = cfb1 / total if total > 0 else 0.0
    one = achievable_sumrate_extreme(snr, inr, total, optimize, grid_steps)
    # the mirror-image scheme (feedback only on link 2) has the same rate
    other = one
    return lam * one + (1 - lam) * other


def gap(snr, inr, cfb1, cfb2, optimize=False, grid_steps=32) -> float:
    """Signed distance from the achievable sum rate to the outer bound."""
    return (symmetric_sumrate_outer(snr, inr, cfb1, cfb2)
            - achievable_sumrate(snr, inr, cfb1, cfb2, optimize, grid_steps))
