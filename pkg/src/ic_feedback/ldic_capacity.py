"""Capacity regions of the linear deterministic IC with rate-limited feedback.

Two independent constructions are provided: the capacity region written
directly in terms of the gains, and the achievable region assembled from
closed-form mutual-information terms of the layered input distribution.
They must coincide; :func:`regions_equal` checks it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from numbers import Rational

from .ldic_model import LdicParams
from .region_core import RateConstraint, RateRegion, max_weighted

__all__ = [
    "InfoTerms",
    "theorem3_region",
    "appendixB_region",
    "info_terms",
    "symmetric_sumrate",
    "symmetric_sumrate_branches",
    "nonfeedback_region",
    "elgamal_costa_region",
    "feedback_free_constraints_region",
    "sum_capacity",
]


def _pos(x):
    return x if x > 0 else 0


def theorem3_region(g: LdicParams) -> RateRegion:
    """The nine-inequality capacity region."""
    n11, n22, n12, n21, c1, c2 = g.as_tuple()
    d1 = _pos(n11 - n12)
    d2 = _pos(n22 - n21)
    return RateRegion([
        RateConstraint(1, 0, min(max(n11, n21), max(n11, n12))),
        RateConstraint(1, 0, n11 + c2),
        RateConstraint(0, 1, min(max(n22, n12), max(n22, n21))),
        RateConstraint(0, 1, n22 + c1),
        RateConstraint(1, 1, d1 + max(n22, n12)),
        RateConstraint(1, 1, d2 + max(n11, n21)),
        RateConstraint(1, 1, max(n21, d1) + max(n12, d2) + c1 + c2),
        RateConstraint(2, 1, d1 + max(n11, n21) + max(n12, d2) + c2),
        RateConstraint(1, 2, d2 + max(n22, n12) + max(n21, d1) + c1),
    ])


def nonfeedback_region(g: LdicParams) -> RateRegion:
    """Capacity region with both feedback links switched off."""
    return theorem3_region(g.replace(cfb1=0, cfb2=0))


def elgamal_costa_region(g: LdicParams) -> RateRegion:
    """Known no-feedback capacity region of the deterministic IC.

    Written out independently of :func:`theorem3_region` so that the
    zero-feedback specialisation can be cross-checked against it.
    """
    n11, n22, n12, n21 = g.n11, g.n22, g.n12, g.n21
    d1 = _pos(n11 - n12)
    d2 = _pos(n22 - n21)
    return RateRegion([
        RateConstraint(1, 0, n11),
        RateConstraint(0, 1, n22),
        RateConstraint(1, 1, max(n22, n12) + d1),
        RateConstraint(1, 1, max(n11, n21) + d2),
        RateConstraint(1, 1, max(n21, d1) + max(n12, d2)),
        RateConstraint(2, 1, max(n11, n21) + d1 + max(n12, d2)),
        RateConstraint(1, 2, max(n22, n12) + d2 + max(n21, d1)),
    ])


def feedback_free_constraints_region(g: LdicParams) -> RateRegion:
    """The capacity region with every feedback-bearing inequality removed.

    This is the region one expects in the limit of unlimited feedback.
    """
    full = theorem3_region(g)
    keep = (0, 2, 4, 5)
    return RateRegion([full.constraints[i] for i in keep])


@dataclass(frozen=True)
class InfoTerms:
    """Closed-form mutual-information values for the layered inputs.

    Names read as ``i_<inputs>_<output or conditioning>``; for example
    ``i_x1_u1v2`` is I(X1; Y1 | U, U1, V2).
    """

    i_uv2x1_y1: object
    i_uv1x2_y2: object
    i_x1_given: object
    i_x2_given: object
    i_u2_y1: object
    i_u1_y2: object
    i_x1_u1v2: object
    i_x2_u2v1: object
    i_x1v2_v1u2: object
    i_x2v1_v2u1: object
    i_x1v2_u1u2: object
    i_x2v1_u1u2: object
    delta1: object = 0
    delta2: object = 0

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _one_side(nkk, nkj, njk, cfb_in, cfb_out):
    """Terms for user k.

    ``nkk`` direct gain, ``nkj`` gain from k into the other receiver, ``njk``
    gain from the other transmitter into receiver k. ``cfb_in`` is the
    feedback capacity of receiver k, ``cfb_out`` that of the other receiver.
    """
    dk = _pos(nkk - nkj)
    u_other = min(njk, cfb_in)                       # I(U_j; Y_k | U, X_k)
    x_u1v2 = dk + min(nkk, _pos(nkj - cfb_out))      # I(X_k; Y_k | U, U_k, V_j)
    x_v_v_u = _pos(njk - cfb_in) + _pos(dk - njk) + min(dk, u_other)
    x_v_u_u = (
        x_u1v2
        + _pos(njk - max(nkk, u_other))
        + _pos(min(njk, _pos(nkk - _pos(nkj - cfb_out))) - max(u_other, dk))
    )
    return dk, u_other, x_u1v2, x_v_v_u, x_v_u_u


def info_terms(g: LdicParams) -> InfoTerms:
    n11, n22, n12, n21, c1, c2 = g.as_tuple()
    d1, u2y1, x1a, x1b, x1c = _one_side(n11, n12, n21, c1, c2)
    d2, u1y2, x2a, x2b, x2c = _one_side(n22, n21, n12, c2, c1)
    return InfoTerms(
        i_uv2x1_y1=max(n11, n21),
        i_uv1x2_y2=max(n22, n12),
        i_x1_given=d1,
        i_x2_given=d2,
        i_u2_y1=u2y1,
        i_u1_y2=u1y2,
        i_x1_u1v2=x1a,
        i_x2_u2v1=x2a,
        i_x1v2_v1u2=x1b,
        i_x2v1_v2u1=x2b,
        i_x1v2_u1u2=x1c,
        i_x2v1_u1u2=x2c,
    )


def appendixB_region(g: LdicParams) -> RateRegion:
    """Achievable region of the layered scheme, assembled from :func:`info_terms`."""
    t = info_terms(g)
    return RateRegion([
        RateConstraint(1, 0, t.i_uv2x1_y1 - t.delta1),
        RateConstraint(1, 0, t.i_x1_u1v2 + t.i_u1_y2 - t.delta1),
        RateConstraint(0, 1, t.i_uv1x2_y2 - t.delta2),
        RateConstraint(0, 1, t.i_x2_u2v1 + t.i_u2_y1 - t.delta2),
        RateConstraint(1, 1, t.i_x1_given + t.i_uv1x2_y2 - t.delta1 - t.delta2),
        RateConstraint(1, 1, t.i_x2_given + t.i_uv2x1_y1 - t.delta1 - t.delta2),
        RateConstraint(1, 1, t.i_x1v2_v1u2 + t.i_x2v1_v2u1 + t.i_u2_y1 + t.i_u1_y2
                       - t.delta1 - t.delta2),
        RateConstraint(2, 1, t.i_x1_given + t.i_uv2x1_y1 + t.i_x2v1_v2u1 + t.i_u1_y2
                       - 2 * t.delta1 - t.delta2),
        RateConstraint(1, 2, t.i_x2_given + t.i_uv1x2_y2 + t.i_x1v2_v1u2 + t.i_u2_y1
                       - t.delta1 - 2 * t.delta2),
    ])


def sum_capacity(g: LdicParams):
    """Largest ``R1 + R2`` in :func:`theorem3_region`."""
    return max_weighted(theorem3_region(g), 1, 1)


def _ratio(a, b):
    if isinstance(a, Rational) and isinstance(b, Rational):
        return Fraction(a) / Fraction(b)
    return a / b


def symmetric_sumrate_branches(alpha, beta) -> list:
    """Normalised sum-rate from every branch whose closed interval holds alpha.

    All returned values agree because the piecewise formula is continuous.
    """
    out = []
    if 0 <= alpha <= Fraction(1, 2):
        out.append(min(2 - 2 * alpha + 2 * beta, 2 - alpha))
    if Fraction(1, 2) <= alpha <= Fraction(2, 3):
        out.append(min(2 * alpha + 2 * beta, 2 - alpha))
    if Fraction(2, 3) <= alpha <= 1:
        out.append(2 - alpha)
    if 1 <= alpha <= 2 + 2 * beta:
        out.append(alpha)
    if alpha >= 2 + 2 * beta:
        out.append(2 + 2 * beta)
    return out


def symmetric_sumrate(n, m, cfb):
    """Sum capacity of the symmetric channel ``(n, n, m, m, cfb, cfb)``.

    Evaluates the closed-form normalised curve at ``alpha = m/n`` and
    ``beta = cfb/n`` and scales it back by ``n``.
    """
    if n == 0:
        return 0
    alpha = _ratio(m, n)
    beta = _ratio(cfb, n)
    value = n * symmetric_sumrate_branches(alpha, beta)[0]
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value
