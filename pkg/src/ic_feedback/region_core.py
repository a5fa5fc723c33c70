"""Two-dimensional rate regions described by half-plane constraints.

A region is the set of nonnegative pairs ``(R1, R2)`` satisfying every
``c1*R1 + c2*R2 <= bound``. When all coefficients and bounds are integers or
:class:`fractions.Fraction` the region is *exact* and every query is answered
with rational arithmetic; otherwise floats and an explicit tolerance are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Sequence

from ._accel import INT_KERNEL_LIMIT, compiled_kernels, python_kernels

__all__ = [
    "RateConstraint",
    "RateRegion",
    "RatePair",
    "EmptyRegion",
    "UnboundedRegionError",
    "contains",
    "max_weighted",
    "vertices",
    "regions_equal",
    "box",
]

DEFAULT_TOL = 1e-9


class UnboundedRegionError(ValueError):
    """Raised when a query needs a bounded region (or direction) and it is not."""


class _EmptyMarker(float):
    """Negative infinity that also identifies an empty region."""

    def __repr__(self):
        return "EmptyRegion"


#: Returned by :func:`max_weighted` for an empty region. Compares equal to
#: ``-math.inf`` so gap arithmetic stays total.
EmptyRegion = _EmptyMarker("-inf")


class RatePair(NamedTuple):
    r1: object
    r2: object


def _is_exact(v) -> bool:
    return isinstance(v, Rational)


@dataclass(frozen=True)
class RateConstraint:
    """``c1*R1 + c2*R2 <= bound`` with nonnegative coefficients."""

    c1: object
    c2: object
    bound: object

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("constraint coefficients must be nonnegative")
        if not self.c1 + self.c2 > 0:
            raise ValueError("constraint must involve at least one rate")

    @property
    def exact(self) -> bool:
        return _is_exact(self.c1) and _is_exact(self.c2) and _is_exact(self.bound)

    def __str__(self):
        lhs = []
        for coef, name in ((self.c1, "R1"), (self.c2, "R2")):
            if coef == 0:
                continue
            lhs.append(name if coef == 1 else f"{coef}{name}")
        return f"{' + '.join(lhs)} <= {self.bound}"


@dataclass(frozen=True)
class RateRegion:
    """Ordered list of constraints; ``R1 >= 0`` and ``R2 >= 0`` are implicit."""

    constraints: tuple

    def __init__(self, constraints: Iterable):
        cons = []
        for c in constraints:
            if not isinstance(c, RateConstraint):
                c = RateConstraint(*c)
            cons.append(c)
        object.__setattr__(self, "constraints", tuple(cons))

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.constraints)

    @property
    def is_empty(self) -> bool:
        return any(c.bound < 0 for c in self.constraints)

    @property
    def is_bounded(self) -> bool:
        return any(c.c1 > 0 for c in self.constraints) and any(
            c.c2 > 0 for c in self.constraints
        )

    def with_constraint(self, c) -> "RateRegion":
        return RateRegion(self.constraints + (c,))

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)


def box(r1max, r2max) -> RateRegion:
    """The rectangle ``R1 <= r1max, R2 <= r2max``."""
    return RateRegion([RateConstraint(1, 0, r1max), RateConstraint(0, 1, r2max)])


def contains(region: RateRegion, p, tol=0) -> bool:
    """True iff ``p`` satisfies every constraint within ``tol``."""
    r1, r2 = p
    if r1 < -tol or r2 < -tol:
        return False
    return all(c.c1 * r1 + c.c2 * r2 <= c.bound + tol for c in region.constraints)


# ---------------------------------------------------------------------------
# integer scaling for the exact path


def _scaled_rows(region: RateRegion):
    """Integer rows ``(a1, a2, b)`` describing ``region`` plus both axes.

    Each constraint is multiplied by the lcm of its denominators so the
    geometry is unchanged; rows sharing the same integer direction keep only
    the tightest bound.
    """
    tight = {}
    for c in region.constraints:
        den = 1
        for v in (c.c1, c.c2, c.bound):
            d = Fraction(v).denominator
            den = den * d // math.gcd(den, d)
        a1 = int(c.c1 * den)
        a2 = int(c.c2 * den)
        b = int(c.bound * den)
        g = math.gcd(a1, a2)
        key = (a1 // g, a2 // g)
        # compare b/g against the stored bound for this direction
        prev = tight.get(key)
        if prev is None or Fraction(b, g) < Fraction(prev[2], prev[3]):
            tight[key] = (a1, a2, b, g)
    a1s = [-1, 0]
    a2s = [0, -1]
    bs = [0, 0]
    for a1, a2, b, _ in tight.values():
        a1s.append(a1)
        a2s.append(a2)
        bs.append(b)
    return a1s, a2s, bs


def _int_backend(*rows):
    if compiled_kernels is None:
        return python_kernels
    for row in rows:
        for v in row:
            if v > INT_KERNEL_LIMIT or v < -INT_KERNEL_LIMIT:
                return python_kernels
    return compiled_kernels


def _float_rows(region: RateRegion):
    a1s = [-1.0, 0.0]
    a2s = [0.0, -1.0]
    bs = [0.0, 0.0]
    for c in region.constraints:
        a1s.append(float(c.c1))
        a2s.append(float(c.c2))
        bs.append(float(c.bound))
    return a1s, a2s, bs


def _exact_vertex_triples(region: RateRegion):
    a1, a2, b = _scaled_rows(region)
    return _int_backend(a1, a2, b).int_vertices(a1, a2, b)


def vertices(region: RateRegion, tol=DEFAULT_TOL) -> list:
    """Extreme points of ``region``, deduplicated and sorted lexicographically.

    Exact regions yield :class:`Fraction` coordinates; float regions merge
    points whose coordinates both differ by at most ``tol``.
    """
    if region.is_empty:
        return []
    if not region.is_bounded:
        raise UnboundedRegionError("region is unbounded")
    if region.exact:
        pts = [RatePair(Fraction(x, d), Fraction(y, d)) for x, y, d in _exact_vertex_triples(region)]
    else:
        a1, a2, b = _float_rows(region)
        kern = compiled_kernels or python_kernels
        pts = [RatePair(x, y) for x, y in kern.float_vertices(a1, a2, b, tol)]
    pts.sort()
    return pts


def max_weighted(region: RateRegion, w1, w2):
    """Maximum of ``w1*R1 + w2*R2`` over the region.

    Returns :data:`EmptyRegion` (negative infinity) for an empty region.
    """
    if w1 < 0 or w2 < 0 or (w1 == 0 and w2 == 0):
        raise ValueError("weights must be nonnegative and not both zero")
    if region.is_empty:
        return EmptyRegion
    if (w1 > 0 and not any(c.c1 > 0 for c in region.constraints)) or (
        w2 > 0 and not any(c.c2 > 0 for c in region.constraints)
    ):
        raise UnboundedRegionError("objective is unbounded over the region")
    if region.exact and _is_exact(w1) and _is_exact(w2):
        fw1, fw2 = Fraction(w1), Fraction(w2)
        den = fw1.denominator * fw2.denominator // math.gcd(fw1.denominator, fw2.denominator)
        iw1, iw2 = int(fw1 * den), int(fw2 * den)
        a1, a2, b = _scaled_rows(region)
        kern = _int_backend(a1, a2, b, (iw1, iw2))
        best = kern.int_max_weighted(a1, a2, b, iw1, iw2)
        if best is None:
            return EmptyRegion
        value = Fraction(best[0], best[1] * den)
        return int(value) if value.denominator == 1 else value
    a1, a2, b = _float_rows(region)
    kern = compiled_kernels or python_kernels
    pts = kern.float_vertices(a1, a2, b, DEFAULT_TOL)
    if not pts:
        return EmptyRegion
    return max(float(w1) * x + float(w2) * y for x, y in pts)


def regions_equal(a: RateRegion, b: RateRegion, tol=DEFAULT_TOL) -> bool:
    """True iff every vertex of ``a`` lies in ``b`` and vice versa.

    Exact regions are compared with rational arithmetic and ``tol`` is
    ignored, so the answer does not depend on a tolerance.
    """
    if a.exact and b.exact:
        ra = _scaled_rows(a)
        rb = _scaled_rows(b)
        if a.is_empty or b.is_empty:
            return a.is_empty and b.is_empty
        if not (a.is_bounded and b.is_bounded):
            raise UnboundedRegionError("region is unbounded")
        ka = _int_backend(*ra)
        kb = _int_backend(*rb)
        va = ka.int_vertices(*ra)
        vb = kb.int_vertices(*rb)
        check_b = _int_backend(*rb, *va)
        check_a = _int_backend(*ra, *vb)
        return check_b.int_contains_all(*rb, va) and check_a.int_contains_all(*ra, vb)
    va = vertices(a, tol)
    vb = vertices(b, tol)
    return all(contains(b, v, tol) for v in va) and all(contains(a, v, tol) for v in vb)


def sum_rate(region: RateRegion):
    """Shorthand for ``max_weighted(region, 1, 1)``."""
    return max_weighted(region, 1, 1)


def as_rows(region: RateRegion) -> Sequence[tuple]:
    """Constraints as plain ``(c1, c2, bound)`` tuples."""
    return [(c.c1, c.c2, c.bound) for c in region.constraints]
