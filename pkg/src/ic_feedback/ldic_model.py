"""GF(2) signals and the linear deterministic interference channel.

A :class:`BitVec` of length ``q`` is stored as an integer whose most
significant of ``q`` bits is level 1 (the top level). With that layout the
down-shift ``S^(q-n) x`` is a plain right shift by ``q - n`` and addition
over GF(2) is XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable

__all__ = [
    "BitVec",
    "LdicParams",
    "InvalidGainError",
    "shift_down",
    "channel_output",
    "lsb_feedback",
    "feedback_rows",
]


class InvalidGainError(ValueError):
    pass


@dataclass(frozen=True)
class BitVec:
    """Fixed-length GF(2) column vector, MSB-first."""

    q: int
    value: int = 0

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("length must be nonnegative")
        if self.value < 0 or self.value >> self.q:
            raise ValueError(f"value {self.value} does not fit in {self.q} levels")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        bits = list(bits)
        v = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            v = (v << 1) | b
        return cls(len(bits), v)

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        return cls.from_bits(int(ch) for ch in s.strip())

    @classmethod
    def zeros(cls, q: int) -> "BitVec":
        return cls(q, 0)

    @property
    def bits(self) -> tuple:
        return tuple((self.value >> (self.q - 1 - i)) & 1 for i in range(self.q))

    def level(self, i: int) -> int:
        """Bit at level ``i`` (1 = top)."""
        if not 1 <= i <= self.q:
            raise IndexError(i)
        return (self.value >> (self.q - i)) & 1

    def with_level(self, i: int, bit: int) -> "BitVec":
        if not 1 <= i <= self.q:
            raise IndexError(i)
        mask = 1 << (self.q - i)
        v = (self.value | mask) if bit else (self.value & ~mask)
        return BitVec(self.q, v)

    def weight(self) -> int:
        return bin(self.value).count("1")

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.q != other.q:
            raise ValueError("length mismatch")
        return BitVec(self.q, self.value ^ other.value)

    def __len__(self):
        return self.q

    def __iter__(self):
        return iter(self.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class LdicParams:
    """Gains ``n_kj`` (from transmitter k to receiver j) and feedback rates."""

    n11: int
    n22: int
    n12: int
    n21: int
    cfb1: object = 0
    cfb2: object = 0

    def __post_init__(self):
        for name in ("n11", "n22", "n12", "n21"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise InvalidGainError(f"{name} must be a nonnegative integer")
        for name in ("cfb1", "cfb2"):
            v = getattr(self, name)
            if v < 0:
                raise ValueError(f"{name} must be nonnegative")
            if isinstance(v, float):
                if v == int(v):
                    object.__setattr__(self, name, int(v))
                else:
                    object.__setattr__(self, name, Fraction(v).limit_denominator(1 << 20))
            elif not isinstance(v, Rational):
                raise TypeError(f"{name} must be rational")

    @property
    def q(self) -> int:
        return max(self.n11, self.n22, self.n12, self.n21)

    @property
    def integer_feedback(self) -> bool:
        return Fraction(self.cfb1).denominator == 1 and Fraction(self.cfb2).denominator == 1

    def replace(self, **kw) -> "LdicParams":
        d = dict(n11=self.n11, n22=self.n22, n12=self.n12, n21=self.n21,
                 cfb1=self.cfb1, cfb2=self.cfb2)
        d.update(kw)
        return LdicParams(**d)

    @classmethod
    def symmetric(cls, n: int, m: int, cfb=0) -> "LdicParams":
        return cls(n, n, m, m, cfb, cfb)

    def as_tuple(self) -> tuple:
        return (self.n11, self.n22, self.n12, self.n21, self.cfb1, self.cfb2)


def shift_down(x: BitVec, n: int) -> BitVec:
    """``S^(q-n) x``: the top ``n`` levels of ``x`` land on the bottom ``n``."""
    if n < 0 or n > x.q:
        raise InvalidGainError(f"gain {n} outside [0, {x.q}]")
    return BitVec(x.q, x.value >> (x.q - n))


def channel_output(x1: BitVec, x2: BitVec, g: LdicParams):
    """Received vectors ``(y1, y2)`` for inputs ``x1`` and ``x2``."""
    q = g.q
    if x1.q != q or x2.q != q:
        raise ValueError(f"inputs must have length q = {q}")
    y1 = (x1.value >> (q - g.n11)) ^ (x2.value >> (q - g.n21))
    y2 = (x1.value >> (q - g.n12)) ^ (x2.value >> (q - g.n22))
    return BitVec(q, y1), BitVec(q, y2)


def lsb_feedback(y: BitVec, cross_gain: int, cfb: int) -> BitVec:
    """Keep the bottom ``min(cross_gain, cfb)`` levels of ``y``."""
    w = min(cross_gain, cfb)
    if w > y.q:
        raise ValueError("feedback window exceeds vector length")
    w = int(w)
    return BitVec(y.q, y.value & ((1 << w) - 1))


def feedback_rows(y: BitVec, rows: Iterable[int]) -> BitVec:
    """Keep only the listed levels of ``y`` (1 = top), zeroing the rest."""
    mask = 0
    for r in rows:
        if not 1 <= r <= y.q:
            raise IndexError(r)
        mask |= 1 << (y.q - r)
    return BitVec(y.q, y.value & mask)
