"""Exact proper fractions and Farey sequences.

Ranks are 1-based throughout: rank 1 is 0/1 and rank ``f_max`` is 1/1.
Nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import InvalidDenominator, InvalidOrder, RankOutOfRange


class Fraction:
    """Non-negative rational ``num/den`` stored in lowest terms.

    Ordering uses cross multiplication on Python integers, which never
    overflow, so comparisons are exact for any operand size.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name, value):
        raise AttributeError("Fraction is immutable")

    def __repr__(self):
        return f"Fraction({self.num}, {self.den})"

    def __str__(self):
        return f"{self.num}/{self.den}"

    def __hash__(self):
        return hash((self.num, self.den))

    def __eq__(self, other):
        if not isinstance(other, Fraction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __lt__(self, other):
        return self.num * other.den < other.num * self.den

    def __le__(self, other):
        return self.num * other.den <= other.num * self.den

    def __gt__(self, other):
        return self.num * other.den > other.num * self.den

    def __ge__(self, other):
        return self.num * other.den >= other.num * self.den

    def __iter__(self):
        yield self.num
        yield self.den


def make_fraction(p: int, q: int) -> Fraction:
    """Reduce ``p/q``; ``0/q`` becomes 0/1 and ``q/q`` becomes 1/1."""
    if q <= 0:
        raise InvalidDenominator(f"denominator must be positive, got {q}")
    if p < 0:
        raise ValueError(f"numerator must be non-negative, got {p}")
    return Fraction(p, q)


def compare(a: Fraction, b: Fraction) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    lhs = a.num * b.den
    rhs = b.num * a.den
    return (lhs > rhs) - (lhs < rhs)


def mediant(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a.num + b.num, a.den + b.den)


@dataclass(frozen=True)
class FareySequence:
    """F_n as two parallel tuples of numerators and denominators.

    ``nums[k - 1] / dens[k - 1]`` is the fraction of rank ``k``.
    """

    order: int
    nums: tuple = field(repr=False)
    dens: tuple = field(repr=False)

    @property
    def f_max(self) -> int:
        return len(self.nums)

    @property
    def fractions(self) -> list:
        return [Fraction(a, b) for a, b in zip(self.nums, self.dens)]

    def __len__(self):
        return len(self.nums)

    def __getitem__(self, rank: int) -> Fraction:
        return fraction_at_rank(self, rank)


def generate_sequence(order: int) -> FareySequence:
    """Build F_order with the next-term recurrence in O(f_max) time.

    Given consecutive terms a/b < c/d, the next term is
    (k*c - a)/(k*d - b) with k = (order + b) // d.
    """
    if order < 1:
        raise InvalidOrder(f"order must be >= 1, got {order}")
    nums = [0]
    dens = [1]
    a, b, c, d = 0, 1, 1, order
    while c <= order:
        nums.append(c)
        dens.append(d)
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return FareySequence(order, tuple(nums), tuple(dens))


def mediant_insertion(order: int) -> list[tuple[int, int]]:
    """Build F_order by repeated mediant insertion starting from F_1.

    Quadratic and slow; kept as an independent check on generate_sequence.
    """
    if order < 1:
        raise InvalidOrder(f"order must be >= 1, got {order}")
    terms = [(0, 1), (1, 1)]
    for n in range(2, order + 1):
        grown = [terms[0]]
        for (a, b), (c, d) in zip(terms, terms[1:]):
            if b + d <= n:
                grown.append((a + c, b + d))
            grown.append((c, d))
        terms = grown
    return terms


def fraction_at_rank(seq: FareySequence, k: int) -> Fraction:
    if not 1 <= k <= seq.f_max:
        raise RankOutOfRange(f"rank {k} outside 1..{seq.f_max}")
    return Fraction(seq.nums[k - 1], seq.dens[k - 1])


def totients(limit: int) -> list[int]:
    """Euler's phi for 0..limit by sieve."""
    phi = list(range(limit + 1))
    for i in range(2, limit + 1):
        if phi[i] == i:
            for j in range(i, limit + 1, i):
                phi[j] -= phi[j] // i
    return phi


def sequence_size(order: int) -> int:
    """Number of terms of F_order, 1 + sum of phi(1..order)."""
    if order < 1:
        raise InvalidOrder(f"order must be >= 1, got {order}")
    return 1 + sum(totients(order)[1:])
