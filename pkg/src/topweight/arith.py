"""Exact arithmetic helpers: Bernoulli numbers, Moebius/totient, divisors, partitions.

Rationals are plain :class:`fractions.Fraction` values; they are always
reduced and never rounded.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import gcd
from typing import Dict, List, Tuple

__all__ = [
    "Partition",
    "bernoulli",
    "moebius",
    "totient",
    "divisors",
    "prime_divisors",
    "partitions_of",
]


class Partition(tuple):
    """A partition stored as a weakly decreasing tuple of positive parts.

    Parts are sorted on construction, so ``Partition([1, 3, 1])`` is
    ``(3, 1, 1)``.  Being a tuple, it hashes and compares like one.
    """

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if parts and parts[-1] < 1:
            raise ValueError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return sum(self)

    def exponents(self) -> Dict[int, int]:
        """Multiplicity view: ``{part: count}``."""
        out: Dict[int, int] = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def centralizer(self) -> int:
        """``z_lambda = prod i^{m_i} m_i!``, the centralizer order in S_n."""
        z = 1
        for i, m in self.exponents().items():
            z *= i**m
            for j in range(2, m + 1):
                z *= j
        return z

    def __add__(self, other):
        return Partition(tuple.__add__(self, tuple(other)))

    def __repr__(self):
        return f"Partition({tuple(self)!r})"


def _check_positive(n: int) -> None:
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")


# Bernoulli numbers, convention t/(e^t - 1): B_1 = -1/2.
_bernoulli_table: List[Fraction] = []
_bernoulli_lock = threading.Lock()


def _extend_bernoulli(r: int) -> None:
    # Akiyama-Tanigawa yields B_1 = +1/2; the sign is flipped afterwards.
    with _bernoulli_lock:
        start = len(_bernoulli_table)
        if start > r:
            return
        out = []
        a = [Fraction(0)] * (r + 1)
        for m in range(r + 1):
            a[m] = Fraction(1, m + 1)
            for j in range(m, 0, -1):
                a[j - 1] = j * (a[j - 1] - a[j])
            out.append(a[0])
        if r >= 1:
            out[1] = -out[1]
        _bernoulli_table[:] = out


def bernoulli(r: int) -> Fraction:
    """Bernoulli number B_r with t/(e^t - 1) = sum B_r t^r / r!  (so B_1 = -1/2)."""
    if r < 0:
        raise ValueError("bernoulli index must be >= 0")
    if r >= len(_bernoulli_table):
        _extend_bernoulli(max(r, 2 * len(_bernoulli_table), 16))
    return _bernoulli_table[r]


def _factor(n: int) -> List[Tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def moebius(n: int) -> int:
    _check_positive(n)
    mu = 1
    for _, e in _factor(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def totient(n: int) -> int:
    _check_positive(n)
    phi = n
    for p, _ in _factor(n):
        phi = phi // p * (p - 1)
    return phi


def divisors(n: int) -> List[int]:
    _check_positive(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def prime_divisors(n: int) -> List[int]:
    _check_positive(n)
    return [p for p, _ in _factor(n)]


def _partitions_bounded(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_bounded(n - first, first):
            yield (first,) + rest


def partitions_of(n: int) -> List[Partition]:
    """All partitions of ``n`` in reverse lexicographic order: (n), (n-1,1), ..., (1^n)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return [Partition(p) for p in _partitions_bounded(n, n)]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
