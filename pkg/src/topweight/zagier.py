"""Closed-form evaluation of z_g and the Euler characteristics read off from it.

For ``g >= 2`` the series is a finite sum of rational multiples of Laurent
monomials ``P_m^{-k} prod P_{d_i}^{a_i}``; each index tuple is a
:class:`ZagierTerm`.  Genus 0 and 1 have their own logarithmic formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import factorial, gcd
from typing import Dict, Iterator, List, Optional, Tuple

from .arith import Partition, bernoulli, divisors, moebius, prime_divisors, totient
from .symfunc import PLaurent, PSeries, P_unit, SchurTable, pseries_inv, pseries_log_unit, schur_expand

__all__ = [
    "ZagierTerm",
    "enumerate_terms",
    "term_coefficient",
    "term_laurent",
    "term_value",
    "z_g_laurent",
    "z_g",
    "z_0",
    "z_1",
    "z_series",
    "default_truncation",
    "top_weight_euler",
    "top_weight_euler_closed",
    "equivariant_table",
    "terms_to_json",
]


@dataclass(frozen=True, order=True)
class ZagierTerm:
    m: int
    k: int
    r: int
    d: Tuple[int, ...]
    a: Tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.d)

    @property
    def D(self) -> int:
        return reduce(gcd, self.d, self.m)

    def genus(self) -> int:
        """The g for which condition ``sum a_i d_i + g - 1 = k m`` holds."""
        return self.k * self.m - sum(x * y for x, y in zip(self.a, self.d)) + 1

    def is_valid(self, g: int) -> bool:
        d, a, m = self.d, self.a, self.m
        return (
            m >= 1
            and self.k >= 1
            and self.r >= 0
            and len(d) == len(a)
            and all(x >= 1 for x in a)
            and list(d) == sorted(set(d))
            and all(0 < x < m and m % x == 0 for x in d)
            and sum(a) + self.r == self.k + 1
            and self.genus() == g
        )

    def monomial(self) -> Dict[int, int]:
        mono = {self.m: -self.k}
        for x, y in zip(self.d, self.a):
            mono[x] = mono.get(x, 0) + y
        return mono

    def p_degree(self) -> int:
        """Degree with ``P_j`` of weight ``j``: ``-k m + sum a_i d_i``."""
        return -self.k * self.m + sum(x * y for x, y in zip(self.d, self.a))


def _multisets(divs: List[int], count: int, total: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """``(d, a)`` with d an increasing sublist of ``divs``, ``sum a = count``, ``sum a d = total``."""
    def rec(i, cnt, tot):
        if cnt == 0:
            if tot == 0:
                yield (), ()
            return
        if i == len(divs) or tot < cnt * divs[i]:
            return
        x = divs[i]
        for c in range(min(cnt, tot // x), 0, -1):
            for d, a in rec(i + 1, cnt - c, tot - c * x):
                yield (x,) + d, (c,) + a
        yield from rec(i + 1, cnt, tot)

    yield from rec(0, count, total)


def enumerate_terms(g: int, m_max: Optional[int] = None, k_max: Optional[int] = None) -> List[ZagierTerm]:
    """Every index tuple for genus g, sorted by ``(m, k, r, d, a)``.

    The default search box ``m <= 2g + 2``, ``k <= g`` is exhaustive; the
    arguments exist to scan a wider box.
    """
    if g < 2:
        raise ValueError("the term expansion needs g >= 2; use z_0 / z_1")
    m_max = 2 * g + 2 if m_max is None else m_max
    k_max = g if k_max is None else k_max
    out = []
    for m in range(1, m_max + 1):
        divs = divisors(m)[:-1]
        for k in range(1, k_max + 1):
            total = k * m - g + 1
            if total < 0:
                continue
            for r in range(k + 2):
                for d, a in _multisets(divs, k + 1 - r, total):
                    t = ZagierTerm(m, k, r, d, a)
                    assert t.is_valid(g)
                    out.append(t)
    out.sort()
    return out


def term_coefficient(t: ZagierTerm) -> Fraction:
    """The rational prefactor of the monomial ``P_m^{-k} prod P_{d_i}^{a_i}``."""
    k, m, r = t.k, t.m, t.r
    if k < 1:
        raise ValueError("k must be >= 1")
    c = Fraction(factorial(k - 1), factorial(r)) * bernoulli(r)
    if (k - r) % 2:
        c = -c
    if not c:
        return c
    c *= Fraction(m) ** (r - 1)
    if t.D > 1:
        for p in prime_divisors(t.D):
            c *= 1 - Fraction(1, p**r)
    for x, y in zip(t.d, t.a):
        c *= Fraction(moebius(m // x) ** y, factorial(y))
    return c


def term_laurent(t: ZagierTerm) -> PLaurent:
    c = term_coefficient(t)
    return PLaurent.monomial(t.monomial(), c) if c else PLaurent()


def term_value(t: ZagierTerm, N: int) -> PSeries:
    return term_laurent(t).expand(N)


def z_g_laurent(g: int) -> PLaurent:
    total = PLaurent()
    for t in enumerate_terms(g):
        if term_coefficient(t):
            total = total + term_laurent(t)
    return total


def default_truncation(g: int) -> int:
    return 3 * g + 6


def z_g(g: int, N: Optional[int] = None) -> PSeries:
    """z_g for ``g >= 2`` through the closed formula, expanded to degree N."""
    return z_g_laurent(g).expand(default_truncation(g) if N is None else N)


def z_0(N: int) -> PSeries:
    """``-P_1 sum_d mu(d)/d log P_d + (P_1^2 - P_2)/2``; only ``d <= N`` matter."""
    acc = PSeries.zero(N)
    for d in range(1, N + 1):
        mu = moebius(d)
        if mu:
            acc = acc + pseries_log_unit(d, N) * Fraction(mu, d)
    P1 = P_unit(1, N)
    out = -(P1 * acc) + (P1 * P1 - P_unit(2, N)) * Fraction(1, 2)
    return out


def z_1(N: int) -> PSeries:
    """``-1/2 sum_d phi(d)/d log P_d - P_1^2/(4 P_2) + P_1 - 3/4``."""
    acc = PSeries.zero(N)
    for d in range(1, N + 1):
        acc = acc + pseries_log_unit(d, N) * Fraction(totient(d), d)
    P1 = P_unit(1, N)
    out = acc * Fraction(-1, 2) - P1 * P1 * pseries_inv(P_unit(2, N)) * Fraction(1, 4)
    return out + P1 - PSeries.scalar(Fraction(3, 4), N)


def z_series(g: int, N: Optional[int] = None) -> PSeries:
    """Dispatch on genus."""
    if g < 0:
        raise ValueError("genus must be >= 0")
    N = default_truncation(g) if N is None else N
    if N < 0:
        raise ValueError("truncation must be >= 0")
    if g == 0:
        return z_0(N)
    if g == 1:
        return z_1(N)
    return z_g(g, N)


def top_weight_euler(g: int, n: int, N: Optional[int] = None) -> Fraction:
    """``n! * coeff(z_g, p_1^n)`` read off the series."""
    N = max(n, 0) if N is None else N
    if n > N:
        raise ValueError("n exceeds the truncation")
    return factorial(n) * z_series(g, N).coeff(Partition((1,) * n))


def top_weight_euler_closed(g: int, n: int) -> Fraction:
    """``(-1)^{n+1} (g+n-2)!/g! * B_g``, valid for ``n > g + 1`` in the stable range."""
    if n <= g + 1 or 2 * g - 2 + n <= 0:
        raise ValueError("outside validity range: need n > g + 1 and 2g - 2 + n > 0")
    sign = 1 if (n + 1) % 2 == 0 else -1
    return sign * Fraction(factorial(g + n - 2), factorial(g)) * bernoulli(g)


def equivariant_table(g: int, n: int, N: Optional[int] = None) -> SchurTable:
    """Schur coefficients of the degree-n part of z_g."""
    N = n if N is None else N
    return schur_expand(z_series(g, N), n)


def terms_to_json(terms: List[ZagierTerm]) -> List[dict]:
    out = []
    for t in terms:
        c = term_coefficient(t)
        out.append({
            "k": t.k,
            "m": t.m,
            "r": t.r,
            "d": list(t.d),
            "a": list(t.a),
            "coefficient": {"num": str(c.numerator), "den": str(c.denominator)},
        })
    return out
