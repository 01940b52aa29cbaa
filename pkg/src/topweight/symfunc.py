"""Truncated symmetric power series in the power-sum basis.

A :class:`PSeries` stores the coefficients of the monomials
``p_lambda = p_{lambda_1} p_{lambda_2} ...`` up to a fixed total degree
``N`` (``p_i`` has degree ``i``).  Everything beyond degree ``N`` is
discarded, so two series agree iff they agree up to the smaller of their
truncation degrees.

:class:`PLaurent` is the finite Laurent-polynomial ring in the
inhomogeneous power sums ``P_i = 1 + p_i``.  Every quantity produced by
the graph and orbigraph sums lives there; it is expanded to a
:class:`PSeries` only at the end.

Schur coefficients come from the Murnaghan-Nakayama rule.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Tuple

from .arith import Partition, partitions_of

__all__ = [
    "PSeries",
    "PLaurent",
    "SchurTable",
    "pseries_add",
    "pseries_mul",
    "pseries_inv",
    "pseries_log_unit",
    "P_unit",
    "P_power",
    "psi",
    "P_of_permutation",
    "coeff",
    "mn_character",
    "schur_expand",
    "partition_sort_key",
]


def partition_sort_key(lam) -> Tuple[int, Tuple[int, ...]]:
    """Degree first, then reverse lexicographic within a degree."""
    return (sum(lam), tuple(-p for p in lam))


def _frac_json(c: Fraction) -> Dict[str, str]:
    return {"num": str(c.numerator), "den": str(c.denominator)}


class PSeries:
    """Immutable truncated series ``sum c_lambda p_lambda`` with ``|lambda| <= N``."""

    __slots__ = ("truncation", "_terms")

    def __init__(self, terms: Mapping = (), truncation: int = 0):
        if truncation < 0:
            raise ValueError("truncation degree must be >= 0")
        self.truncation = truncation
        clean: Dict[Partition, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for lam, c in items:
            lam = lam if isinstance(lam, Partition) else Partition(lam)
            if lam.n > truncation:
                continue
            c = Fraction(c)
            if c:
                clean[lam] = clean.get(lam, Fraction(0)) + c
                if not clean[lam]:
                    del clean[lam]
        self._terms = clean

    @classmethod
    def _raw(cls, terms: Dict[Partition, Fraction], truncation: int) -> "PSeries":
        obj = cls.__new__(cls)
        obj.truncation = truncation
        obj._terms = terms
        return obj

    # constructors

    @classmethod
    def zero(cls, N: int) -> "PSeries":
        return cls._raw({}, N)

    @classmethod
    def scalar(cls, c, N: int) -> "PSeries":
        c = Fraction(c)
        return cls._raw({Partition(): c} if c else {}, N)

    @classmethod
    def one(cls, N: int) -> "PSeries":
        return cls.scalar(1, N)

    @classmethod
    def monomial(cls, lam, N: int, c=1) -> "PSeries":
        return cls({Partition(lam): c}, N)

    # access

    @property
    def terms(self) -> Dict[Partition, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Partition, Fraction]]:
        """Terms in canonical order (degree, then reverse lex)."""
        return sorted(self._terms.items(), key=lambda kv: partition_sort_key(kv[0]))

    def coeff(self, lam) -> Fraction:
        lam = Partition(lam)
        if lam.n > self.truncation:
            raise ValueError(f"coefficient of degree {lam.n} is beyond truncation {self.truncation}")
        return self._terms.get(lam, Fraction(0))

    def constant(self) -> Fraction:
        return self._terms.get(Partition(), Fraction(0))

    def homogeneous(self, n: int) -> "PSeries":
        """The degree-``n`` component, keeping the truncation degree."""
        return PSeries._raw({l: c for l, c in self._terms.items() if l.n == n}, self.truncation)

    def truncate(self, N: int) -> "PSeries":
        N = min(N, self.truncation)
        return PSeries._raw({l: c for l, c in self._terms.items() if l.n <= N}, N)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    # arithmetic

    def _coerce(self, other) -> "PSeries":
        if isinstance(other, PSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PSeries.scalar(other, self.truncation)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return pseries_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return PSeries._raw({l: -c for l, c in self._terms.items()}, self.truncation)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return pseries_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return PSeries.zero(self.truncation)
            return PSeries._raw({l: c * other for l, c in self._terms.items()}, self.truncation)
        if isinstance(other, PSeries):
            return pseries_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, PSeries):
            return pseries_mul(self, pseries_inv(other))
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return pseries_inv(self) ** (-e)
        out = PSeries.one(self.truncation)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PSeries.scalar(other, self.truncation)
        if not isinstance(other, PSeries):
            return NotImplemented
        N = min(self.truncation, other.truncation)
        a = {l: c for l, c in self._terms.items() if l.n <= N}
        b = {l: c for l, c in other._terms.items() if l.n <= N}
        return a == b

    # equality ignores the extra precision of the finer series, so no hash
    __hash__ = None

    def __repr__(self):
        return f"PSeries({self}, N={self.truncation})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for lam, c in self.items():
            mono = "*".join(f"p{i}" for i in lam) if lam else "1"
            parts.append(f"({c})*{mono}" if lam else f"({c})")
        return " + ".join(parts)

    # serialization

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "terms": [{"partition": list(l), **_frac_json(c)} for l, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PSeries":
        terms = {
            Partition(t["partition"]): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]
        }
        return cls(terms, int(data["truncation"]))


def pseries_add(a: PSeries, b: PSeries) -> PSeries:
    N = min(a.truncation, b.truncation)
    out = {l: c for l, c in a._terms.items() if l.n <= N}
    for l, c in b._terms.items():
        if l.n > N:
            continue
        s = out.get(l, 0) + c
        if s:
            out[l] = s
        else:
            out.pop(l, None)
    return PSeries._raw(out, N)


def _by_degree(terms: Mapping[Partition, Fraction]) -> List[Tuple[int, Partition, Fraction]]:
    return sorted(((l.n, l, c) for l, c in terms.items()), key=lambda t: t[0])


def pseries_mul(a: PSeries, b: PSeries) -> PSeries:
    N = min(a.truncation, b.truncation)
    bs = _by_degree(b._terms)
    out: Dict[Partition, Fraction] = {}
    for la, ca in a._terms.items():
        room = N - la.n
        if room < 0:
            continue
        for nb, lb, cb in bs:
            if nb > room:
                break
            key = la + lb
            out[key] = out.get(key, 0) + ca * cb
    return PSeries._raw({l: c for l, c in out.items() if c}, N)


def pseries_inv(a: PSeries) -> PSeries:
    """Multiplicative inverse, degree by degree: b_d = -(1/a_0) sum_{j>=1} a_j b_{d-j}."""
    a0 = a.constant()
    if not a0:
        raise ZeroDivisionError("non-unit series: constant term is zero")
    N = a.truncation
    inv0 = 1 / a0
    # homogeneous pieces of a, skipping the constant
    pieces: Dict[int, List[Tuple[Partition, Fraction]]] = {}
    for l, c in a._terms.items():
        if l.n:
            pieces.setdefault(l.n, []).append((l, c))
    b_parts: List[Dict[Partition, Fraction]] = [{Partition(): inv0}]
    for d in range(1, N + 1):
        acc: Dict[Partition, Fraction] = {}
        for j, piece in pieces.items():
            if j > d:
                continue
            for lb, cb in b_parts[d - j].items():
                for la, ca in piece:
                    key = la + lb
                    acc[key] = acc.get(key, 0) + ca * cb
        b_parts.append({l: -c * inv0 for l, c in acc.items() if c})
    out: Dict[Partition, Fraction] = {}
    for part in b_parts:
        out.update(part)
    return PSeries._raw(out, N)


def pseries_log_unit(d: int, N: int) -> PSeries:
    """``log(1 + p_d) = sum_{i>=1} (-1)^{i+1} p_d^i / i`` truncated at degree ``N``."""
    if d < 1:
        raise ValueError("d must be positive")
    terms = {}
    i = 1
    while d * i <= N:
        terms[Partition((d,) * i)] = Fraction((-1) ** (i + 1), i)
        i += 1
    return PSeries._raw(terms, N)


def P_unit(m: int, N: int) -> PSeries:
    """The inhomogeneous power sum ``P_m = 1 + p_m``."""
    if m < 1:
        raise ValueError("m must be positive")
    return PSeries({Partition(): 1, Partition((m,)): 1}, N)


def P_power(m: int, e: int, N: int) -> PSeries:
    """``P_m^e`` for any integer ``e``; negative powers go through :func:`pseries_inv`."""
    base = P_unit(m, N)
    if e < 0:
        base = pseries_inv(base)
        e = -e
    return base**e


def psi(cycle_type, N: Optional[int] = None) -> PSeries:
    lam = Partition(cycle_type)
    return PSeries({lam: 1}, lam.n if N is None else N)


def P_of_permutation(cycle_type, N: int) -> PSeries:
    out = PSeries.one(N)
    for part in Partition(cycle_type):
        out = out * P_unit(part, N)
    return out


def coeff(a: PSeries, lam) -> Fraction:
    return a.coeff(lam)


def _gen_binomial(e: int, j: int) -> int:
    """Binomial coefficient ``C(e, j)`` valid for negative ``e``."""
    num = 1
    den = 1
    for t in range(j):
        num *= e - t
        den *= t + 1
    return num // den


class PLaurent:
    """Finite Laurent polynomial in ``P_1, P_2, ...`` with rational coefficients.

    Monomials are keyed by sorted tuples ``((index, exponent), ...)`` with
    nonzero exponents.  The ``P_i`` are algebraically independent, so two
    values are equal exactly when their dictionaries are.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping = ()):
        clean: Dict[Tuple[Tuple[int, int], ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            key = self.normalize(mono)
            s = clean.get(key, Fraction(0)) + Fraction(c)
            if s:
                clean[key] = s
            else:
                clean.pop(key, None)
        self._terms = clean

    @staticmethod
    def normalize(mono) -> Tuple[Tuple[int, int], ...]:
        """Accept ``{index: exponent}`` or pairs; drop zero exponents, merge repeats."""
        acc: Dict[int, int] = {}
        pairs = mono.items() if isinstance(mono, Mapping) else mono
        for i, e in pairs:
            if i < 1:
                raise ValueError("P index must be positive")
            acc[i] = acc.get(i, 0) + e
        return tuple(sorted((i, e) for i, e in acc.items() if e))

    @classmethod
    def monomial(cls, mono, c=1) -> "PLaurent":
        return cls({cls.normalize(mono): c})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __add__(self, other: "PLaurent") -> "PLaurent":
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        res = PLaurent.__new__(PLaurent)
        res._terms = out
        return res

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PLaurent({k: c * other for k, c in self._terms.items()})
        if isinstance(other, PLaurent):
            out: Dict = {}
            for k1, c1 in self._terms.items():
                for k2, c2 in other._terms.items():
                    k = self.normalize(k1 + k2)
                    out[k] = out.get(k, 0) + c1 * c2
            return PLaurent(out)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def indices(self) -> set:
        return {i for k in self._terms for i, _ in k}

    @staticmethod
    def degree(mono) -> int:
        """Grading with ``P_m`` in degree ``m``."""
        return sum(i * e for i, e in mono)

    def expand(self, N: int) -> PSeries:
        out: Dict[Partition, Fraction] = {}
        for mono, c in self._terms.items():
            for lam, b in _expand_monomial(mono, N):
                out[lam] = out.get(lam, 0) + c * b
        return PSeries._raw({l: c for l, c in out.items() if c}, N)

    def __repr__(self):
        if not self._terms:
            return "PLaurent(0)"
        parts = []
        for mono, c in self.items():
            m = "*".join(f"P{i}^{e}" for i, e in mono) or "1"
            parts.append(f"({c})*{m}")
        return "PLaurent(" + " + ".join(parts) + ")"


@lru_cache(maxsize=None)
def _expand_monomial(mono: Tuple[Tuple[int, int], ...], N: int) -> Tuple[Tuple[Partition, int], ...]:
    # prod_i (1 + p_i)^{e_i}: the p_i are distinct, so coefficients factor.
    ranges = [range(N // i + 1) for i, _ in mono]
    out = []
    for js in product(*ranges):
        if sum(i * j for (i, _), j in zip(mono, js)) > N:
            continue
        c = 1
        parts: List[int] = []
        for (i, e), j in zip(mono, js):
            c *= _gen_binomial(e, j)
            parts.extend([i] * j)
        if c:
            out.append((Partition(parts), c))
    return tuple(out)


@lru_cache(maxsize=None)
def _mn(lam: Tuple[int, ...], mu: Tuple[int, ...]) -> int:
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    L = len(lam)
    beads = [lam[i] + (L - 1 - i) for i in range(L)]
    occupied = set(beads)
    total = 0
    for b in beads:
        nb = b - k
        if nb < 0 or nb in occupied:
            continue
        sign = -1 if sum(1 for c in beads if nb < c < b) % 2 else 1
        new = sorted((occupied - {b}) | {nb}, reverse=True)
        parts = tuple(p for p in (new[i] - (L - 1 - i) for i in range(L)) if p > 0)
        total += sign * _mn(parts, rest)
    return total


def mn_character(lam, mu) -> int:
    """Irreducible character chi^lam evaluated on cycle type mu (Murnaghan-Nakayama)."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.n != mu.n:
        raise ValueError(f"size mismatch: |{tuple(lam)}| != |{tuple(mu)}|")
    return _mn(tuple(lam), tuple(mu))


class SchurTable:
    """Schur-basis coefficients of the degree-``n`` part of a symmetric function."""

    __slots__ = ("n", "coefficients")

    def __init__(self, n: int, coefficients: Mapping):
        self.n = n
        coeffs = {}
        for lam, c in coefficients.items():
            lam = Partition(lam)
            if lam.n != n:
                raise ValueError(f"partition {tuple(lam)} is not a partition of {n}")
            coeffs[lam] = Fraction(c)
        self.coefficients = coeffs

    def __getitem__(self, lam) -> Fraction:
        return self.coefficients.get(Partition(lam), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, SchurTable):
            return NotImplemented
        nz = lambda t: {l: c for l, c in t.coefficients.items() if c}
        return self.n == other.n and nz(self) == nz(other)

    def items(self):
        return sorted(self.coefficients.items(), key=lambda kv: partition_sort_key(kv[0]))

    def dimension(self) -> Fraction:
        """``sum_lambda c_lambda * chi^lambda(1^n)``: the virtual dimension."""
        ones = Partition((1,) * self.n)
        return sum((c * mn_character(l, ones) for l, c in self.coefficients.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coefficients": [{"partition": list(l), **_frac_json(c)} for l, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SchurTable":
        return cls(
            int(data["n"]),
            {Partition(t["partition"]): Fraction(int(t["num"]), int(t["den"])) for t in data["coefficients"]},
        )

    def __repr__(self):
        return f"SchurTable(n={self.n}, {dict(self.items())})"


def schur_expand(a: PSeries, n: int) -> SchurTable:
    """Hall inner products ``<a, s_lambda> = sum_mu a_mu chi^lambda(mu)`` for all lambda |- n."""
    if n > a.truncation:
        raise ValueError(f"degree {n} is beyond truncation {a.truncation}")
    part = [(mu, c) for mu, c in a._terms.items() if mu.n == n]
    table = {}
    for lam in partitions_of(n):
        table[lam] = sum((c * mn_character(lam, mu) for mu, c in part), Fraction(0))
    return SchurTable(n, table)

