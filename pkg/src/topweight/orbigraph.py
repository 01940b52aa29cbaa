"""Orbigraphs: graphs whose vertices and edges carry positive integer weights.

An orbigraph ``(X, f)`` records the quotient of a graph by a cyclic
automorphism together with orbit sizes.  This module builds quotients,
performs exhalation/inhalation surgery, crops tails, classifies static
reduced orbigraphs and evaluates the per-orbigraph factors that make up
the closed formula, each with a brute-force companion.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import factorial, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arith import bernoulli, divisors, moebius, prime_divisors
from .graphcore import Automorphism, Graph, canonical_form, chi_orb_oracle
from .symfunc import PLaurent, PSeries

__all__ = [
    "Orbigraph",
    "StaticClass",
    "quotient_orbigraph",
    "alpha",
    "beta",
    "beta_laurent",
    "chi_pair",
    "exhalable_edges",
    "exhale",
    "inhalable_elements",
    "inhale",
    "inhale_all",
    "maximal_exhalation",
    "maximal_tails",
    "crop_tail",
    "crop_all_tails",
    "is_static",
    "is_static_structural",
    "is_reduced",
    "classify_static_reduced",
    "gamma_formula",
    "gamma_oracle",
    "mu_factor",
    "divisor_chain_sum",
    "mu_chain_oracle",
    "static_integral",
    "static_integral_oracle",
]


@dataclass(frozen=True)
class Orbigraph:
    graph: Graph
    f_vertices: Tuple[int, ...]
    f_edges: Tuple[int, ...]  # indexed like graph.edges

    def __post_init__(self):
        fv, fe = tuple(self.f_vertices), tuple(self.f_edges)
        object.__setattr__(self, "f_vertices", fv)
        object.__setattr__(self, "f_edges", fe)
        G = self.graph
        if len(fv) != G.num_vertices or len(fe) != G.num_edges:
            raise ValueError("f must have one value per vertex and per edge")
        if any(x < 1 for x in fv + fe):
            raise ValueError("f values must be positive integers")
        for h in range(G.num_half_edges):
            if self.f_half(h) % fv[G.r[h]]:
                raise ValueError(f"f(r(x)) must divide f([x]) (half-edge {h})")

    @classmethod
    def constant(cls, G: Graph, value: int = 1) -> "Orbigraph":
        return cls(G, (value,) * G.num_vertices, (value,) * G.num_edges)

    @classmethod
    def from_edges(cls, f_vertices: Sequence[int], edges: Sequence[Tuple[int, int, int]]) -> "Orbigraph":
        """Build from vertex weights and ``(u, v, f)`` edge triples."""
        G = Graph.from_edges(len(f_vertices), [(u, v) for u, v, _ in edges])
        return cls(G, tuple(f_vertices), tuple(w for _, _, w in edges))

    def f_half(self, h: int) -> int:
        """Weight of the edge containing half-edge ``h``."""
        return self.f_edges[self.graph.edge_index(h)]

    def chi(self) -> int:
        """``sum f(V) - sum f(E)``."""
        return sum(self.f_vertices) - sum(self.f_edges)

    def chi_X(self) -> int:
        return self.graph.num_vertices - self.graph.num_edges

    def strata(self) -> Dict[int, int]:
        """``{d: chi(X_d)}`` over the values taken by f (zeros dropped)."""
        out: Dict[int, int] = {}
        for x in self.f_vertices:
            out[x] = out.get(x, 0) + 1
        for x in self.f_edges:
            out[x] = out.get(x, 0) - 1
        return {d: c for d, c in sorted(out.items()) if c}

    def is_stable(self) -> bool:
        G = self.graph
        for v in range(G.num_vertices):
            val = G.valence(v)
            if val == 0:
                return False
            if val < 3 and not any(self.f_half(h) > self.f_vertices[v] for h in G.incident[v]):
                return False
        return True

    @cached_property
    def canonical(self):
        return canonical_form(self.graph, self.f_vertices, self.f_edges)

    def isomorphic(self, other: "Orbigraph") -> bool:
        return self.canonical == other.canonical

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["f_vertices"] = list(self.f_vertices)
        out["f_edges"] = list(self.f_edges)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Orbigraph":
        return cls(Graph.from_json(data), tuple(data["f_vertices"]), tuple(data["f_edges"]))


class _Builder:
    """Mutable half-edge structure used for surgery; indices survive until :meth:`freeze`."""

    def __init__(self, X: Orbigraph):
        G = X.graph
        self.fv: Dict[int, int] = dict(enumerate(X.f_vertices))
        self.s: Dict[int, int] = dict(enumerate(G.s))
        self.r: Dict[int, int] = dict(enumerate(G.r))
        self.fh: Dict[int, int] = {h: X.f_half(h) for h in range(G.num_half_edges)}
        self.next_v = G.num_vertices
        self.next_h = G.num_half_edges

    def add_vertex(self, f: int) -> int:
        v = self.next_v
        self.next_v += 1
        self.fv[v] = f
        return v

    def add_edge(self, u: int, v: int, f: int) -> Tuple[int, int]:
        a, b = self.next_h, self.next_h + 1
        self.next_h += 2
        self.s[a], self.s[b] = b, a
        self.r[a], self.r[b] = u, v
        self.fh[a] = self.fh[b] = f
        return a, b

    def remove_half(self, h: int) -> None:
        del self.s[h], self.r[h], self.fh[h]

    def freeze(self) -> Orbigraph:
        vs = sorted(self.fv)
        vmap = {v: i for i, v in enumerate(vs)}
        hs = sorted(self.s)
        hmap = {h: i for i, h in enumerate(hs)}
        G = Graph(len(vs), tuple(hmap[self.s[h]] for h in hs), tuple(vmap[self.r[h]] for h in hs))
        fe = tuple(self.fh[hs[h]] for h, _ in G.edges)
        return Orbigraph(G, tuple(self.fv[v] for v in vs), fe)


# the quotient construction

def _power(perm: Sequence[int], i: int) -> List[int]:
    out = list(range(len(perm)))
    for _ in range(i):
        out = [perm[x] for x in out]
    return out


def _order(perm: Sequence[int]) -> int:
    k, cur = 1, list(perm)
    ident = list(range(len(perm)))
    while cur != ident:
        cur = [perm[x] for x in cur]
        k += 1
    return k


def quotient_orbigraph(G: Graph, tau: Automorphism) -> Orbigraph:
    """Quotient of ``G`` by the cyclic group generated by ``tau``.

    Edges reversed by some power of ``tau`` are subdivided first, so the
    group acts without inversions; ``f`` records orbit sizes.
    """
    if not tau.is_valid_for(G):
        raise ValueError("tau is not an automorphism of G")
    th = tau.tau_H
    order = max(_order(th), _order(tau.tau_V))
    reversed_edges = set()
    for i in range(1, order):
        p = _power(th, i)
        for e, (h, t) in enumerate(G.edges):
            if p[h] == t:
                reversed_edges.add(e)
    # subdivided graph G' with the induced action
    nv = G.num_vertices
    edges: List[Tuple[int, int]] = []
    mid = {}
    for e, (h, t) in enumerate(G.edges):
        if e in reversed_edges:
            mid[e] = nv + len(mid)
    for e, (h, t) in enumerate(G.edges):
        if e in mid:
            edges += [(G.r[h], mid[e]), (mid[e], G.r[t])]
        else:
            edges.append((G.r[h], G.r[t]))
    Gp = Graph.from_edges(nv + len(mid), edges)
    # half-edge map in G': locate each G' half by (G half at its outer end)
    outer: Dict[int, int] = {}  # G half h -> G' half attached at r(h)
    inner: Dict[int, int] = {}  # G half h -> G' half at the midpoint paired with outer[h]
    j = 0
    for e, (h, t) in enumerate(G.edges):
        if e in mid:
            outer[h], inner[h] = 2 * j, 2 * j + 1
            outer[t], inner[t] = 2 * j + 3, 2 * j + 2
            j += 2
        else:
            outer[h], outer[t] = 2 * j, 2 * j + 1
            j += 1
    tH = [0] * Gp.num_half_edges
    for h in range(G.num_half_edges):
        tH[outer[h]] = outer[th[h]]
        if h in inner:
            tH[inner[h]] = inner[th[h]]
    tV = list(tau.tau_V) + [0] * len(mid)
    for e, (h, t) in enumerate(G.edges):
        if e in mid:
            tV[mid[e]] = mid[G.edge_index(th[h])]
    # orbits
    def orbits(perm):
        seen = [-1] * len(perm)
        sizes = []
        for x in range(len(perm)):
            if seen[x] >= 0:
                continue
            k, y = 0, x
            while seen[y] < 0:
                seen[y] = len(sizes)
                y = perm[y]
                k += 1
            sizes.append(k)
        return seen, sizes

    vorb, vsize = orbits(tV)
    horb, hsize = orbits(tH)
    s_q = [0] * len(hsize)
    r_q = [0] * len(hsize)
    for h in range(Gp.num_half_edges):
        s_q[horb[h]] = horb[Gp.s[h]]
        r_q[horb[h]] = vorb[Gp.r[h]]
    X = Graph(len(vsize), tuple(s_q), tuple(r_q))
    fe = tuple(hsize[h] for h, _ in X.edges)
    return Orbigraph(X, tuple(vsize), fe)


# the three factors

def alpha(X: Orbigraph) -> int:
    return -1 if X.graph.num_edges % 2 else 1


def beta_laurent(X: Orbigraph) -> PLaurent:
    return PLaurent.monomial(X.strata())


def beta(X: Orbigraph, N: int) -> PSeries:
    """``prod_d P_d^{chi(X_d)}`` expanded to degree N."""
    return beta_laurent(X).expand(N)


def chi_pair(X: Orbigraph) -> int:
    return X.chi()


# exhalation and inhalation

def exhalable_edges(X: Orbigraph) -> List[int]:
    G = X.graph
    out = []
    for e, (h, t) in enumerate(G.edges):
        u, v = G.r[h], G.r[t]
        fe = X.f_edges[e]
        if u == v or X.f_vertices[u] != fe or X.f_vertices[v] != fe:
            continue
        for w, hw in ((u, h), (v, t)):
            if G.valence(w) == 2:
                other = next(x for x in G.incident[w] if x != hw)
                if X.f_half(other) > fe:
                    out.append(e)
                    break
    return out


def exhale(X: Orbigraph, e: int) -> Orbigraph:
    """Collapse exhalable edge ``e``; the merged vertex gets weight ``f(e)``."""
    if e not in exhalable_edges(X):
        raise ValueError(f"edge {e} is not exhalable")
    G = X.graph
    h, t = G.edges[e]
    u, v = G.r[h], G.r[t]
    b = _Builder(X)
    b.remove_half(h)
    b.remove_half(t)
    for x in list(b.r):
        if b.r[x] == v:
            b.r[x] = u
    del b.fv[v]
    b.fv[u] = X.f_edges[e]
    return b.freeze()


def inhalable_elements(X: Orbigraph) -> List[Tuple[str, int]]:
    """Inhalable vertices ``('v', i)`` and half-edges ``('h', i)``."""
    G = X.graph
    out = []
    for v in range(G.num_vertices):
        inc = G.incident[v]
        fv = X.f_vertices[v]
        if len(inc) == 2 and all(X.f_half(h) > fv for h in inc):
            out.append(("v", v))
    for h in range(G.num_half_edges):
        v = G.r[h]
        if G.valence(v) >= 3 and X.f_half(h) > X.f_vertices[v]:
            out.append(("h", h))
    return out


def _inhale_builder(X: Orbigraph, b: _Builder, x: Tuple[str, int]) -> None:
    kind, i = x
    if kind == "v":
        v = i
        h = min(hh for hh in b.r if b.r[hh] == v)
    else:
        h = i
        v = b.r[h]
    fv = b.fv[v]
    vp = b.add_vertex(fv)
    b.r[h] = vp
    b.add_edge(v, vp, fv)


def inhale(X: Orbigraph, x: Tuple[str, int]) -> Orbigraph:
    """Expand a vertex into an edge ``e = v v'`` with ``f(e) = f(v') = f(v)``.

    Existing vertex and half-edge indices are kept; the new vertex and the
    two new half-edges get the next free indices.
    """
    if tuple(x) not in inhalable_elements(X):
        raise ValueError(f"{x} is not inhalable")
    b = _Builder(X)
    _inhale_builder(X, b, tuple(x))
    return b.freeze()


def inhale_all(X: Orbigraph, elements: Iterable[Tuple[str, int]]) -> Orbigraph:
    """Iterated inhalation along a subset of ``inhalable_elements(X)``."""
    elements = [tuple(x) for x in elements]
    inh = set(inhalable_elements(X))
    for x in elements:
        if x not in inh:
            raise ValueError(f"{x} is not inhalable")
    b = _Builder(X)
    for x in elements:
        _inhale_builder(X, b, x)
    return b.freeze()


def maximal_exhalation(X: Orbigraph, rng: Optional[random.Random] = None) -> Orbigraph:
    """Exhale until nothing is exhalable; with ``rng`` the edge order is random."""
    while True:
        ex = exhalable_edges(X)
        if not ex:
            return X
        X = exhale(X, rng.choice(ex) if rng else ex[0])


# tails

def maximal_tails(X: Orbigraph) -> List[Tuple[int, ...]]:
    """Maximal tails ``(h_0, ..., h_k)``, one per 1-valent vertex, ordered by ``h_0``."""
    G = X.graph
    out = []
    for v0 in range(G.num_vertices):
        if G.valence(v0) != 1:
            continue
        tail = [G.incident[v0][0]]
        while True:
            h = tail[-1]
            w = G.r[G.s[h]]
            if G.valence(w) != 2 or X.f_vertices[w] != X.f_half(h):
                break
            nxt = next(x for x in G.incident[w] if x != G.s[h])
            if nxt in tail or G.s[nxt] in tail:
                break
            tail.append(nxt)
        out.append(tuple(tail))
    return out


def crop_tail(X: Orbigraph, tail: Sequence[int]) -> Orbigraph:
    G = X.graph
    k = len(tail) - 1
    if k == 0:
        return X
    vs = [G.r[tail[0]]] + [G.r[h] for h in tail[1:]]
    d = X.f_vertices[vs[0]]
    b = _Builder(X)
    for h in tail[:k]:
        b.remove_half(G.s[h])
        b.remove_half(h)
    for v in vs[:k]:
        del b.fv[v]
    b.fv[vs[k]] = d
    return b.freeze()


def crop_all_tails(X: Orbigraph) -> Orbigraph:
    """Crop every maximal tail in one pass."""
    G = X.graph
    tails = [t for t in maximal_tails(X) if len(t) > 1]
    if not tails:
        return X
    # only h_0..h_{k-1} are removed; two tails may end on the same edge
    used = [x for t in tails for h in t[:-1] for x in (h, G.s[h])]
    if len(used) != len(set(used)):
        raise ValueError("maximal tails overlap; the orbigraph is not stable")
    b = _Builder(X)
    for tail in tails:
        k = len(tail) - 1
        vs = [G.r[h] for h in tail]
        for h in tail[:k]:
            b.remove_half(G.s[h])
            b.remove_half(h)
        for v in vs[:k]:
            del b.fv[v]
        b.fv[vs[k]] = X.f_vertices[vs[0]]
    return b.freeze()


def is_static(X: Orbigraph) -> bool:
    return not exhalable_edges(X) and not inhalable_elements(X)


def is_static_structural(X: Orbigraph) -> bool:
    """After cropping all tails, f is constant away from 1-valent vertices."""
    Y = crop_all_tails(X)
    G = Y.graph
    vals = {Y.f_vertices[v] for v in range(G.num_vertices) if G.valence(v) != 1}
    vals |= set(Y.f_edges)
    return len(vals) <= 1


def is_reduced(X: Orbigraph) -> bool:
    return all(len(t) == 1 for t in maximal_tails(X))


@dataclass(frozen=True)
class StaticClass:
    g: int
    m: int
    r: int
    d: Tuple[int, ...]
    a: Tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(self.d))
        object.__setattr__(self, "a", tuple(self.a))
        problem = self.violation()
        if problem:
            raise ValueError(f"invalid static class {self}: {problem}")

    @property
    def s(self) -> int:
        return len(self.d)

    @property
    def n(self) -> int:
        return sum(self.a)

    def violation(self) -> Optional[str]:
        d, a, m = self.d, self.a, self.m
        if len(d) != len(a):
            return "d and a differ in length"
        if m < 1 or self.r < 0 or any(x < 1 for x in a):
            return "m, r, a must be positive (r may be 0)"
        if any(not 0 < x < m or m % x for x in d) or list(d) != sorted(set(d)):
            return "need 0 < d_1 < ... < d_s < m with d_i | m"
        if sum(a) + self.r != self.k + 1:
            return "sum(a) + r != k + 1"
        if sum(x * y for x, y in zip(a, d)) + self.g - 1 != self.k * m:
            return "sum(a_i d_i) + g - 1 != k m"
        return None


def classify_static_reduced(X: Orbigraph) -> StaticClass:
    if not is_static(X):
        raise ValueError("orbigraph is not static")
    if not is_reduced(X):
        raise ValueError("orbigraph is not reduced")
    G = X.graph
    leaves: Dict[int, int] = {}
    for v in range(G.num_vertices):
        if G.valence(v) == 1:
            leaves[X.f_vertices[v]] = leaves.get(X.f_vertices[v], 0) + 1
    d = tuple(sorted(leaves))
    a = tuple(leaves[x] for x in d)
    r = 1 - X.chi_X()
    return StaticClass(g=1 - X.chi(), m=max(X.f_vertices + X.f_edges), r=r, d=d, a=a, k=sum(a) + r - 1)


# closed forms and their oracles

def gamma_formula(m: int, r: int, D: int) -> Fraction:
    """``m^{r-1} prod_{p | D} (1 - p^{-r})``."""
    out = Fraction(m) ** (r - 1)
    if D > 1:
        for p in prime_divisors(D):
            out *= 1 - Fraction(1, p**r)
    return out


def gamma_oracle(m: int, r: int, d_list: Sequence[int]) -> Fraction:
    """Count ``z in (Z/m)^r`` whose reductions mod D generate ``Z/D``, then divide by m."""
    D = m
    for x in d_list:
        D = gcd(D, x)
    count = 0
    for z in product(range(m), repeat=r):
        c = D
        for x in z:
            c = gcd(c, x)
        if c == 1:
            count += 1
    return Fraction(count, m)


def mu_factor(m: int, d: Sequence[int], a: Sequence[int]) -> int:
    """``prod (-mu(m/d_i))^{a_i}``."""
    out = 1
    for x, y in zip(d, a):
        if m % x:
            raise ValueError("each d_i must divide m")
        out *= (-moebius(m // x)) ** y
    return out


def divisor_chain_sum(n: int) -> int:
    """``sum (-1)^length`` over strict divisor chains ``1 = c_0 | ... | c_l = n``; equals ``mu(n)``."""
    chains: Dict[int, int] = {1: 1}  # signed count of chains 1 -> c
    for c in divisors(n)[1:]:
        chains[c] = -sum(chains[b] for b in divisors(c) if b != c)
    return chains[n]


def mu_chain_oracle(n: int) -> int:
    """The per-tail factor ``sum (-1)^{1 + length}`` over the same chains, i.e. ``-mu(n)``."""
    return -divisor_chain_sum(n)


def static_integral(cls: StaticClass) -> Fraction:
    """``-1/prod(a_i!) * (r + n - 2)!/r! * B_r`` with ``n = sum a``."""
    r, n = cls.r, cls.n
    if r + n < 2:
        raise ValueError("need r + n >= 2")
    denom = 1
    for x in cls.a:
        denom *= factorial(x)
    return -Fraction(factorial(r + n - 2), factorial(r) * denom) * bernoulli(r)


def static_integral_oracle(cls: StaticClass) -> Fraction:
    """Same value through enumeration of graphs with non-injective markings."""
    r, n = cls.r, cls.n
    denom = 1
    for x in cls.a:
        denom *= factorial(x)
    if (r, n) == (0, 2):
        # a bare edge between the two tails: one edge, automorphism group of order 1
        return Fraction(-1, denom)
    sign = -1 if n % 2 else 1
    return sign * chi_orb_oracle(r, n) / denom
