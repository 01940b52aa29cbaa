"""Half-edge graphs, their automorphisms, and brute-force orbisums.

A graph is a vertex count, a fixed-point-free involution ``s`` on the
half-edges and an attachment map ``r`` from half-edges to vertices.  Loops
and parallel edges are allowed; a loop contributes 2 to the valence of its
vertex and flipping it is a nontrivial automorphism.

Isomorphism classes are found by exhaustive enumeration of multiplicity
matrices and deduplicated with a canonical form (colour refinement, then
minimisation over the orderings that respect the refined colours).
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .arith import Partition, bernoulli
from .symfunc import PLaurent, PSeries

__all__ = [
    "Graph",
    "MarkedGraph",
    "Automorphism",
    "connected",
    "genus",
    "edge_set",
    "canonical_form",
    "automorphisms",
    "marked_automorphisms",
    "aut_sign_and_cycles",
    "enumerate_stable_graphs",
    "enumerate_marked_graphs",
    "enumerate_marked_graphs_p",
    "smooth_two_valent",
    "forget_markings",
    "z_G",
    "z_G_laurent",
    "z_g_graph_oracle",
    "z_g_graph_oracle_laurent",
    "chi_orb",
    "chi_orb_oracle",
    "kgn_euler_oracle",
    "theta_graph",
    "dumbbell_graph",
    "figure_eight_graph",
]


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    s: Tuple[int, ...]
    r: Tuple[int, ...]

    def __post_init__(self):
        s, r = tuple(self.s), tuple(self.r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "r", r)
        if len(s) != len(r):
            raise ValueError("s and r must have the same length")
        for h, t in enumerate(s):
            if not 0 <= t < len(s) or t == h or s[t] != h:
                raise ValueError("s must be a fixed-point-free involution")
        if any(not 0 <= v < self.num_vertices for v in r):
            raise ValueError("r maps a half-edge outside the vertex set")

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Sequence[Tuple[int, int]]) -> "Graph":
        """Edge ``i = (u, v)`` becomes half-edges ``2i`` at ``u`` and ``2i+1`` at ``v``."""
        s, r = [], []
        for i, (u, v) in enumerate(edges):
            s += [2 * i + 1, 2 * i]
            r += [u, v]
        return cls(num_vertices, tuple(s), tuple(r))

    @property
    def num_half_edges(self) -> int:
        return len(self.s)

    @cached_property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Edges as ``(h, s(h))`` with ``h < s(h)``, ordered by ``h``."""
        return tuple((h, t) for h, t in enumerate(self.s) if h < t)

    @cached_property
    def _edge_of(self) -> Tuple[int, ...]:
        out = [0] * len(self.s)
        for i, (h, t) in enumerate(self.edges):
            out[h] = out[t] = i
        return tuple(out)

    def edge_index(self, h: int) -> int:
        return self._edge_of[h]

    @property
    def num_edges(self) -> int:
        return len(self.s) // 2

    @cached_property
    def incident(self) -> Tuple[Tuple[int, ...], ...]:
        inc: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for h, v in enumerate(self.r):
            inc[v].append(h)
        return tuple(tuple(x) for x in inc)

    def valence(self, v: int) -> int:
        return len(self.incident[v])

    def valences(self) -> List[int]:
        return [len(x) for x in self.incident]

    def is_loop(self, e: int) -> bool:
        h, t = self.edges[e]
        return self.r[h] == self.r[t]

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges

    def to_json(self, marking: Optional[Sequence[int]] = None) -> dict:
        return {
            "vertices": self.num_vertices,
            "half_edges": len(self.s),
            "s": list(self.s),
            "r": list(self.r),
            "marking": list(marking or []),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        if len(data["s"]) != data["half_edges"]:
            raise ValueError("half_edges does not match the length of s")
        return cls(int(data["vertices"]), tuple(data["s"]), tuple(data["r"]))


@dataclass(frozen=True)
class MarkedGraph:
    graph: Graph
    marking: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "marking", tuple(self.marking))
        if any(not 0 <= v < self.graph.num_vertices for v in self.marking):
            raise ValueError("marking points outside the vertex set")

    @property
    def n(self) -> int:
        return len(self.marking)

    def marks_at(self) -> List[int]:
        cnt = [0] * self.graph.num_vertices
        for v in self.marking:
            cnt[v] += 1
        return cnt

    def is_stable(self) -> bool:
        cnt = self.marks_at()
        return all(self.graph.valence(v) + cnt[v] >= 3 for v in range(self.graph.num_vertices))

    def is_injective(self) -> bool:
        return len(set(self.marking)) == len(self.marking)

    def genus(self) -> int:
        return genus(self.graph)

    def label_sets(self) -> List[Tuple[int, ...]]:
        out: List[List[int]] = [[] for _ in range(self.graph.num_vertices)]
        for i, v in enumerate(self.marking):
            out[v].append(i)
        return [tuple(x) for x in out]

    def to_json(self) -> dict:
        return self.graph.to_json(self.marking)

    @classmethod
    def from_json(cls, data: dict) -> "MarkedGraph":
        return cls(Graph.from_json(data), tuple(data.get("marking", [])))


@dataclass(frozen=True)
class Automorphism:
    tau_V: Tuple[int, ...]
    tau_H: Tuple[int, ...]

    def is_valid_for(self, G: Graph) -> bool:
        if sorted(self.tau_V) != list(range(G.num_vertices)):
            return False
        if sorted(self.tau_H) != list(range(G.num_half_edges)):
            return False
        tv, th = self.tau_V, self.tau_H
        return all(th[G.s[h]] == G.s[th[h]] and tv[G.r[h]] == G.r[th[h]] for h in range(G.num_half_edges))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self after other``."""
        return Automorphism(
            tuple(self.tau_V[v] for v in other.tau_V), tuple(self.tau_H[h] for h in other.tau_H)
        )

    def inverse(self) -> "Automorphism":
        iv = [0] * len(self.tau_V)
        for i, j in enumerate(self.tau_V):
            iv[j] = i
        ih = [0] * len(self.tau_H)
        for i, j in enumerate(self.tau_H):
            ih[j] = i
        return Automorphism(tuple(iv), tuple(ih))

    @classmethod
    def identity(cls, G: Graph) -> "Automorphism":
        return cls(tuple(range(G.num_vertices)), tuple(range(G.num_half_edges)))


def connected(G: Graph) -> bool:
    if G.num_vertices == 0:
        return False
    parent = list(range(G.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h, t in G.edges:
        a, b = find(G.r[h]), find(G.r[t])
        if a != b:
            parent[a] = b
    root = find(0)
    return all(find(v) == root for v in range(G.num_vertices))


def genus(G: Graph) -> int:
    """First Betti number ``|E| - |V| + 1`` of a connected graph."""
    return G.num_edges - G.num_vertices + 1


def edge_set(G: Graph) -> frozenset:
    return frozenset(frozenset(e) for e in G.edges)


def cycle_type(perm: Sequence[int]) -> Partition:
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        n = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        lengths.append(n)
    return Partition(lengths)


def _sign(ct: Partition) -> int:
    return -1 if sum(c - 1 for c in ct) % 2 else 1


# canonical forms

def _refine(G: Graph, vcolors: Sequence, elabels: Sequence) -> List[int]:
    """Colour refinement; returns isomorphism-invariant integer colours."""
    base = [(vcolors[v], G.valence(v)) for v in range(G.num_vertices)]
    ranks = {c: i for i, c in enumerate(sorted(set(base)))}
    col = [ranks[c] for c in base]
    while True:
        sig = []
        for v in range(G.num_vertices):
            nb = sorted(
                (col[G.r[G.s[h]]], elabels[G.edge_index(h)], G.r[G.s[h]] == v) for h in G.incident[v]
            )
            sig.append((col[v], tuple(nb)))
        ranks = {c: i for i, c in enumerate(sorted(set(sig)))}
        new = [ranks[c] for c in sig]
        if len(ranks) == len(set(col)):
            return new
        col = new


def _orderings(col: Sequence[int]) -> Iterator[List[int]]:
    """All vertex orderings listing colour classes in increasing colour."""
    classes: Dict[int, List[int]] = {}
    for v, c in enumerate(col):
        classes.setdefault(c, []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    for choice in product(*(permutations(b) for b in blocks)):
        order = []
        for part in choice:
            order.extend(part)
        yield order


def canonical_form(G: Graph, vertex_colors: Optional[Sequence] = None, edge_labels: Optional[Sequence] = None):
    """Hashable invariant that is equal for two inputs iff they are isomorphic.

    ``vertex_colors`` and ``edge_labels`` (indexed by ``G.edges``) must be
    preserved by the isomorphisms; both default to constants.
    """
    vc = list(vertex_colors) if vertex_colors is not None else [0] * G.num_vertices
    el = list(edge_labels) if edge_labels is not None else [0] * G.num_edges
    col = _refine(G, vc, el)
    best = None
    for order in _orderings(col):
        pos = [0] * G.num_vertices
        for i, v in enumerate(order):
            pos[v] = i
        edges = sorted(
            (min(pos[G.r[h]], pos[G.r[t]]), max(pos[G.r[h]], pos[G.r[t]]), el[i])
            for i, (h, t) in enumerate(G.edges)
        )
        key = (tuple(vc[v] for v in order), tuple(edges))
        if best is None or key < best:
            best = key
    return (G.num_vertices, best)


# automorphisms

def _bundles(G: Graph) -> Dict[Tuple[int, int], List[Tuple[int, int]]]:
    """Edges grouped by endpoint pair ``u <= v``, each oriented ``(half at u, half at v)``."""
    out: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for h, t in G.edges:
        u, v = G.r[h], G.r[t]
        if u > v:
            h, t, u, v = t, h, v, u
        out.setdefault((u, v), []).append((h, t))
    return out


def _vertex_automorphisms(G: Graph, vcolors: Sequence, bundles) -> Iterator[Tuple[int, ...]]:
    nv = G.num_vertices
    mult = {k: len(v) for k, v in bundles.items()}
    col = _refine(G, vcolors, [0] * G.num_edges)
    img = [-1] * nv
    used = [False] * nv

    def m(u, v):
        return mult.get((u, v) if u <= v else (v, u), 0)

    def rec(u):
        if u == nv:
            yield tuple(img)
            return
        for w in range(nv):
            if used[w] or col[w] != col[u]:
                continue
            if m(u, u) != m(w, w):
                continue
            if any(m(u, x) != m(w, img[x]) for x in range(u)):
                continue
            img[u] = w
            used[w] = True
            yield from rec(u + 1)
            used[w] = False
        img[u] = -1

    yield from rec(0)


def automorphisms(G: Graph, vertex_colors: Optional[Sequence] = None) -> List[Automorphism]:
    """Every automorphism of ``G`` preserving ``vertex_colors``, as explicit ``(tau_V, tau_H)``."""
    vc = list(vertex_colors) if vertex_colors is not None else [0] * G.num_vertices
    bundles = _bundles(G)
    keys = sorted(bundles)
    out = []
    for sigma in _vertex_automorphisms(G, vc, bundles):
        choices = []
        for u, v in keys:
            src = bundles[(u, v)]
            a, b = sigma[u], sigma[v]
            tgt = bundles[(min(a, b), max(a, b))]
            opts = []
            if u == v:
                for perm in permutations(tgt):
                    for flips in product((False, True), repeat=len(src)):
                        mp = []
                        for (h, t), (x, y), fl in zip(src, perm, flips):
                            mp += [(h, y), (t, x)] if fl else [(h, x), (t, y)]
                        opts.append(mp)
            else:
                for perm in permutations(tgt):
                    mp = []
                    for (h, t), (x, y) in zip(src, perm):
                        mp += [(h, x), (t, y)] if a < b else [(h, y), (t, x)]
                    opts.append(mp)
            choices.append(opts)
        for combo in product(*choices):
            tau_H = [0] * G.num_half_edges
            for mp in combo:
                for h, x in mp:
                    tau_H[h] = x
            out.append(Automorphism(tuple(sigma), tuple(tau_H)))
    return out


def marked_automorphisms(mg: MarkedGraph) -> List[Automorphism]:
    """Automorphisms fixing every marking label (``tau_V o m = m``)."""
    auts = automorphisms(mg.graph, mg.marks_at())
    return [t for t in auts if all(t.tau_V[v] == v for v in mg.marking)]


def aut_sign_and_cycles(G: Graph, tau: Automorphism) -> Tuple[int, Partition, Partition, Partition]:
    """``(sgn(tau_E), cycle type on V, cycle type on E, cycle type on H)``."""
    tau_E = [G.edge_index(tau.tau_H[h]) for h, _ in G.edges]
    cE = cycle_type(tau_E)
    return _sign(cE), cycle_type(tau.tau_V), cE, cycle_type(tau.tau_H)


# enumeration

def _fill(targets: Sequence[int]) -> Iterator[Dict[Tuple[int, int], int]]:
    """All loop/edge multiplicities realising the exact vertex ``targets`` degrees."""
    nv = len(targets)
    rem = list(targets)
    mult: Dict[Tuple[int, int], int] = {}

    def pairs(u, v, need):
        # distribute ``need`` half-edge slots at u over loops and neighbours v..nv-1
        if v == nv:
            if need % 2 == 0:
                if need:
                    mult[(u, u)] = need // 2
                yield
                mult.pop((u, u), None)
            return
        top = min(need, rem[v])
        for k in range(top, -1, -1):
            if k:
                mult[(u, v)] = k
            rem[v] -= k
            yield from pairs(u, v + 1, need - k)
            rem[v] += k
            mult.pop((u, v), None)

    def rec(u):
        if u == nv:
            yield dict(mult)
            return
        need = rem[u]
        rem[u] = 0
        for _ in pairs(u, u + 1, need):
            yield from rec(u + 1)
        rem[u] = need

    yield from rec(0)


def _graph_from_mult(nv: int, mult: Dict[Tuple[int, int], int]) -> Graph:
    edges = []
    for (u, v) in sorted(mult):
        edges += [(u, v)] * mult[(u, v)]
    return Graph.from_edges(nv, edges)


def _compositions_desc(n: int, parts: int, cap: int) -> Iterator[Tuple[int, ...]]:
    """Weakly decreasing tuples of ``parts`` nonnegative ints <= cap summing to n."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    for first in range(min(n, cap), -1, -1):
        if first * parts < n:
            break
        for rest in _compositions_desc(n - first, parts - 1, first):
            yield (first,) + rest


def _degree_vectors(counts: Sequence[int], total: int, lows: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Degree vectors with given lower bounds, weakly decreasing inside runs of equal counts."""
    nv = len(counts)

    def rec(i, left, prev):
        if i == nv:
            if left == 0:
                yield ()
            return
        hi = left - sum(lows[i + 1:])
        if i > 0 and counts[i] == counts[i - 1]:
            hi = min(hi, prev)
        for d in range(hi, lows[i] - 1, -1):
            for rest in rec(i + 1, left - d, d):
                yield (d,) + rest

    yield from rec(0, total, None)


def _colored_classes(g: int, n: int, injective: bool):
    """Isomorphism classes of connected genus-g graphs with per-vertex marking counts."""
    reps = {}
    vmax = 2 * g - 2 + n
    for nv in range(1, vmax + 1):
        ne = nv + g - 1
        if ne < 0:
            continue
        cap = 1 if injective else n
        for counts in _compositions_desc(n, nv, cap):
            lows = [max(3 - c, 1 if nv > 1 else 0) for c in counts]
            for degs in _degree_vectors(counts, 2 * ne, lows):
                for mult in _fill(degs):
                    G = _graph_from_mult(nv, mult)
                    if not connected(G):
                        continue
                    key = canonical_form(G, counts)
                    if key not in reps:
                        reps[key] = (G, counts)
    return [reps[k] for k in sorted(reps, key=lambda k: (k[0], repr(k)))]


def _order_key(mg: MarkedGraph):
    return (mg.graph.num_vertices, repr(canonical_form(mg.graph, mg.label_sets())))


@lru_cache(maxsize=None)
def _marked_classes(g: int, n: int, injective: bool) -> Tuple[MarkedGraph, ...]:
    out = []
    for G, counts in _colored_classes(g, n, injective):
        taus = {t.tau_V for t in automorphisms(G, counts)}
        slots = [v for v, c in enumerate(counts) for _ in range(c)]
        seen = set()
        for marking in sorted(set(permutations(slots))):
            key = min(tuple(tv[v] for v in marking) for tv in taus)
            if key in seen:
                continue
            seen.add(key)
            out.append(MarkedGraph(G, key))
    out.sort(key=_order_key)
    return tuple(out)


def enumerate_stable_graphs(g: int) -> List[Graph]:
    """One representative per isomorphism class of connected genus-g graphs, all valences >= 3."""
    if g < 2:
        raise ValueError("stable unmarked graphs need genus >= 2")
    return [mg.graph for mg in _marked_classes(g, 0, True)]


def enumerate_marked_graphs(g: int, n: int) -> List[MarkedGraph]:
    """Stable connected genus-g graphs with an injective n-marking (label-fixing isomorphisms)."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable range: need 2g - 2 + n > 0")
    return list(_marked_classes(g, n, True))


def enumerate_marked_graphs_p(g: int, n: int) -> List[MarkedGraph]:
    """Like :func:`enumerate_marked_graphs` but markings need not be injective."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable range: need 2g - 2 + n > 0")
    return list(_marked_classes(g, n, False))


# smoothing

def smooth_two_valent(G: Graph, keep: Sequence[int] = ()) -> Graph:
    """Erase 2-valent vertices (other than ``keep``) by joining their two edges.

    A component that is a cycle of 2-valent vertices collapses to a single
    vertex carrying one loop.
    """
    alive_v = set(range(G.num_vertices))
    s = dict(enumerate(G.s))
    r = dict(enumerate(G.r))
    inc: Dict[int, List[int]] = {v: list(G.incident[v]) for v in alive_v}
    keep = set(keep)
    changed = True
    while changed:
        changed = False
        for v in sorted(alive_v):
            if v in keep or len(inc[v]) != 2:
                continue
            h1, h2 = inc[v]
            if s[h1] == h2:
                continue  # a bare loop: the cycle has already collapsed
            a, b = s[h1], s[h2]
            if r[a] == v or r[b] == v:
                continue
            s[a], s[b] = b, a
            for h in (h1, h2):
                del s[h], r[h]
            alive_v.discard(v)
            del inc[v]
            changed = True
    return _compact(alive_v, s, r)


def _compact(alive_v, s: Dict[int, int], r: Dict[int, int]) -> Graph:
    vs = sorted(alive_v)
    vmap = {v: i for i, v in enumerate(vs)}
    hs = sorted(s)
    hmap = {h: i for i, h in enumerate(hs)}
    return Graph(len(vs), tuple(hmap[s[h]] for h in hs), tuple(vmap[r[h]] for h in hs))


def forget_markings(mg: MarkedGraph) -> Graph:
    """Drop the marking and stabilise by smoothing 2-valent vertices."""
    return smooth_two_valent(mg.graph)


# orbisums

def z_G_laurent(G: Graph, auts: Optional[List[Automorphism]] = None) -> PLaurent:
    """``(-1)^{|E|} sum_tau sgn(tau_E) P(tau_V) P(tau_E) / P(tau_H)`` as a Laurent polynomial."""
    acc: Dict[Tuple, Fraction] = {}
    base = -1 if G.num_edges % 2 else 1
    for tau in auts if auts is not None else automorphisms(G):
        sgn, cV, cE, cH = aut_sign_and_cycles(G, tau)
        mono: Dict[int, int] = {}
        for part in cV:
            mono[part] = mono.get(part, 0) + 1
        for part in cE:
            mono[part] = mono.get(part, 0) + 1
        for part in cH:
            mono[part] = mono.get(part, 0) - 1
        key = PLaurent.normalize(mono)
        acc[key] = acc.get(key, 0) + base * sgn
    return PLaurent(acc)


def z_G(G: Graph, N: int) -> PSeries:
    return z_G_laurent(G).expand(N)


def _weighted_contribution(G: Graph) -> PLaurent:
    auts = automorphisms(G)
    return z_G_laurent(G, auts) * Fraction(1, len(auts))


def z_g_graph_oracle_laurent(g: int, jobs: int = 1) -> PLaurent:
    graphs = enumerate_stable_graphs(g)
    if jobs > 1 and len(graphs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_weighted_contribution, graphs))
    else:
        parts = [_weighted_contribution(G) for G in graphs]
    total = PLaurent()
    for p in parts:
        total = total + p
    return total


def z_g_graph_oracle(g: int, N: int, jobs: int = 1) -> PSeries:
    """``sum_G z_G / |Aut G|`` over the stable genus-g graphs, expanded to degree N."""
    return z_g_graph_oracle_laurent(g, jobs).expand(N)


def chi_orb(g: int, n: int) -> Fraction:
    """Closed form ``(-1)^{n+1} (g+n-2)!/g! * B_g`` of the marked orbifold Euler characteristic."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable range: need 2g - 2 + n > 0")
    sign = -1 if (n + 1) % 2 else 1
    return sign * Fraction(factorial(g + n - 2), factorial(g)) * bernoulli(g)


def chi_orb_oracle(g: int, n: int) -> Fraction:
    """``sum (-1)^{|E|}/|Aut|`` over stable graphs with arbitrary n-markings, by enumeration."""
    total = Fraction(0)
    for mg in enumerate_marked_graphs_p(g, n):
        sign = -1 if mg.graph.num_edges % 2 else 1
        total += Fraction(sign, len(marked_automorphisms(mg)))
    return total


def kgn_euler_oracle(g: int, n: int) -> int:
    """Euler characteristic of the marked graph complex counted on generators.

    Sums ``(-1)^{|E|}`` over marked classes whose automorphisms all act on
    edges by even permutations.  Markings are injective for ``g >= 1``; in
    genus 0 no stable tree has an injective marking, and the complex is the
    one of marked trees with markings allowed to coincide.
    """
    total = 0
    classes = enumerate_marked_graphs(g, n) if g >= 1 else enumerate_marked_graphs_p(g, n)
    for mg in classes:
        G = mg.graph
        if all(aut_sign_and_cycles(G, t)[0] == 1 for t in marked_automorphisms(mg)):
            total += -1 if G.num_edges % 2 else 1
    return total


def default_jobs() -> int:
    env = os.environ.get("TOPWEIGHT_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# named graphs used throughout the tests and examples

def theta_graph() -> Graph:
    return Graph.from_edges(2, [(0, 1), (0, 1), (0, 1)])


def dumbbell_graph() -> Graph:
    return Graph.from_edges(2, [(0, 0), (0, 1), (1, 1)])


def figure_eight_graph() -> Graph:
    return Graph.from_edges(1, [(0, 0), (0, 0)])
