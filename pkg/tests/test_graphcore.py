import json
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import factorial

import pytest

from topweight.arith import Partition, bernoulli
from topweight.graphcore import (
    Automorphism,
    Graph,
    MarkedGraph,
    aut_sign_and_cycles,
    automorphisms,
    canonical_form,
    chi_orb,
    chi_orb_oracle,
    connected,
    dumbbell_graph,
    edge_set,
    enumerate_marked_graphs,
    enumerate_marked_graphs_p,
    enumerate_stable_graphs,
    figure_eight_graph,
    forget_markings,
    genus,
    kgn_euler_oracle,
    marked_automorphisms,
    smooth_two_valent,
    theta_graph,
    z_G,
    z_G_laurent,
    z_g_graph_oracle,
)
from topweight.symfunc import PLaurent


def naive_classes(g):
    """Stable genus-g multigraphs, deduplicated by minimising over every vertex relabelling."""
    seen = set()
    for nv in range(1, 2 * g - 1):
        ne = nv + g - 1
        pairs = [(u, v) for u in range(nv) for v in range(u, nv)]
        for edges in combinations_with_replacement(pairs, ne):
            deg = [0] * nv
            for u, v in edges:
                deg[u] += 1
                deg[v] += 1
            if min(deg) < 3:
                continue
            G = Graph.from_edges(nv, edges)
            if not connected(G):
                continue
            key = min(
                tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges)) for p in permutations(range(nv))
            )
            seen.add((nv, key))
    return seen


def brute_force_automorphisms(G):
    out = set()
    H = G.num_half_edges
    for th in permutations(range(H)):
        if any(th[G.s[h]] != G.s[th[h]] for h in range(H)):
            continue
        tv = [None] * G.num_vertices
        ok = True
        for h in range(H):
            v, w = G.r[h], G.r[th[h]]
            if tv[v] is None:
                tv[v] = w
            elif tv[v] != w:
                ok = False
                break
        if ok and None not in tv and len(set(tv)) == G.num_vertices:
            out.add((tuple(tv), th))
    return out


def test_basic_invariants():
    single = Graph(1, (), ())
    assert connected(single) and genus(single) == 0
    assert genus(theta_graph()) == 2
    assert genus(figure_eight_graph()) == 2
    assert not connected(Graph.from_edges(2, [(0, 0)]))
    assert len(edge_set(theta_graph())) == 3


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(1, (0,), (0,))
    with pytest.raises(ValueError):
        Graph(1, (1, 2, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        Graph(1, (1, 0), (0, 1))


def test_json_round_trip():
    mg = MarkedGraph(dumbbell_graph(), (1, 0))
    data = json.loads(json.dumps(mg.to_json()))
    assert set(data) == {"vertices", "half_edges", "s", "r", "marking"}
    assert MarkedGraph.from_json(data) == mg


def test_genus_two_graphs():
    gs = enumerate_stable_graphs(2)
    assert len(gs) == 3
    keys = {canonical_form(G) for G in gs}
    assert keys == {canonical_form(theta_graph()), canonical_form(dumbbell_graph()), canonical_form(figure_eight_graph())}
    orders = {canonical_form(G): len(automorphisms(G)) for G in gs}
    assert orders[canonical_form(theta_graph())] == 12
    assert orders[canonical_form(dumbbell_graph())] == 8
    assert orders[canonical_form(figure_eight_graph())] == 8


@pytest.mark.parametrize("g", [2, 3])
def test_enumeration_matches_naive(g):
    gs = enumerate_stable_graphs(g)
    assert len(gs) == len(naive_classes(g))
    assert len({canonical_form(G) for G in gs}) == len(gs)
    for G in gs:
        assert connected(G) and genus(G) == g and min(G.valences()) >= 3


def test_genus_three_orbisum_vanishes():
    total = sum(Fraction((-1) ** G.num_edges, len(automorphisms(G))) for G in enumerate_stable_graphs(3))
    assert total == -bernoulli(3) / 6 == 0


def test_enumeration_order_is_deterministic():
    a = enumerate_stable_graphs(3)
    assert [G.num_vertices for G in a] == sorted(G.num_vertices for G in a)


def test_enumeration_rejects_low_genus():
    with pytest.raises(ValueError):
        enumerate_stable_graphs(1)


@pytest.mark.parametrize("g", [2, 3])
def test_automorphisms_match_brute_force(g):
    for G in enumerate_stable_graphs(g):
        if G.num_half_edges > 8:
            continue
        ours = {(a.tau_V, a.tau_H) for a in automorphisms(G)}
        assert len(ours) == len(automorphisms(G))
        assert ours == brute_force_automorphisms(G)


@pytest.mark.parametrize("g", [2, 3])
def test_automorphisms_form_a_group(g):
    for G in enumerate_stable_graphs(g):
        auts = automorphisms(G)
        elems = {(a.tau_V, a.tau_H) for a in auts}
        assert (tuple(range(G.num_vertices)), tuple(range(G.num_half_edges))) in elems
        for a in auts:
            assert a.is_valid_for(G)
            inv = a.inverse()
            assert (inv.tau_V, inv.tau_H) in elems
        for a in auts[:6]:
            for b in auts:
                c = a.compose(b)
                assert (c.tau_V, c.tau_H) in elems


def test_trivial_graph_automorphisms():
    assert len(automorphisms(Graph(1, (), ()))) == 1


def test_sign_and_cycles_on_theta():
    G = theta_graph()
    ident = Automorphism.identity(G)
    assert aut_sign_and_cycles(G, ident) == (1, (1, 1), (1, 1, 1), (1,) * 6)
    seen = set()
    for tau in automorphisms(G):
        seen.add(aut_sign_and_cycles(G, tau))
    # exchanging two edges
    assert (-1, (1, 1), (2, 1), (2, 2, 1, 1)) in seen
    # the flip swaps the vertices and reverses every edge
    assert (1, (2,), (1, 1, 1), (2, 2, 2)) in seen


def test_identity_term_is_p1_to_one_minus_g():
    for g in (2, 3):
        for G in enumerate_stable_graphs(g):
            sgn, cV, cE, cH = aut_sign_and_cycles(G, Automorphism.identity(G))
            mono = {1: len(cV) + len(cE) - len(cH)}
            assert mono == {1: 1 - g}


def test_theta_identity_contribution():
    G = theta_graph()
    lau = z_G_laurent(G) * Fraction(1, 12)
    assert lau.terms[PLaurent.normalize({1: -1})] == Fraction(-1, 12)


def test_dumbbell_and_figure_eight_cancel():
    total = z_G_laurent(dumbbell_graph()) * Fraction(1, 8) + z_G_laurent(figure_eight_graph()) * Fraction(1, 8)
    assert total.is_zero()
    assert (z_G(dumbbell_graph(), 6) + z_G(figure_eight_graph(), 6)).is_zero()


def test_genus_two_oracle_constant_term():
    assert z_g_graph_oracle(2, 6).constant() == 0


def test_marked_base_cases():
    (tripod,) = enumerate_marked_graphs_p(0, 3)
    assert tripod.graph.num_vertices == 1 and tripod.graph.num_edges == 0
    assert len(marked_automorphisms(tripod)) == 1
    (loop,) = enumerate_marked_graphs_p(1, 1)
    assert loop.graph.num_edges == 1 and len(marked_automorphisms(loop)) == 2


def test_marked_genus_zero_counts():
    # labelled trees: 1 + 3 for four points; 1 + 10 + 15 for five
    assert len(enumerate_marked_graphs_p(0, 4)) == 4
    assert len(enumerate_marked_graphs_p(0, 5)) == 26
    # no stable tree carries an injective marking
    assert enumerate_marked_graphs(0, 4) == []


def test_marked_graphs_are_stable_and_distinct():
    for g, n in [(1, 2), (1, 3), (2, 1), (2, 2)]:
        mgs = enumerate_marked_graphs(g, n)
        assert all(mg.is_stable() and mg.is_injective() and mg.genus() == g for mg in mgs)
        keys = {canonical_form(mg.graph, mg.label_sets()) for mg in mgs}
        assert len(keys) == len(mgs)


def test_chi_orb_base_cases():
    assert chi_orb(0, 3) == 1
    assert chi_orb(1, 1) == Fraction(-1, 2)
    assert chi_orb(2, 0) == Fraction(-1, 12)
    assert chi_orb(1, 2) == Fraction(1, 2)
    with pytest.raises(ValueError, match="unstable range"):
        chi_orb(0, 2)
    with pytest.raises(ValueError, match="unstable range"):
        chi_orb_oracle(1, 0)


def test_chi_orb_genus_two_by_hand():
    parts = [Fraction((-1) ** G.num_edges, len(automorphisms(G))) for G in enumerate_stable_graphs(2)]
    assert sorted(parts) == [Fraction(-1, 8), Fraction(-1, 12), Fraction(1, 8)]
    assert chi_orb_oracle(2, 0) == Fraction(-1, 12)


@pytest.mark.parametrize("g,n", [(g, n) for g in range(4) for n in range(5) if 2 * g - 2 + n > 0 and g + n <= 5])
def test_chi_orb_oracle_matches_closed_form(g, n):
    assert chi_orb_oracle(g, n) == chi_orb(g, n)


def test_kgn_sphere_counts():
    assert kgn_euler_oracle(2, 0) == 0
    for n in (4, 5):
        assert kgn_euler_oracle(0, n) == (-1) ** (n + 1) * factorial(n - 2)
    for n in (3, 4):
        assert kgn_euler_oracle(1, n) == (-1) ** n * factorial(n - 1) // 2


def test_smoothing_subdivided_theta():
    # theta with one edge subdivided twice
    G = Graph.from_edges(4, [(0, 1), (0, 1), (0, 2), (2, 3), (3, 1)])
    assert canonical_form(smooth_two_valent(G)) == canonical_form(theta_graph())


def test_smoothing_cycle_collapses_to_loop():
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    out = smooth_two_valent(tri)
    assert out.num_vertices == 1 and out.num_edges == 1 and out.is_loop(0)
    two = Graph.from_edges(2, [(0, 1), (0, 1)])
    out = smooth_two_valent(two)
    assert out.num_vertices == 1 and out.num_edges == 1


def test_smoothing_keeps_requested_vertices():
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert smooth_two_valent(tri, keep=[0, 1]).num_vertices == 2


def test_forget_markings_stabilises():
    # a loop at vertex 0 through a marked vertex 1, plus a second loop at 0
    mg = MarkedGraph(Graph.from_edges(2, [(0, 1), (1, 0), (0, 0)]), (1,))
    assert mg.is_stable()
    assert canonical_form(forget_markings(mg)) == canonical_form(figure_eight_graph())
