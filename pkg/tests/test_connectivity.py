import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from invlab.connectivity import (
    CutWitness,
    MixedGraph,
    brute_force_k_strong,
    check_witness,
    complete_to_eulerian_tournament,
    eulerian_orientation,
    is_eulerian,
    is_k_arc_strong,
    is_k_strong,
    local_vertex_connectivity,
    strong_components,
    ug_edge_connectivity_at_least,
)
from invlab.core import (
    Digraph,
    PreconditionError,
    Tournament,
    random_digraph,
    random_tournament,
    rotative_tournament,
    transitive_tournament,
)
from invlab.exact import enumerate_tournaments

seeds = st.integers(0, 10**6)


def _nx(d: Digraph) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.arcs())
    return g


def _nx_kappa(d, g):
    """Vertex connectivity from networkx local connectivities over pairs with no arc u->v."""
    values = [nx.node_connectivity(g, u, v) for u in range(d.n) for v in range(d.n)
              if u != v and not d.has_arc(u, v)]
    return min(values, default=d.n - 1)


def _all_labeled(n):
    m = n * (n - 1) // 2
    for code in range(1 << m):
        yield Tournament.from_bits(n, format(code, f"0{m}b") if m else "")


def test_components_examples():
    assert strong_components(rotative_tournament(1)) == [[0, 1, 2]]
    assert strong_components(transitive_tournament(4)) == [[0], [1], [2], [3]]
    out = [0] * 6
    for block in (0, 3):
        for i in range(3):
            out[block + i] |= 1 << (block + (i + 1) % 3)
    for u in range(3):
        out[u] |= 0b111000
    comps = strong_components(Digraph(6, out))
    assert comps == [[0, 1, 2], [3, 4, 5]]


def test_arc_strong_examples():
    assert is_k_arc_strong(rotative_tournament(2), 2)
    v = is_k_arc_strong(transitive_tournament(5), 1)
    assert not v and v.witness.kind == "arc-side" and v.witness.members == (4,)
    assert check_witness(transitive_tournament(5), v)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_rotative_is_k_strong(k):
    assert is_k_strong(rotative_tournament(k), k)
    assert not is_k_strong(rotative_tournament(k), k + 1)


def test_tt5_not_strong_with_empty_separator():
    v = is_k_strong(transitive_tournament(5), 1)
    assert not v and v.witness.kind == "vertex-set" and v.witness.members == ()
    assert check_witness(transitive_tournament(5), v)


def test_order_violation_witness():
    v = is_k_strong(rotative_tournament(1), 3)
    assert not v and v.witness.note == "order"


@pytest.mark.parametrize("k", [1, 2])
def test_k_strong_matches_brute_force_on_five_vertex_classes(k):
    classes = enumerate_tournaments(5)
    assert len(classes) == 12
    for t in classes:
        assert bool(is_k_strong(t, k)) == brute_force_k_strong(t, k)


def test_eulerian_examples():
    assert is_eulerian(rotative_tournament(3))
    assert not is_eulerian(transitive_tournament(3))
    assert is_eulerian(Digraph.from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))


@pytest.mark.parametrize("n, count", [(1, 1), (3, 2), (5, 24)])
def test_labeled_eulerian_counts(n, count):
    assert sum(is_eulerian(t) for t in _all_labeled(n)) == count


def test_arc_strong_iff_eulerian_at_order_five():
    agree = strong = 0
    for t in _all_labeled(5):
        a = bool(is_k_arc_strong(t, 2))
        agree += a == is_eulerian(t)
        strong += a
    assert agree == 1024 and strong == 24


@given(st.integers(2, 8), seeds, st.integers(1, 3))
def test_verifiers_match_networkx(n, seed, k):
    d = random_digraph(n, seed, p=0.6, digon_p=0.3)
    g = _nx(d)
    ks = bool(is_k_strong(d, k))
    kas = bool(is_k_arc_strong(d, k))
    assert ks == (n >= k + 1 and _nx_kappa(d, g) >= k)
    assert kas == (nx.edge_connectivity(g) >= k)
    assert ks == brute_force_k_strong(d, k)
    if ks:
        assert kas


@given(st.integers(3, 9), seeds, st.integers(1, 3))
def test_negative_witnesses_recheck(n, seed, k):
    t = random_tournament(n, seed)
    for verdict in (is_k_strong(t, k), is_k_arc_strong(t, k)):
        if not verdict:
            assert check_witness(t, verdict)


@given(st.integers(2, 8), seeds)
def test_local_connectivity_separator(n, seed):
    t = random_tournament(n, seed)
    for u in range(n):
        for v in range(n):
            if u != v and not t.has_arc(u, v):
                value, sep = local_vertex_connectivity(t, u, v)
                assert value == nx.node_connectivity(_nx(t), u, v)
                assert sep.bit_count() == value and not (sep >> u & 1 or sep >> v & 1)


def test_verdict_json_shape():
    assert is_k_strong(rotative_tournament(2), 2).to_json() == {
        "property": "k-strong", "k": 2, "verdict": True, "witness": None}


def test_orientation_of_undirected_cycle():
    m = MixedGraph(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))
    d = eulerian_orientation(m)
    assert is_eulerian(d) and d.num_arcs() == 4


def test_orientation_keeps_oriented_input():
    r = rotative_tournament(2)
    assert eulerian_orientation(MixedGraph(5, arcs=frozenset(r.arcs()))) == r


def test_orientation_infeasible_singleton():
    arcs = {(0, 1), (0, 2), (0, 3), (0, 4)}
    m = MixedGraph(7, frozenset({(0, 5), (0, 6), (5, 6), (1, 2), (3, 4)}), frozenset(arcs))
    w = eulerian_orientation(m)
    assert isinstance(w, CutWitness) and w.kind == "infeasible-set" and w.members == (0,)


def test_orientation_odd_degree_rejected():
    with pytest.raises(PreconditionError):
        eulerian_orientation(MixedGraph(3, frozenset({(0, 1)})))


@given(st.integers(2, 9), seeds)
def test_orientation_balances_and_keeps_arcs(n, seed):
    rng = random.Random(seed)
    # an eulerian multigraph from random closed walks, split into edges and arcs
    pairs = set()
    for _ in range(3):
        walk = rng.sample(range(n), rng.randint(2, n))
        if len(walk) < 3:
            continue
        for a, b in zip(walk, walk[1:] + walk[:1]):
            key = (min(a, b), max(a, b))
            if key in pairs:
                pairs.discard(key)
            else:
                pairs.add(key)
    pairs = sorted(pairs)
    if any(sum(v in p for p in pairs) % 2 for v in range(n)):
        return
    arcs = frozenset(p for p in pairs if rng.random() < 0.4)
    edges = frozenset(p for p in pairs if p not in arcs)
    m = MixedGraph(n, edges, arcs)
    res = eulerian_orientation(m)
    if isinstance(res, CutWitness):
        assert m.violates(set(res.members))
    else:
        assert is_eulerian(res)
        assert all(res.has_arc(u, v) for u, v in arcs)


def test_complete_to_eulerian_examples():
    for seed in range(10):
        t = random_tournament(5, seed)
        assert is_k_arc_strong(complete_to_eulerian_tournament(t, 0), 2)
    r = rotative_tournament(2)
    out = complete_to_eulerian_tournament(r, [0])
    assert out.out[0] == r.out[0] and out.inn[0] == r.inn[0] and is_eulerian(out)


def test_complete_to_eulerian_rejects_unbalanced():
    with pytest.raises(PreconditionError):
        complete_to_eulerian_tournament(transitive_tournament(5), [0])


def test_edge_connectivity_counts_digons_twice():
    d = Digraph.from_arcs(2, [(0, 1), (1, 0)])
    assert ug_edge_connectivity_at_least(d, 2) and not ug_edge_connectivity_at_least(d, 3)
