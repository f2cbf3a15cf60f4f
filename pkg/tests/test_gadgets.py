import random
from itertools import combinations

import pytest

from invlab.connectivity import (
    is_eulerian,
    is_k_arc_strong,
    is_k_strong,
    ug_edge_connectivity_at_least,
)
from invlab.core import Graph, PreconditionError, induced, invert_family
from invlab.exact import chromatic_number, cut_cover_number, exhaust_single_sets
from invlab.gadgets import (
    GADGETS,
    CutCoverLayout,
    MEkSATInstance,
    cutcover_family,
    cutcover_to_arcstrong,
    cutcover_to_strong,
    has_sink_or_source,
    meksat_assignment_set,
    meksat_digraph,
    meksat_lift,
    sizet_order,
    witness_arbn1,
    witness_arbn1_t,
    witness_extreminf,
    witness_sizet,
    witness_T1,
    witness_T2,
)


def _path(n):
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


GRAPHS = {"K2": Graph.complete(2), "P3": _path(3), "K3": Graph.complete(3)}


def _arc_strong(k):
    return lambda d: bool(is_k_arc_strong(d, k))


def _strong(k):
    return lambda d: bool(is_k_strong(d, k))


def _random_instance(seed):
    rng = random.Random(seed)
    m = rng.randint(3, 4)
    clauses = {frozenset(rng.sample(range(m), 3)) for _ in range(rng.randint(1, 4))}
    return MEkSATInstance(m, tuple(sorted(clauses, key=sorted)), 1)


# ---------------------------------------------------------------- MEkSAT

def test_meksat_small_example():
    inst = MEkSATInstance(3, (frozenset({0, 1, 2}),), 1)
    d = meksat_digraph(inst)
    assert d.n == 7 and d.is_oriented()
    assert inst.satisfied_by(0b001)
    x = meksat_assignment_set(inst, 0b001)
    assert is_k_strong(invert_family(d, [x]), 1)
    assert not is_k_arc_strong(d, 1)


def test_meksat_rejects_bad_arity():
    with pytest.raises(PreconditionError):
        MEkSATInstance(4, (frozenset({0, 1}),), 1)
    with pytest.raises(PreconditionError):
        MEkSATInstance(2, (frozenset({0, 1, 2}),), 1)


@pytest.mark.parametrize("k", [1, 2])
def test_meksat_size_formula_and_s_block(k):
    inst = MEkSATInstance(2 * k + 2, (frozenset(range(2 * k + 1)), frozenset(range(1, 2 * k + 2))), k)
    d = meksat_digraph(inst)
    assert d.n == (2 * k + 1) + inst.num_vars + len(inst.clauses)
    assert is_k_strong(induced(d, (1 << (2 * k + 1)) - 1), k)


def test_meksat_equivalence_on_30_instances():
    for seed in range(30):
        inst = _random_instance(seed)
        d = meksat_digraph(inst)
        sat = inst.satisfiable()
        strong = exhaust_single_sets(d, _strong(1))
        arc = exhaust_single_sets(d, _arc_strong(1))
        assert bool(strong) == bool(arc) == sat
        for truth in inst.solutions():
            assert is_k_strong(invert_family(d, [meksat_assignment_set(inst, truth)]), 1)


def test_meksat_unsatisfiable_instance():
    # every triple of five variables: any assignment has three equal values somewhere
    inst = MEkSATInstance(5, tuple(frozenset(c) for c in combinations(range(5), 3)), 1)
    assert not inst.satisfiable()
    d = meksat_digraph(inst)
    assert d.n == 18
    assert exhaust_single_sets(d, _arc_strong(1)) == []


def test_lift_preserves_satisfiability():
    sat = MEkSATInstance(3, (frozenset({0, 1, 2}),), 1)
    # every triple of five variables; unsatisfiable as above
    unsat = MEkSATInstance(5, tuple(frozenset(c) for c in combinations(range(5), 3)), 1)
    assert sat.satisfiable() and not unsat.satisfiable()
    for inst in (sat, unsat):
        lifted = meksat_lift(inst)
        assert lifted.k == 2 and all(len(c) == 5 for c in lifted.clauses)
        assert lifted.num_vars == inst.num_vars + 2 * (inst.k + 3)
        assert lifted.satisfiable() == inst.satisfiable()


def test_lift_on_seeded_instances():
    for seed in range(10):
        inst = _random_instance(seed)
        assert meksat_lift(inst).satisfiable() == inst.satisfiable()


# ------------------------------------------------------------ cut covers

@pytest.mark.parametrize("name", ["K2", "P3", "K3"])
def test_cutcover_size_formulas(name):
    g = GRAPHS[name]
    for k in (1, 2):
        size = g.n + (2 * k + 1) * len(g.edges) + 2 * k + 1
        assert cutcover_to_arcstrong(g, k).n == size == CutCoverLayout(g.n, k, g.edges).size
        assert cutcover_to_strong(g, k).n == size


def test_k3_arc_gadget_has_15_vertices():
    assert cutcover_to_arcstrong(Graph.complete(3), 1).n == 15


@pytest.mark.parametrize("name, cc", [("K2", 1), ("P3", 1), ("K3", 2)])
def test_cutcover_gadget_equalities(name, cc):
    g = GRAPHS[name]
    assert cut_cover_number(g) == cc
    for build, test in ((cutcover_to_arcstrong, _arc_strong(1)), (cutcover_to_strong, _strong(1))):
        d = build(g, 1)
        fam = cutcover_family(g, 1)
        assert len(fam) == cc and test(invert_family(d, fam))
        assert not test(d)
        singles = exhaust_single_sets(d, test)
        assert bool(singles) == (cc == 1)


@pytest.mark.parametrize("name", ["K2", "P3", "K3"])
def test_cutcover_family_upper_bound_at_k2(name):
    g = GRAPHS[name]
    fam = cutcover_family(g, 2)
    assert is_k_arc_strong(invert_family(cutcover_to_arcstrong(g, 2), fam), 2)
    assert is_k_strong(invert_family(cutcover_to_strong(g, 2), fam), 2)


def test_cutcover_family_lifts_first_cutting_set():
    g = Graph.complete(3)
    lay = CutCoverLayout(3, 1, g.edges)
    fam = cutcover_family(g, 1)
    for e in range(len(g.edges)):
        assert sum(x >> lay.z(e, 1) & 1 for x in fam) == 1


def test_cc_is_log_chromatic_for_small_graphs():
    for g in GRAPHS.values():
        chi = chromatic_number(g)
        assert cut_cover_number(g) == (chi - 1).bit_length()


# ------------------------------------------------------- sink witnesses

def test_sizet_small():
    d, s = witness_sizet(1)
    assert d.n == 3 == sizet_order(1) and s == 0
    assert has_sink_or_source(d, s)


def test_sizet_two_survives_every_single_inversion():
    d, s = witness_sizet(2)
    assert d.n == 6 and ug_edge_connectivity_at_least(d, 2)
    assert exhaust_single_sets(d, lambda e: not has_sink_or_source(e, s)) == []


def test_sizet_orders():
    assert [sizet_order(t) for t in (1, 2, 3, 4)] == [3, 6, 15, 45]
    with pytest.raises(PreconditionError):
        witness_sizet(0)


def test_arbn1_needs_two_inversions():
    d = witness_arbn1(6)
    assert d.n == 6 and witness_arbn1_t(6) == 2
    assert exhaust_single_sets(d, lambda e: not has_sink_or_source(e)) == []


@pytest.mark.parametrize("n", range(3, 17))
def test_arbn1_order_and_edge_connectivity(n):
    d = witness_arbn1(n)
    assert d.n == n and ug_edge_connectivity_at_least(d, 2)
    assert sizet_order(witness_arbn1_t(n)) <= n


def test_extreminf_edge_connectivity_and_digons():
    d = witness_extreminf(10, 2)
    assert d.n == 10 and ug_edge_connectivity_at_least(d, 4)
    rng = random.Random(0)
    for _ in range(20):
        fam = [rng.getrandbits(10) for _ in range(3)]
        assert set(invert_family(d, fam).digons()) == set(d.digons())
    with pytest.raises(PreconditionError):
        witness_extreminf(3, 2)


def test_extreminf_needs_more_than_one_inversion():
    d = witness_extreminf(8, 2)
    assert exhaust_single_sets(d, _arc_strong(2)) == []


# -------------------------------------------------- tournament witnesses

def test_t1_k2():
    t = witness_T1(2)
    assert t.n == 7 and t.is_tournament()
    assert is_eulerian(induced(t, 0b111))
    assert exhaust_single_sets(t, _strong(2)) == []


def test_t2_k2():
    t = witness_T2(2)
    assert t.n == 6 and t.is_tournament()
    assert exhaust_single_sets(t, _arc_strong(2)) == []


@pytest.mark.parametrize("k", [2, 3, 4])
def test_witness_orders(k):
    assert witness_T1(k).n == 5 * k - 3
    assert witness_T2(k).n == 4 * k - 2
    assert is_eulerian(induced(witness_T2(k), (1 << (2 * k - 1)) - 1))


def test_witness_preconditions():
    with pytest.raises(PreconditionError):
        witness_T1(1)
    with pytest.raises(PreconditionError):
        witness_T2(1)
    with pytest.raises(PreconditionError):
        witness_arbn1(2)


def test_registry_names_real_builders():
    import invlab.gadgets as gadgets
    for kind, (builder, prop, claim) in GADGETS.items():
        assert callable(getattr(gadgets, builder)) and prop and claim
