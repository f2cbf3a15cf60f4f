import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invlab.connectivity import is_k_strong, reach
from invlab.construct import (
    EmbeddingError,
    embed_layers,
    hamiltonian_path,
    lemma_6ab_set,
    make_2strong,
    make_kstrong_2k,
    make_strong_k1,
    single_inversion_19k,
    single_inversion_layered,
    three_inversions_11k,
    transform_between,
    transform_certificate,
    tt_construct,
    tt_value,
)
from invlab.core import (
    PreconditionError,
    Tournament,
    converse,
    dominates,
    induced,
    invert,
    invert_family,
    random_tournament,
    rotative_tournament,
    transitive_tournament,
)
from invlab.exact import enumerate_tournaments, sinv
from invlab.median import feedback_order

seeds = st.integers(0, 10**6)


def _mask(vs):
    return sum(1 << v for v in vs)


def _c3_to_c3():
    out = [0] * 6
    for block in (0, 3):
        for i in range(3):
            out[block + i] |= 1 << (block + (i + 1) % 3)
    for u in range(3):
        out[u] |= 0b111000
    return Tournament(6, out)


@given(st.integers(1, 12), seeds)
def test_hamiltonian_path(n, seed):
    t = random_tournament(n, seed)
    p = hamiltonian_path(t)
    assert sorted(p) == list(range(n))
    assert all(t.has_arc(a, b) for a, b in zip(p, p[1:]))


def test_k1_examples():
    assert make_strong_k1(rotative_tournament(1)).family_size == 0
    c = make_strong_k1(transitive_tournament(3))
    assert c.family.as_lists() == [[0, 2]]
    assert c.apply(transitive_tournament(3)) == Tournament.from_bits(3, "101")
    assert make_strong_k1(transitive_tournament(7)).family_size == 1
    with pytest.raises(PreconditionError):
        make_strong_k1(transitive_tournament(2))


@given(st.integers(3, 14), seeds)
def test_k1_always_verified(n, seed):
    c = make_strong_k1(random_tournament(n, seed))
    assert c.verified and c.family_size <= 1


def test_k2_on_tt5_gives_r5():
    tt5 = transitive_tournament(5)
    c = make_2strong(tt5)
    assert c.family.as_lists() == [[0, 1, 3, 4], [0, 4]]
    result = c.apply(tt5)
    assert all(result.out_degree(v) == 2 for v in range(5))


def test_k2_on_c3_to_c3():
    t = _c3_to_c3()
    c = make_2strong(t)
    assert c.family_size == 2
    a, b = c.family.as_lists()
    assert len(a) == len(b) == 4 and len(set(a) & set(b)) == 2
    # one set is the first triangle plus a vertex of the second, and vice versa
    assert len(set(a) & {0, 1, 2}) == 3 and len(set(b) & {3, 4, 5}) == 3


@pytest.mark.parametrize("n", [5, 6, 7])
def test_k2_on_all_classes(n):
    sizes, optimum = [], []
    for t in enumerate_tournaments(n):
        c = make_2strong(t)
        assert c.verified and c.family_size <= 2
        if n == 5:
            opt = sinv(t, 2, "k-strong")
            assert c.family_size >= opt
            sizes.append(c.family_size)
            optimum.append(opt)
    if n == 5:
        # the worst case over all classes is optimal
        assert max(sizes) == max(optimum) == 2


def test_k2_precondition():
    with pytest.raises(PreconditionError):
        make_2strong(transitive_tournament(4))


def test_sweep_examples():
    assert make_kstrong_2k(rotative_tournament(2), 2).family_size == 0
    c = make_kstrong_2k(transitive_tournament(7), 3)
    assert c.verified and c.family_size <= 6
    for seed in range(100):
        c = make_kstrong_2k(random_tournament(6, seed), 2)
        assert c.verified and c.family_size <= 4
    with pytest.raises(PreconditionError):
        make_kstrong_2k(transitive_tournament(4), 2)


@given(st.integers(1, 3), st.integers(0, 6), seeds)
def test_sweep_bound_property(k, extra, seed):
    t = random_tournament(2 * k + 1 + extra, seed)
    c = make_kstrong_2k(t, k)
    assert c.verified and c.family_size <= 2 * k


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_tt_construct_matches_values(k):
    for n in range(2 * k + 1, 4 * k + 1):
        c = tt_construct(n, k)
        assert c.verified and c.family_size == tt_value(n, k) == (1 if n >= 3 * k else 2)


def test_tt_examples():
    assert tt_construct(5, 2).family_size == 2
    assert tt_construct(9, 3).family_size == 1
    assert sinv(transitive_tournament(5), 2, "k-arc-strong") == 2
    with pytest.raises(PreconditionError):
        tt_construct(4, 2)


def _lemma_contract(t, a, b, k, x):
    r = invert(t, x)
    full = (1 << t.n) - 1
    amask, bmask = _mask(a), _mask(b)
    for size in range(k):
        for y in combinations(range(t.n), size):
            alive = full & ~_mask(y)
            for v in a:
                if v not in y and not reach(r.out, v, alive) & bmask & alive:
                    return False
            for v in b:
                if v not in y and not reach(r.inn, v, alive) & amask & alive:
                    return False
    return True


def test_lemma_set_contract_k1_200_tournaments():
    for seed in range(200):
        t = random_tournament(12, seed)
        order = list(feedback_order(t).order)
        b, a = order[:6], order[6:]
        x = lemma_6ab_set(t, a, b, 1, a, b)
        assert x.bit_count() == 4
        assert (x & _mask(a)).bit_count() == (x & _mask(b)).bit_count() == 2
        assert _lemma_contract(t, a, b, 1, x)


def test_lemma_set_contract_k2():
    for seed in range(10):
        t = random_tournament(24, seed)
        order = list(feedback_order(t).order)
        b, a = order[:12], order[12:]
        x = lemma_6ab_set(t, a, b, 2, a, b)
        assert (x & _mask(a)).bit_count() == (x & _mask(b)).bit_count() == 4
        assert _lemma_contract(t, a, b, 2, x)


def test_lemma_set_preconditions():
    t = random_tournament(12, 0)
    with pytest.raises(PreconditionError):
        lemma_6ab_set(t, range(5), range(5, 12), 1)


def test_one19k_small_sample_and_threshold():
    for seed in range(20):
        t = random_tournament(17, seed)
        c = single_inversion_19k(t, 1, short_circuit=False)
        assert c.verified and c.family_size == 1
    assert single_inversion_19k(rotative_tournament(8), 1).family_size == 0
    with pytest.raises(PreconditionError):
        single_inversion_19k(random_tournament(16, 0), 1)


def test_one19k_on_transitive():
    c = single_inversion_19k(transitive_tournament(36), 2)
    assert c.verified and c.family_size == 1


def test_three11k_keeps_end_blocks():
    for seed in range(15):
        t = random_tournament(20, seed)
        c = three_inversions_11k(t, 2, short_circuit=False)
        assert c.verified and c.family_size == 3
        order = list(feedback_order(t).order)
        result = c.apply(t)
        for block in (order[:8], order[-8:]):
            assert induced(result, block) == induced(t, block)
    with pytest.raises(PreconditionError):
        three_inversions_11k(random_tournament(19, 0), 2)


def test_three11k_local_order_with_seed():
    c = three_inversions_11k(random_tournament(24, 5), 2, seed=3, order_method="local", short_circuit=False)
    assert c.verified and c.family_size == 3


def test_layered_small_and_structure():
    for t in enumerate_tournaments(4):
        c = single_inversion_layered(t, 1, short_circuit=False)
        assert c.verified and c.family_size == 1
    for seed in range(200):
        t = random_tournament(16, seed)
        c = single_inversion_layered(t, 1, short_circuit=False)
        assert c.verified and c.family_size == 1
    t = random_tournament(40, 1)
    a1, a2, a3 = embed_layers(t, 2)
    assert len(a1) == len(a3) == 2 and len(a2) == 3
    assert dominates(t, _mask(a1), _mask(a2 + a3)) and dominates(t, _mask(a2), _mask(a3))


def test_layered_reports_starvation():
    with pytest.raises(EmbeddingError):
        embed_layers(rotative_tournament(2), 2)


def test_transform_examples():
    t = random_tournament(6, 1)
    assert len(transform_between(t, t)) == 0
    tt5 = transitive_tournament(5)
    fam = transform_between(tt5, converse(tt5))
    assert len(fam) <= 4 and invert_family(tt5, fam) == converse(tt5)
    assert transform_certificate(tt5, converse(tt5)).verified


def test_transform_1000_pairs():
    for seed in range(1000):
        rng = random.Random(seed)
        n = rng.randint(1, 8)
        t1, t2 = random_tournament(n, seed), random_tournament(n, seed + 10**6)
        fam = transform_between(t1, t2)
        assert len(fam) <= max(0, n - 1) and invert_family(t1, fam) == t2


def test_transform_rejects_mismatch():
    with pytest.raises(PreconditionError):
        transform_between(random_tournament(4, 0), random_tournament(5, 0))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_monotone_in_n_for_k1(n):
    census = max(sinv(t, 1, "k-strong") for t in enumerate_tournaments(n))
    larger = max(sinv(random_tournament(n + 1, f"{n}:{s}"), 1, "k-strong") for s in range(30))
    assert larger <= census


def test_certificates_are_verified_by_an_independent_check():
    t = random_tournament(9, 4)
    for c in (make_strong_k1(t), make_kstrong_2k(t, 2), three_inversions_11k(t, 1, short_circuit=False)):
        assert is_k_strong(c.apply(t), c.k)
