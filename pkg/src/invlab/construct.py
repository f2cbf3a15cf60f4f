"""Deterministic inversion families for strong connectivity of tournaments.

Every public function returns a Certificate whose family was applied and
re-checked by the flow-based verifier; failures raise VerificationError.
"""

from __future__ import annotations

from itertools import permutations

from .certificate import Certificate, certify
from .connectivity import is_k_strong, strong_components
from .core import (
    InversionFamily,
    InvlabError,
    PreconditionError,
    Tournament,
    VerificationError,
    bits,
    converse,
    dominates,
    induced,
    invert,
    invert_family,
    members,
    rotative_tournament,
    to_mask,
    transitive_tournament,
)
from .median import feedback_order


class EmbeddingError(InvlabError):
    pass


def _require_tournament(t) -> None:
    if not t.is_tournament():
        raise PreconditionError("input must be a tournament")


def _mask(vs) -> int:
    return sum(1 << v for v in vs)


def hamiltonian_path(t: Tournament) -> list[int]:
    """Insertion construction: every tournament has a hamiltonian path."""
    path: list[int] = []
    for v in range(t.n):
        if not path or t.has_arc(v, path[0]):
            path.insert(0, v)
        elif t.has_arc(path[-1], v):
            path.append(v)
        else:
            for i in range(len(path) - 1):
                if t.has_arc(path[i], v) and t.has_arc(v, path[i + 1]):
                    path.insert(i + 1, v)
                    break
    return path


def hamiltonian_cycle(t: Tournament) -> list[int] | None:
    """Brute force; only used on five-vertex tournaments."""
    rest = list(range(1, t.n))
    for p in permutations(rest):
        cyc = [0, *p]
        if all(t.has_arc(cyc[i], cyc[(i + 1) % t.n]) for i in range(t.n)):
            return cyc
    return None


# --------------------------------------------------------------------- k = 1

def make_strong_k1(t: Tournament) -> Certificate:
    _require_tournament(t)
    if t.n < 3:
        raise PreconditionError("a strong tournament needs at least 3 vertices")
    if is_k_strong(t, 1):
        return certify(t, (), "k-strong", 1, "make_strong_k1")
    path = hamiltonian_path(t)
    # not strong, so the ends of the path are joined first -> last
    return certify(t, [_mask((path[0], path[-1]))], "k-strong", 1, "make_strong_k1")


# --------------------------------------------------------------------- k = 2

_S4_ARCS = ((0, 1), (1, 2), (2, 3), (3, 0), (2, 0), (3, 1))  # a b c d


def _five_strong(t: Tournament) -> list[list[int]]:
    cyc = hamiltonian_cycle(t)
    plus, minus = [], []
    for i in range(5):
        u, v = cyc[i], cyc[(i + 2) % 5]
        (plus if t.has_arc(u, v) else minus).append(_mask((u, v)))
    # reversing the smaller chord class leaves every chord v_i -> v_{i+2}
    # (or every chord v_{i+2} -> v_i) and hence the rotative tournament
    return [plus if len(plus) <= 2 else minus]


def _five_templates(t: Tournament) -> list[list[int]]:
    comps = strong_components(t)
    sizes = [len(c) for c in comps]
    if sizes == [1, 1, 1, 1, 1]:
        v = [c[0] for c in comps]
        return [[_mask((v[0], v[1], v[3], v[4])), _mask((v[0], v[4]))]]
    if sizes == [4, 1]:
        x = comps[1][0]
        options = []
        for p in permutations(comps[0]):
            if all(t.has_arc(p[u], p[v]) for u, v in _S4_ARCS):
                a, b, c, d = p
                options.append([_mask((c, d, x)), _mask((c, d))])
        return options
    if sizes == [1, 3, 1]:
        x, y = comps[0][0], comps[2][0]
        return [[_mask((a, x, y))] for a in comps[1]]
    if sizes == [1, 1, 3]:
        x, y = comps[0][0], comps[1][0]
        options = []
        for a in comps[2]:
            b, c = [w for w in comps[2] if w != a]
            options.append([_mask((a, b, c, y)), _mask((a, x, y))])
        return options
    if sizes in ([1, 4], [3, 1, 1]):
        # same family: inverting V commutes with every inversion
        return _five_templates(converse(t))
    raise VerificationError(f"unexpected component sizes {sizes}")


def _two_strong_family(t: Tournament) -> list[int]:
    if is_k_strong(t, 2):
        return []
    n = t.n
    if n == 5:
        options = _five_strong(t) if len(strong_components(t)) == 1 else _five_templates(t)
        for fam in options:
            if is_k_strong(invert_family(t, fam), 2):
                return fam
        raise VerificationError("no five-vertex template applies")
    for v in range(n):
        if min(t.out_degree(v), t.in_degree(v)) >= 2:
            rest = [w for w in range(n) if w != v]
            sub = _two_strong_family(induced(t, _mask(rest)))
            return [_mask(rest[i] for i in bits(x)) for x in sub]
    comps = strong_components(t)
    if [len(c) for c in comps] != [3, 3]:
        raise VerificationError("no vertex of in- and out-degree 2 outside C3=>C3")
    first, second = comps
    for a in first:
        for d in second:
            fam = [_mask(first) | (1 << d), _mask(second) | (1 << a)]
            if is_k_strong(invert_family(t, fam), 2):
                return fam
    raise VerificationError("C3=>C3 sets failed")


def make_2strong(t: Tournament) -> Certificate:
    _require_tournament(t)
    if t.n < 5:
        raise PreconditionError("a 2-strong tournament needs at least 5 vertices")
    return certify(t, _two_strong_family(t), "k-strong", 2, "make_2strong")


# ----------------------------------------------------------------- 2k sweep

def kstrong_2k_family(t: Tournament, k: int) -> list[int]:
    n = t.n
    core = 2 * k + 1
    target = rotative_tournament(k)
    cur = t
    fam = []
    for i in range(2 * k):
        x = 1 << i
        for j in range(i + 1, core):
            if cur.has_arc(i, j) != target.has_arc(i, j):
                x |= 1 << j
        for j in range(core, n):
            if cur.has_arc(i, j) if i < k else cur.has_arc(j, i):
                x |= 1 << j
        if x.bit_count() >= 2:
            fam.append(x)
            cur = invert(cur, x)
    return fam


def make_kstrong_2k(t: Tournament, k: int) -> Certificate:
    _require_tournament(t)
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if t.n <= 2 * k:
        raise PreconditionError(f"need n >= 2k+1 = {2 * k + 1}")
    if is_k_strong(t, k):
        return certify(t, (), "k-strong", k, "make_kstrong_2k")
    return certify(t, kstrong_2k_family(t, k), "k-strong", k, "make_kstrong_2k")


# ------------------------------------------------------------ transitive case

def tt_value(n: int, k: int) -> int:
    if n < 2 * k + 1:
        raise PreconditionError(f"need n >= 2k+1 = {2 * k + 1}")
    return 1 if n >= 3 * k else 2


def tt_construct(n: int, k: int) -> Certificate:
    t = transitive_tournament(n)
    if tt_value(n, k) == 1:
        fam = [_mask(range(k)) | _mask(range(2 * k, n))]
    else:
        # v_1..v_n are vertices 0..n-1, so even positions are odd indices
        fam = [_mask(range(1, n, 2)), _mask(range(0, n, 2))]
    return certify(t, fam, "k-strong", k, "tt_construct")


# ------------------------------------------------------ median-order families

def _order_of(t: Tournament, block: int, seed=None) -> list[int]:
    verts = members(block)
    sub = feedback_order(induced(t, block), seed)
    return [verts[i] for i in sub.order]


def _side_sets(t, a_order, b_order, k):
    """A0/A1 and B0/B1: the last half-block of A weak towards B, and so on."""
    size = len(a_order)
    amask, bmask = _mask(a_order), _mask(b_order)
    a0 = [v for v in a_order[size - 2 * k:] if (t.out[v] & bmask).bit_count() < k]
    a1 = a_order[:2 * k - len(a0)]
    b0 = [v for v in b_order[:2 * k] if (t.inn[v] & amask).bit_count() < k]
    b1 = b_order[size - 2 * k + len(b0):]
    return a0, a1, b0, b1


def lemma_6ab_set(t: Tournament, a, b, k: int, a_order=None, b_order=None) -> int:
    """The single set X on A and B (|A| = |B| = 6k) with |X∩A| = |X∩B| = 2k."""
    amask, bmask = to_mask(t.n, a), to_mask(t.n, b)
    if amask & bmask or amask.bit_count() != 6 * k or bmask.bit_count() != 6 * k:
        raise PreconditionError("A and B must be disjoint sets of 6k vertices")
    a_order = list(a_order) if a_order is not None else _order_of(t, amask)
    b_order = list(b_order) if b_order is not None else _order_of(t, bmask)
    a0, a1, b0, b1 = _side_sets(t, a_order, b_order, k)
    x = _mask(a0 + a1 + b0 + b1)
    assert (x & amask).bit_count() == 2 * k and (x & bmask).bit_count() == 2 * k
    return x


def _already(t, k, provenance):
    if is_k_strong(t, k):
        return certify(t, (), "k-strong", k, provenance, {"short_circuit": True})
    return None


def single_inversion_19k(t: Tournament, k: int, seed=None, order_method: str = "auto",
                         short_circuit: bool = True) -> Certificate:
    _require_tournament(t)
    n = t.n
    if n < 19 * k - 2:
        raise PreconditionError(f"need n >= 19k-2 = {19 * k - 2}")
    done = short_circuit and _already(t, k, "single_inversion_19k")
    if done:
        return done
    order = list(feedback_order(t, seed, order_method).order)
    b_order, a_order = order[:6 * k], order[n - 6 * k:]
    x = lemma_6ab_set(t, _mask(a_order), _mask(b_order), k, a_order, b_order)
    return certify(t, [x], "k-strong", k, "single_inversion_19k")


def three_inversions_11k(t: Tournament, k: int, seed=None, order_method: str = "auto",
                         short_circuit: bool = True) -> Certificate:
    _require_tournament(t)
    n = t.n
    if n < 11 * k - 2:
        raise PreconditionError(f"need n >= 11k-2 = {11 * k - 2}")
    done = short_circuit and _already(t, k, "three_inversions_11k")
    if done:
        return done
    order = list(feedback_order(t, seed, order_method).order)
    b_order, a_order = order[:4 * k], order[n - 4 * k:]
    a0, a1, b0, b1 = _side_sets(t, a_order, b_order, k)
    x1, x2 = _mask(a0 + a1), _mask(b0 + b1)
    plan = {"A0": a0, "A1": a1, "B0": b0, "B1": b1}
    cert = certify(t, [x1, x2, x1 | x2], "k-strong", k, "three_inversions_11k", plan)
    result = cert.apply(t)
    for block in (_mask(a_order), _mask(b_order)):
        assert induced(result, block) == induced(t, block)
    return cert


# ----------------------------------------------------------- layered embedder

def embed_layers(t: Tournament, k: int) -> tuple[list[int], list[int], list[int]]:
    """A1 (k), A2 (2k-1), A3 (k) with A1 => A2 u A3 and A2 => A3.

    Each chosen vertex has the largest out-degree inside the current
    candidate set (smallest index on ties); candidates shrink to its
    out-neighbours, so all later choices are dominated by it.
    """
    cand = (1 << t.n) - 1
    picked = []
    for _ in range(3 * k - 1):
        if cand == 0:
            raise EmbeddingError(f"candidate set exhausted after {len(picked)} of {3 * k - 1} picks")
        v = max(bits(cand), key=lambda w: ((t.out[w] & cand).bit_count(), -w))
        picked.append(v)
        cand &= t.out[v]
    rest = members(cand)
    if len(rest) < k:
        raise EmbeddingError(f"only {len(rest)} vertices left for the last layer, need {k}")
    a1, a2, a3 = picked[:k], picked[k:], rest[:k]
    assert dominates(t, _mask(a1), _mask(a2 + a3)) and dominates(t, _mask(a2), _mask(a3))
    return a1, a2, a3


def single_inversion_layered(t: Tournament, k: int, short_circuit: bool = True) -> Certificate:
    _require_tournament(t)
    if k < 1:
        raise PreconditionError("k must be at least 1")
    done = short_circuit and _already(t, k, "single_inversion_layered")
    if done:
        return done
    a1, a2, a3 = embed_layers(t, k)
    amask = _mask(a1 + a2 + a3)
    inside = 0
    for v in range(t.n):
        if not amask >> v & 1:
            if (t.out[v] & amask).bit_count() < k or (t.inn[v] & amask).bit_count() < k:
                inside |= 1 << v
    x = _mask(a1 + a3) | inside
    return certify(t, [x], "k-strong", k, "single_inversion_layered",
                   {"A1": a1, "A2": a2, "A3": a3})


# ------------------------------------------------------------------ transform

def transform_between(t1: Tournament, t2: Tournament) -> InversionFamily:
    """At most n-1 sets turning t1 into t2 exactly."""
    _require_tournament(t1)
    _require_tournament(t2)
    if t1.n != t2.n:
        raise PreconditionError("tournaments must share the vertex set")
    n = t1.n
    cur = t1
    fam = []
    for i in range(n - 1):
        x = 1 << i
        for j in range(i + 1, n):
            if cur.has_arc(i, j) != t2.has_arc(i, j):
                x |= 1 << j
        if x.bit_count() >= 2:
            fam.append(x)
            cur = invert(cur, x)
    if cur != t2:
        raise VerificationError("sweep did not reach the target")
    return InversionFamily(tuple(fam))


def transform_certificate(t1: Tournament, t2: Tournament) -> Certificate:
    return certify(t1, transform_between(t1, t2), "equals-target", 0, "transform_between", target=t2)


METHODS = {
    "k1": lambda t, k: make_strong_k1(t),
    "k2": lambda t, k: make_2strong(t),
    "sweep2k": make_kstrong_2k,
    "one19k": single_inversion_19k,
    "three11k": three_inversions_11k,
    "layered": single_inversion_layered,
}
