"""Exhaustive oracles: minimum inversion numbers, tournament census, colourings."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from math import ceil, log2

import numpy as np

from .certificate import check_property
from .connectivity import is_acyclic, k_arc_strong_fast, k_strong_fast
from .core import (
    Digraph,
    Graph,
    InversionFamily,
    PreconditionError,
    Tournament,
    VerificationError,
    bits,
    invert_family,
)
from .formats import emit_trn

DEFAULT_NODE_CAP = 5_000_000
TOURNAMENT_CAP = 7


def default_node_cap() -> int:
    return int(os.environ.get("INVLAB_NODE_CAP", DEFAULT_NODE_CAP))


@dataclass(frozen=True)
class SearchBudget:
    max_t: int = 6
    node_cap: int | None = None
    symmetry_breaking: bool = True

    def cap(self) -> int:
        return default_node_cap() if self.node_cap is None else self.node_cap


@dataclass(frozen=True)
class SearchResult:
    """value is None when the search could not decide; bounds are always proven."""

    property: str
    k: int
    value: int | None
    family: InversionFamily | None
    lower_bound: int
    upper_bound: int | None
    nodes: int

    @property
    def known(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "k": self.k,
            "status": "exact" if self.known else "unknown",
            "value": self.value,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "family": None if self.family is None else self.family.as_lists(),
            "nodes": self.nodes,
        }


def _predicate(prop: str, n: int, k: int):
    if prop == "k-strong":
        return lambda out, inn: k_strong_fast(n, out, inn, k)
    if prop == "k-arc-strong":
        return lambda out, inn: k_arc_strong_fast(n, out, inn, k)
    if prop == "acyclic":
        return lambda out, inn: is_acyclic(Digraph._raw(n, out))
    raise PreconditionError(f"unknown property {prop!r}")


class _CapHit(Exception):
    pass


def _search_level(n, out, inn, prop, k, t, cands, first_range, cap):
    """First combination (in lexicographic order) of t candidate sets that works.

    Returns (combo indices or None, labelings examined).  Flip rows are
    updated incrementally along the recursion.
    """
    ok = _predicate(prop, n, k)
    count = 0
    chosen: list[int] = []

    def contribution(x):
        rows = {}
        for u in bits(x):
            rows[u] = x & ~(1 << u)
        return rows

    contribs = [contribution(x) for x in cands]

    def walk(depth, start, stop, flip):
        nonlocal count
        if depth == t:
            count += 1
            if count > cap:
                raise _CapHit
            new_out = [(o & ~f) | (i & f) for o, i, f in zip(out, inn, flip)]
            new_inn = [(i & ~f) | (o & f) for o, i, f in zip(out, inn, flip)]
            return ok(new_out, new_inn)
        for idx in range(start, stop):
            nxt = list(flip)
            for u, row in contribs[idx].items():
                nxt[u] ^= row
            chosen.append(idx)
            if walk(depth + 1, idx + 1, len(cands), nxt):
                return True
            chosen.pop()
        return False

    lo, hi = first_range
    if t == 0:
        found = walk(0, 0, 0, [0] * n)
    else:
        found = walk(0, lo, hi, [0] * n)
    return (tuple(chosen) if found else None), count


def _search_chunk(args):
    n, out, inn, prop, k, t, cands, rng, cap = args
    try:
        combo, count = _search_level(n, out, inn, prop, k, t, cands, rng, cap)
        return combo, count, False
    except _CapHit:
        return None, cap, True


def _unrestricted_level(d: Digraph, prop, k, t, cap):
    """Every labeling in (F_2^t)^V, no symmetry breaking; for cross-checks only."""
    n = d.n
    ok = _predicate(prop, n, k)
    count = 0
    for cols in product(range(1 << n), repeat=t):
        count += 1
        if count > cap:
            raise _CapHit
        e = invert_family(d, InversionFamily(cols))
        if ok(list(e.out), list(e.inn)):
            return InversionFamily(cols), count
    return None, count


def sinv_exact(d: Digraph, k: int, prop: str, budget: SearchBudget | None = None,
               jobs: int = 1) -> SearchResult:
    """Smallest t such that some t inversions give the property.

    Families whose sets are distinct and have at least two vertices suffice
    for minimality (a repeated set cancels, a singleton reverses nothing),
    and the order of sets is irrelevant; so level t scans the t-subsets of
    the candidate sets in lexicographic order.
    """
    budget = budget or SearchBudget()
    if prop == "acyclic" and not d.is_oriented():
        raise PreconditionError("a digraph with a digon can never become acyclic")
    if prop in ("k-strong", "k-arc-strong") and k < 1:
        raise PreconditionError("k must be at least 1")
    n = d.n
    cap = budget.cap()
    nodes = 0
    cands = [x for x in range(1 << n) if x.bit_count() >= 2]
    out, inn = list(d.out), list(d.inn)
    for t in range(budget.max_t + 1):
        if budget.symmetry_breaking:
            if t > len(cands):
                break
            if jobs > 1 and t > 0:
                chunks = _ranges(len(cands), jobs * 4)
                args = [(n, out, inn, prop, k, t, cands, r, cap) for r in chunks]
                with ProcessPoolExecutor(jobs) as pool:
                    results = list(pool.map(_search_chunk, args))
            else:
                results = [_search_chunk((n, out, inn, prop, k, t, cands, (0, len(cands)), cap))]
            combo = None
            hit = False
            for c, count, capped in results:
                nodes += count
                if c is not None:
                    combo = c
                    break
                hit = hit or capped
            if combo is not None:
                family = InversionFamily(tuple(cands[i] for i in combo))
            elif hit:
                return SearchResult(prop, k, None, None, t, None, nodes)
            else:
                family = None
        else:
            try:
                family, count = _unrestricted_level(d, prop, k, t, cap - nodes)
            except _CapHit:
                return SearchResult(prop, k, None, None, t, None, cap)
            nodes += count
        if family is not None:
            if not check_property(invert_family(d, family), prop, k):
                raise VerificationError("search predicate and verifier disagree")
            return SearchResult(prop, k, t, family, t, t, nodes)
    return SearchResult(prop, k, None, None, budget.max_t + 1, None, nodes)


def _ranges(total: int, parts: int) -> list[tuple[int, int]]:
    step = max(1, -(-total // parts))
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def sinv(d: Digraph, k: int, prop: str = "k-strong", **kw) -> int:
    r = sinv_exact(d, k, prop, **kw)
    if r.value is None:
        raise VerificationError(f"search undecided: value >= {r.lower_bound}")
    return r.value


def exhaust_single_sets(d: Digraph, test) -> list[int]:
    """All sets X (as masks) for which test(Inv(D; X)) holds."""
    n = d.n
    hits = []
    for x in range(1 << n):
        out = list(d.out)
        inn = d.inn
        for u in bits(x):
            out[u] = (out[u] & ~x) | (inn[u] & x)
        if test(Digraph._raw(n, out)):
            hits.append(x)
    return hits


# ----------------------------------------------------------------- tournaments

_PERMS: dict[int, np.ndarray] = {}


def _perms(n: int) -> np.ndarray:
    if n not in _PERMS:
        _PERMS[n] = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    return _PERMS[n]


def _codes(t: Digraph) -> np.ndarray:
    """Code of every relabelling: new vertex i is old vertex perm[i]."""
    n = t.n
    if n < 2:
        return np.zeros(1, dtype=np.int64)
    mat = np.array([[t.out[i] >> j & 1 for j in range(n)] for i in range(n)], dtype=np.int64)
    iu, ju = np.triu_indices(n, 1)
    m = len(iu)
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    p = _perms(n)
    return mat[p[:, iu], p[:, ju]] @ weights


def _from_code(n: int, code: int) -> Tournament:
    m = n * (n - 1) // 2
    return Tournament.from_bits(n, format(code, f"0{m}b") if m else "")


def canonical_form(t: Tournament) -> tuple[int, Tournament]:
    """Minimal adjacency code over all relabellings, with its tournament."""
    if t.n > TOURNAMENT_CAP + 1:
        raise PreconditionError(f"canonical form is capped at n = {TOURNAMENT_CAP + 1}")
    code = int(_codes(t).min())
    return code, _from_code(t.n, code)


def automorphism_count(t: Tournament) -> int:
    codes = _codes(t)
    return int((codes == codes.min()).sum())


def enumerate_tournaments(n: int) -> list[Tournament]:
    """One canonical representative per isomorphism class, sorted by code."""
    if n < 1 or n > TOURNAMENT_CAP:
        raise PreconditionError(f"enumeration supports 1 <= n <= {TOURNAMENT_CAP}")
    return list(_enumerate(n))


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[Tournament, ...]:
    reps = {0: Tournament(1, [0])}
    for size in range(2, n + 1):
        nxt = {}
        for base in reps.values():
            for row in range(1 << (size - 1)):
                out = list(base.out) + [row]
                for v in range(size - 1):
                    if not row >> v & 1:
                        out[v] |= 1 << (size - 1)
                code, rep = canonical_form(Tournament._raw(size, out))
                nxt.setdefault(code, rep)
        reps = nxt
    return tuple(reps[c] for c in sorted(reps))


@dataclass(frozen=True)
class CensusRow:
    n: int
    k: int
    count_of_classes: int
    m_k: int | None
    m_prime_k: int | None
    witness: str | None
    witness_prime: str | None
    argmax: tuple[str, ...] = field(default=(), compare=False)
    argmax_prime: tuple[str, ...] = field(default=(), compare=False)
    properties: tuple[str, ...] = ("k-strong", "k-arc-strong")

    def csv_rows(self) -> list[tuple]:
        # an undecided property still gets a row, with value None
        rows = []
        if "k-strong" in self.properties:
            rows.append((self.n, self.k, "k-strong", self.m_k, self.witness))
        if "k-arc-strong" in self.properties:
            rows.append((self.n, self.k, "k-arc-strong", self.m_prime_k, self.witness_prime))
        return rows


def _bits_of(t: Tournament) -> str:
    return emit_trn(t).split("\n")[1]


def _class_values(args):
    t, k, props, budget = args
    return tuple(sinv_exact(t, k, p, budget).value for p in props)


def census_m_k(n: int, k: int, prop: str | None = None, budget: SearchBudget | None = None,
               jobs: int = 1) -> CensusRow:
    """Maximum of sinv_k (and/or sinv'_k) over all n-vertex tournaments."""
    if n < 2 * k + 1:
        raise PreconditionError("no k-strong tournament has fewer than 2k+1 vertices")
    props = ("k-strong", "k-arc-strong") if prop is None else (prop,)
    classes = enumerate_tournaments(n)
    args = [(t, k, props, budget) for t in classes]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            values = list(pool.map(_class_values, args))
    else:
        values = [_class_values(a) for a in args]
    result = {}
    for i, p in enumerate(props):
        vals = [v[i] for v in values]
        if any(v is None for v in vals):
            result[p] = (None, None, ())
            continue
        best = max(vals)
        arg = tuple(_bits_of(t) for t, v in zip(classes, vals) if v == best)
        result[p] = (best, arg[0], arg)
    s = result.get("k-strong", (None, None, ()))
    a = result.get("k-arc-strong", (None, None, ()))
    return CensusRow(n, k, len(classes), s[0], a[0], s[1], a[1], s[2], a[2], props)


# ------------------------------------------------------------ graph colouring

def chromatic_number(g: Graph) -> int:
    """Exact chromatic number by inclusion-exclusion over independent sets."""
    n = g.n
    if n > 16:
        raise PreconditionError("chromatic number is capped at 16 vertices")
    if n == 0:
        return 0
    if not g.edges:
        return 1
    adj = g.adjacency()
    size = 1 << n
    indep = [0] * size
    indep[0] = 1
    for s in range(1, size):
        v = (s & -s).bit_length() - 1
        indep[s] = indep[s & ~(1 << v)] + indep[s & ~(1 << v) & ~adj[v]]
    sign = [(-1) ** ((n - s.bit_count()) & 1) for s in range(size)]
    for c in range(2, n + 1):
        if sum(sg * i ** c for sg, i in zip(sign, indep)) > 0:
            return c
    return n


def colouring(g: Graph, c: int) -> list[int] | None:
    """A proper colouring with colours 0..c-1 by backtracking, or None."""
    adj = g.adjacency()
    order = sorted(range(g.n), key=lambda v: -adj[v].bit_count())
    col = [-1] * g.n

    def go(i):
        if i == len(order):
            return True
        v = order[i]
        used = {col[w] for w in bits(adj[v]) if col[w] >= 0}
        top = max([col[w] for w in range(g.n) if col[w] >= 0], default=-1)
        # colours above the first unused one are symmetric
        for colour in range(min(c, top + 2)):
            if colour not in used:
                col[v] = colour
                if go(i + 1):
                    return True
                col[v] = -1
        return False

    return col if go(0) else None


def cut_mask(g: Graph, x: int) -> int:
    m = 0
    for i, (u, v) in enumerate(g.edges):
        if (x >> u & 1) != (x >> v & 1):
            m |= 1 << i
    return m


def cut_cover_direct(g: Graph) -> InversionFamily:
    """A minimum family of vertex sets whose cuts cover every edge."""
    n = g.n
    if n > 10:
        raise PreconditionError("direct cut-cover search is capped at 10 vertices")
    full = (1 << len(g.edges)) - 1
    if full == 0:
        return InversionFamily(())
    # a set and its complement have the same cut, so keep vertex 0 outside
    sets = list(range(0, 1 << n, 2))
    cuts = [cut_mask(g, x) for x in sets]
    failed: set[tuple[int, int]] = set()

    def go(covered, left, chosen):
        if covered == full:
            return True
        if left == 0 or (covered, left) in failed:
            return False
        e = (~covered & full)
        e &= -e
        for x, c in zip(sets, cuts):
            if c & e:
                chosen.append(x)
                if go(covered | c, left - 1, chosen):
                    return True
                chosen.pop()
        failed.add((covered, left))
        return False

    for t in range(1, n + 1):
        chosen: list[int] = []
        if go(0, t, chosen):
            return InversionFamily(tuple(chosen))
    raise VerificationError("no cut cover found")


def cut_cover_number(g: Graph, mode: str = "formula") -> int:
    if mode == "formula":
        chi = chromatic_number(g)
        return 0 if chi <= 1 else ceil(log2(chi))
    if mode == "direct":
        return len(cut_cover_direct(g))
    raise PreconditionError(f"unknown mode {mode!r}")


def cut_cover_from_colouring(g: Graph) -> InversionFamily:
    """Optimal cut cover: set i holds the vertices whose colour has bit i."""
    chi = chromatic_number(g)
    t = 0 if chi <= 1 else ceil(log2(chi))
    col = colouring(g, chi)
    return InversionFamily(tuple(sum(1 << v for v in range(g.n) if col[v] >> i & 1) for i in range(t)))
