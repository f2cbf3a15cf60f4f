"""Generators for lower-bound witnesses and hardness-reduction digraphs.

Each generator re-checks the structure it promises before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from .connectivity import is_k_arc_strong, is_k_strong, ug_edge_connectivity_at_least
from .core import (
    Digraph,
    Graph,
    InversionFamily,
    PreconditionError,
    Tournament,
    dominates,
    rotative_tournament,
    transitive_tournament,
)
from .exact import cut_cover_from_colouring


def _place(out: list[int], block: Digraph, offset: int) -> None:
    for v, row in enumerate(block.out):
        out[offset + v] |= row << offset


def _arc(out: list[int], u: int, v: int) -> None:
    out[u] |= 1 << v


def _digon(out: list[int], u: int, v: int) -> None:
    out[u] |= 1 << v
    out[v] |= 1 << u


# --------------------------------------------------------------------- MEkSAT

@dataclass(frozen=True)
class MEkSATInstance:
    """Positive clauses of 2k+1 variables; satisfied when each clause has
    at least k true and at least k false variables."""

    num_vars: int
    clauses: tuple[frozenset, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(frozenset(c) for c in self.clauses))
        for c in self.clauses:
            if len(c) != 2 * self.k + 1:
                raise PreconditionError(f"clause {sorted(c)} does not have 2k+1 = {2 * self.k + 1} variables")
            if any(not 0 <= x < self.num_vars for x in c):
                raise PreconditionError(f"clause {sorted(c)} uses an unknown variable")

    def satisfied_by(self, truth: int) -> bool:
        k = self.k
        for c in self.clauses:
            on = sum(truth >> x & 1 for x in c)
            if on < k or len(c) - on < k:
                return False
        return True

    def solutions(self) -> list[int]:
        return [a for a in range(1 << self.num_vars) if self.satisfied_by(a)]

    def satisfiable(self) -> bool:
        return any(self.satisfied_by(a) for a in range(1 << self.num_vars))


def meksat_layout(inst: MEkSATInstance) -> tuple[int, int, int]:
    """Offsets of the S block, the variable vertices and the clause vertices."""
    return 0, 2 * inst.k + 1, 2 * inst.k + 1 + inst.num_vars


def meksat_digraph(inst: MEkSATInstance) -> Digraph:
    k = inst.k
    s0, v0, w0 = meksat_layout(inst)
    n = w0 + len(inst.clauses)
    out = [0] * n
    _place(out, rotative_tournament(k), s0)
    for x in range(inst.num_vars):
        for i in range(k):
            _arc(out, s0 + i, v0 + x)
        for i in range(k, 2 * k):
            _arc(out, v0 + x, s0 + i)
    for j, c in enumerate(inst.clauses):
        for x in c:
            _arc(out, v0 + x, w0 + j)
    return Digraph(n, out)


def meksat_assignment_set(inst: MEkSATInstance, truth: int) -> int:
    """The single inversion set for a satisfying assignment: W plus true variables."""
    _, v0, w0 = meksat_layout(inst)
    w = sum(1 << (w0 + j) for j in range(len(inst.clauses)))
    return w | sum(1 << (v0 + x) for x in range(inst.num_vars) if truth >> x & 1)


def meksat_lift(inst: MEkSATInstance) -> MEkSATInstance:
    """An equisatisfiable instance with clauses of size 2(k+1)+1."""
    k = inst.k
    m = inst.num_vars
    ys = list(range(m, m + k + 3))
    zs = list(range(m + k + 3, m + 2 * k + 6))
    pool = ys + zs
    yset = set(ys)
    c1 = [frozenset(c) for c in combinations(pool, 2 * k + 3)
          if k + 1 <= len(yset.intersection(c)) <= k + 2]
    c2 = [frozenset(c) | {ys[0], zs[0]} for c in inst.clauses]
    return MEkSATInstance(m + 2 * k + 6, tuple(c1 + c2), k + 1)


# ------------------------------------------------------------ cut-cover gadget

@dataclass(frozen=True)
class CutCoverLayout:
    n_graph: int
    k: int
    edges: tuple[tuple[int, int], ...]

    def z(self, e: int, i: int) -> int:
        """Vertex z_e^i, i = 1..2k+1."""
        return self.n_graph + (2 * self.k + 1) * e + (i - 1)

    def anchor(self, i: int) -> int:
        """Vertex i (1..2k+1) of the anchor block (X or W)."""
        return self.n_graph + (2 * self.k + 1) * len(self.edges) + (i - 1)

    @property
    def size(self) -> int:
        return self.n_graph + (2 * self.k + 1) * (len(self.edges) + 1)


def _zblocks(out, lay: CutCoverLayout) -> None:
    rot = rotative_tournament(lay.k)
    for e in range(len(lay.edges)):
        _place(out, rot, lay.z(e, 1))
    _place(out, rot, lay.anchor(1))


def cutcover_to_arcstrong(g: Graph, k: int) -> Digraph:
    lay = CutCoverLayout(g.n, k, g.edges)
    out = [0] * lay.size
    _zblocks(out, lay)
    for v in range(g.n):
        for i in range(1, k + 1):
            _arc(out, v, lay.anchor(i))
        for i in range(k + 1, 2 * k + 1):
            _arc(out, lay.anchor(i), v)
    for e, (u, v) in enumerate(g.edges):
        for i in range(1, k + 1):
            _arc(out, u, lay.z(e, i))
        for i in range(2, k + 1):
            _arc(out, lay.z(e, i), v)
        _arc(out, v, lay.z(e, 1))
    d = Digraph(lay.size, out)
    assert d.is_oriented() and d.n == g.n + (2 * k + 1) * len(g.edges) + 2 * k + 1
    return d


def cutcover_to_strong(g: Graph, k: int) -> Digraph:
    lay = CutCoverLayout(g.n, k, g.edges)
    out = [0] * lay.size
    _zblocks(out, lay)
    for v in range(g.n):
        for i in range(1, k + 1):
            _arc(out, v, lay.anchor(i))
        for i in range(k + 1, 2 * k + 1):
            _arc(out, lay.anchor(i), v)
    for e, (u, v) in enumerate(g.edges):
        for j in range(1, k):
            for i in range(1, k + 1):
                _arc(out, lay.z(e, i), lay.anchor(j))
            for i in range(k + 1, 2 * k + 1):
                _arc(out, lay.anchor(j), lay.z(e, i))
        _arc(out, u, lay.z(e, 1))
        _arc(out, v, lay.z(e, 1))
    d = Digraph(lay.size, out)
    assert d.is_oriented() and d.n == g.n + (2 * k + 1) * len(g.edges) + 2 * k + 1
    return d


def cutcover_family(g: Graph, k: int, cover: InversionFamily | None = None) -> InversionFamily:
    """Lift a cut cover of G: set i also takes z_e^1 for the edges it cuts first."""
    lay = CutCoverLayout(g.n, k, g.edges)
    cover = cover if cover is not None else cut_cover_from_colouring(g)
    sets = list(cover.sets)
    for e, (u, v) in enumerate(g.edges):
        first = next(i for i, x in enumerate(sets) if (x >> u & 1) != (x >> v & 1))
        sets[first] |= 1 << lay.z(e, 1)
    return InversionFamily(tuple(sets))


# ------------------------------------------------------------ sink witnesses

def sizet_order(t: int) -> int:
    s = 2 ** (t - 1) + 1
    return s + comb(s, 2)


def witness_sizet(t: int) -> tuple[Digraph, int]:
    """S of size 2^(t-1)+1 and, for each pair of S, a common out-neighbour."""
    if t < 1:
        raise PreconditionError("t must be at least 1")
    s = 2 ** (t - 1) + 1
    n = sizet_order(t)
    out = [0] * n
    for idx, (a, b) in enumerate(combinations(range(s), 2)):
        _arc(out, a, s + idx)
        _arc(out, b, s + idx)
    d = Digraph(n, out)
    if t >= 2:
        assert ug_edge_connectivity_at_least(d, 2)
    return d, 0


def _arbn1_base(n: int) -> tuple[Digraph, int]:
    t = 1
    while sizet_order(t + 1) <= n:
        t += 1
    d, s = witness_sizet(t)
    if t == 1:
        # the three-vertex base is a path; a digon between the two sources
        # makes it 2-edge-connected while the pair vertex stays a sink
        out = list(d.out)
        _digon(out, 0, 1)
        d = Digraph(d.n, out)
    return d, t


def witness_arbn1(n: int) -> Digraph:
    """The size-t witness for the largest t that fits, padded by digon pendants on s."""
    if n < 3:
        raise PreconditionError("need n >= 3")
    base, _ = _arbn1_base(n)
    out = list(base.out) + [0] * (n - base.n)
    for p in range(base.n, n):
        _digon(out, 0, p)
    d = Digraph(n, out)
    assert ug_edge_connectivity_at_least(d, 2)
    return d


def witness_arbn1_t(n: int) -> int:
    return _arbn1_base(n)[1]


def witness_extreminf(n: int, k: int) -> Digraph:
    """witness_arbn1(n-k+1) plus k-1 vertices joined by digons to everything."""
    if k < 1 or n < k + 2:
        raise PreconditionError("need n >= k+2")
    base = witness_arbn1(n - k + 1)
    m = base.n
    out = list(base.out) + [0] * (k - 1)
    for a in range(m, n):
        for b in range(n):
            if b != a:
                _digon(out, a, b)
    d = Digraph(n, out)
    assert ug_edge_connectivity_at_least(d, 2 * k)
    return d


def has_sink_or_source(d: Digraph, exclude: int | None = None) -> bool:
    return any(v != exclude and (d.out[v] == 0 or d.inn[v] == 0) for v in range(d.n))


# ------------------------------------------------------ tournament witnesses

def witness_T1(k: int) -> Tournament:
    """A, C eulerian of order 2k-1, |B| = k-1, A => B u C and B => C."""
    if k < 2:
        raise PreconditionError("witness T1 needs k >= 2")
    a, b, c = 2 * k - 1, k - 1, 2 * k - 1
    n = a + b + c
    out = [0] * n
    _place(out, rotative_tournament(k - 1), 0)
    _place(out, transitive_tournament(b), a)
    _place(out, rotative_tournament(k - 1), a + b)
    amask = (1 << a) - 1
    bmask = ((1 << b) - 1) << a
    cmask = ((1 << c) - 1) << (a + b)
    for v in range(a):
        out[v] |= bmask | cmask
    for v in range(a, a + b):
        out[v] |= cmask
    t = Tournament(n, out)
    assert dominates(t, amask, bmask | cmask) and dominates(t, bmask, cmask)
    return t


def witness_T2(k: int) -> Tournament:
    """Two eulerian blocks of order 2k-1 with A => B."""
    if k < 2:
        raise PreconditionError("witness T2 needs k >= 2")
    a = 2 * k - 1
    out = [0] * (2 * a)
    _place(out, rotative_tournament(k - 1), 0)
    _place(out, rotative_tournament(k - 1), a)
    for v in range(a):
        out[v] |= ((1 << a) - 1) << a
    return Tournament(2 * a, out)


GADGETS = {
    "meksat": ("meksat_digraph", "k-strong", "sinv'_k <= 1 iff the instance is satisfiable"),
    "cc-arc": ("cutcover_to_arcstrong", "k-arc-strong", "sinv'_k equals the cut-cover number of G"),
    "cc-vertex": ("cutcover_to_strong", "k-strong", "sinv_k equals the cut-cover number of G"),
    "sizet": ("witness_sizet", "no-sink-source", "t-1 inversions always leave a sink or source other than s"),
    "arbn1": ("witness_arbn1", "no-sink-source", "the padded witness keeps a sink or source"),
    "extreminf": ("witness_extreminf", "k-arc-strong", "2k-edge-connected digraph needing many inversions"),
    "t1": ("witness_T1", "k-strong", "no single inversion makes it k-strong"),
    "t2": ("witness_T2", "k-arc-strong", "no single inversion makes it k-arc-strong"),
}


def all_assignments(num_vars: int):
    return product((0, 1), repeat=num_vars)
