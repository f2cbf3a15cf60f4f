"""Strong, k-strong and k-arc-strong verification, and eulerian orientations.

All flow computations share one unit-capacity augmenting-path routine over
bit-mask rows; breadth-first search visits vertices in increasing index, so
flows and cut witnesses are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .core import Digraph, PreconditionError, Tournament, VerificationError, bits, members, to_mask


@dataclass(frozen=True)
class CutWitness:
    """Certifies a negative verdict.

    vertex-set: a separator with fewer than k vertices whose removal breaks
    strong connectivity (the pair source/target is separated); an empty
    separator with note "order" means n < k + 1.
    arc-side: a nonempty proper set with fewer than k arcs leaving it.
    infeasible-set: a set S with d(S) < d+(S) - d-(S) in a mixed graph.
    """

    kind: str
    members: tuple[int, ...]
    deficit: int
    source: int | None = None
    target: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        data = {"kind": self.kind, "members": list(self.members), "deficit": self.deficit}
        if self.source is not None:
            data["source"] = self.source
            data["target"] = self.target
        if self.note:
            data["note"] = self.note
        return data


@dataclass(frozen=True)
class Verdict:
    property: str
    k: int
    verdict: bool
    witness: CutWitness | None = None

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "k": self.k,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


# ---------------------------------------------------------------- reachability

def reach(out, start: int, alive: int) -> int:
    """Vertices reachable from start inside the alive mask."""
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= out[u]
        nxt &= alive & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def strong_rows(out, inn, alive: int) -> bool:
    if alive == 0:
        return True
    start = (alive & -alive).bit_length() - 1
    return reach(out, start, alive) == alive and reach(inn, start, alive) == alive


def is_strong(d: Digraph) -> bool:
    return strong_rows(d.out, d.inn, (1 << d.n) - 1)


def strong_components(d: Digraph) -> list[list[int]]:
    """Strong components, sources of the condensation first."""
    full = (1 << d.n) - 1
    left = full
    comps = []
    while left:
        v = (left & -left).bit_length() - 1
        c = reach(d.out, v, full) & reach(d.inn, v, full)
        comps.append(c)
        left &= ~c
    order = []
    remaining = list(comps)
    while remaining:
        for c in remaining:
            rest = 0
            for other in remaining:
                if other != c:
                    rest |= other
            if not any(d.inn[u] & rest for u in bits(c)):
                order.append(c)
                remaining.remove(c)
                break
    return [members(c) for c in order]


# ------------------------------------------------------------------- unit flow

def unit_max_flow(out, s: int, t: int, limit: int | None = None) -> tuple[int, int]:
    """Maximum number of arc-disjoint s-t paths, capped at limit.

    Returns (value, residual reach set of s).  Opposite arcs (digons) are
    handled by cancelling flow before using the reverse arc.
    """
    size = len(out)
    flow = [0] * size
    flow_in = [0] * size
    value = 0
    while limit is None or value < limit:
        parent = [-1] * size
        seen = 1 << s
        queue = deque([s])
        found = False
        while queue and not found:
            u = queue.popleft()
            nxt = ((out[u] & ~flow[u]) | flow_in[u]) & ~seen
            for v in bits(nxt):
                parent[v] = u
                seen |= 1 << v
                if v == t:
                    found = True
                    break
                queue.append(v)
        if not found:
            return value, seen
        v = t
        while v != s:
            u = parent[v]
            if flow_in[u] >> v & 1:
                flow[v] &= ~(1 << u)
                flow_in[u] &= ~(1 << v)
            else:
                flow[u] |= 1 << v
                flow_in[v] |= 1 << u
            v = u
        value += 1
    return value, _residual_reach(out, flow, flow_in, s)


def _residual_reach(out, flow, flow_in, s):
    seen = 1 << s
    frontier = seen
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= (out[u] & ~flow[u]) | flow_in[u]
        nxt &= ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _split_rows(d: Digraph) -> list[int]:
    # node v is v_in, node v + n is v_out
    n = d.n
    return [1 << (v + n) for v in range(n)] + list(d.out)


def local_vertex_connectivity(d: Digraph, u: int, v: int, limit: int | None = None):
    """(value, separator) for internally disjoint u-v paths; requires no arc u->v."""
    if d.has_arc(u, v):
        raise PreconditionError("local vertex connectivity needs a non-adjacent ordered pair")
    n = d.n
    value, seen = unit_max_flow(_split_rows(d), u + n, v, limit)
    sep = 0
    for w in range(n):
        if w in (u, v):
            continue
        if seen >> w & 1 and not seen >> (w + n) & 1:
            sep |= 1 << w
    # cut arcs w_out -> x_in are charged to x, or to w when x is the sink
    for w in range(n):
        if not seen >> (w + n) & 1:
            continue
        for x in bits(d.out[w] & ~seen):
            sep |= 1 << (w if x == v else x)
    return value, sep


# ------------------------------------------------------------------- k-strong

def _strong_witness(d: Digraph, k: int, alive: int, sep: int) -> CutWitness:
    start = (alive & -alive).bit_length() - 1
    fwd = reach(d.out, start, alive)
    if fwd != alive:
        target = ((alive & ~fwd) & -(alive & ~fwd)).bit_length() - 1
        return CutWitness("vertex-set", tuple(members(sep)), k - sep.bit_count(), start, target)
    bwd = reach(d.inn, start, alive)
    source = ((alive & ~bwd) & -(alive & ~bwd)).bit_length() - 1
    return CutWitness("vertex-set", tuple(members(sep)), k - sep.bit_count(), source, start)


def is_k_strong(d: Digraph, k: int) -> Verdict:
    if k < 1:
        raise PreconditionError("k must be at least 1")
    n = d.n
    name = "k-strong"
    if n < k + 1:
        return Verdict(name, k, False, CutWitness("vertex-set", (), k + 1 - n, note="order"))
    full = (1 << n) - 1
    if not strong_rows(d.out, d.inn, full):
        return Verdict(name, k, False, _strong_witness(d, k, full, 0))
    for v in range(n):
        for row in (d.out[v], d.inn[v]):
            if row.bit_count() < k:
                return Verdict(name, k, False, _strong_witness(d, k, full & ~row, row))
    if k == 1:
        return Verdict(name, k, True)
    for u in range(n):
        for v in range(n):
            if u == v or d.out[u] >> v & 1:
                continue
            value, sep = local_vertex_connectivity(d, u, v, k)
            if value < k:
                return Verdict(name, k, False, _strong_witness(d, k, full & ~sep, sep))
    return Verdict(name, k, True)


def k_strong_fast(n: int, out, inn, k: int) -> bool:
    """Boolean k-strong test used inside exhaustive search loops."""
    if n < k + 1:
        return False
    for v in range(n):
        if out[v].bit_count() < k or inn[v].bit_count() < k:
            return False
    full = (1 << n) - 1
    if sum(comb(n, i) for i in range(k)) <= 4 * n * n:
        for size in range(k):
            for s in combinations(range(n), size):
                dead = sum(1 << v for v in s)
                if not strong_rows(out, inn, full & ~dead):
                    return False
        return True
    return bool(is_k_strong(Digraph._raw(n, out), k))


def brute_force_k_strong(d: Digraph, k: int) -> bool:
    """Reference definition: n >= k+1 and D - S strong for every |S| < k."""
    n = d.n
    if n < k + 1:
        return False
    full = (1 << n) - 1
    for size in range(k):
        for s in combinations(range(n), size):
            if not strong_rows(d.out, d.inn, full & ~sum(1 << v for v in s)):
                return False
    return True


# --------------------------------------------------------------- k-arc-strong

def is_k_arc_strong(d: Digraph, k: int) -> Verdict:
    if k < 1:
        raise PreconditionError("k must be at least 1")
    n = d.n
    if n < 2:
        raise PreconditionError("arc-strength needs at least two vertices")
    name = "k-arc-strong"
    full = (1 << n) - 1
    for v in range(n):
        if d.out[v].bit_count() < k:
            return Verdict(name, k, False, CutWitness("arc-side", (v,), k - d.out[v].bit_count()))
    for v in range(n):
        if d.inn[v].bit_count() < k:
            side = full & ~(1 << v)
            return Verdict(name, k, False, CutWitness("arc-side", tuple(members(side)), k - d.inn[v].bit_count()))
    for v in range(1, n):
        for s, t in ((0, v), (v, 0)):
            value, seen = unit_max_flow(d.out, s, t, k)
            if value < k:
                return Verdict(name, k, False, CutWitness("arc-side", tuple(members(seen)), k - value))
    return Verdict(name, k, True)


def k_arc_strong_fast(n: int, out, inn, k: int) -> bool:
    if n < 2:
        return False
    for v in range(n):
        if out[v].bit_count() < k or inn[v].bit_count() < k:
            return False
    if k == 1:
        return strong_rows(out, inn, (1 << n) - 1)
    return bool(is_k_arc_strong(Digraph._raw(n, out), k))


def out_arcs_of_set(d: Digraph, s: int) -> int:
    return sum((d.out[u] & ~s).bit_count() for u in bits(s))


def is_eulerian(d: Digraph) -> bool:
    return all(d.out[v].bit_count() == d.inn[v].bit_count() for v in range(d.n))


def is_acyclic(d: Digraph) -> bool:
    left = (1 << d.n) - 1
    while left:
        sources = [v for v in bits(left) if d.inn[v] & left == 0]
        if not sources:
            return False
        for v in sources:
            left &= ~(1 << v)
    return True


def check_witness(d: Digraph, verdict: Verdict) -> bool:
    """Re-check that a negative verdict's witness violates the stated bound."""
    w = verdict.witness
    k = verdict.k
    if verdict.verdict or w is None:
        return False
    full = (1 << d.n) - 1
    s = to_mask(d.n, w.members)
    if w.kind == "arc-side":
        return 0 < s < full and out_arcs_of_set(d, s) < k
    if w.kind == "vertex-set":
        if w.note == "order":
            return d.n < k + 1
        alive = full & ~s
        if len(w.members) >= k or w.source in w.members or w.target in w.members:
            return False
        return not reach(d.out, w.source, alive) >> w.target & 1
    return False


# ------------------------------------------------------------- capacitated flow

class FlowNetwork:
    """Small Edmonds-Karp network with integer capacities."""

    def __init__(self, size: int):
        self.size = size
        self.adj: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> int:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            via = [-1] * self.size
            via[s] = -2
            queue = deque([s])
            while queue and via[t] == -1:
                u = queue.popleft()
                for e in self.adj[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and via[v] == -1:
                        via[v] = e
                        queue.append(v)
            if via[t] == -1:
                return total
            push = None
            v = t
            while v != s:
                e = via[v]
                push = self.cap[e] if push is None else min(push, self.cap[e])
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = via[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            total += push

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                if self.cap[e] > 0 and self.to[e] not in seen:
                    seen.add(self.to[e])
                    queue.append(self.to[e])
        return seen


def ug_edge_connectivity_at_least(d: Digraph, k: int) -> bool:
    """Is the underlying multigraph k-edge-connected?  Digons count twice."""
    n = d.n
    if n < 2:
        return True
    mult = d.underlying_multiset()
    for v in range(1, n):
        net = FlowNetwork(n)
        for (a, b), c in mult.items():
            net.add_edge(a, b, c)
            net.add_edge(b, a, c)
        if net.max_flow(0, v) < k:
            return False
    return True


# ------------------------------------------------------------------ mixed graphs

@dataclass(frozen=True)
class MixedGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)
    arcs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "arcs", frozenset(tuple(a) for a in self.arcs))
        for u, v in list(edges) + list(self.arcs):
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"pair ({u}, {v}) out of range")
        for u, v in edges:
            if (u, v) in self.arcs or (v, u) in self.arcs:
                raise PreconditionError(f"pair ({u}, {v}) is both an edge and an arc")

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges) + sum(v in a for a in self.arcs)

    def cut_counts(self, s: set[int]) -> tuple[int, int, int]:
        """(d(S), d+(S), d-(S)): free edges, arcs leaving, arcs entering."""
        d = sum((u in s) != (v in s) for u, v in self.edges)
        dp = sum(u in s and v not in s for u, v in self.arcs)
        dm = sum(v in s and u not in s for u, v in self.arcs)
        return d, dp, dm

    def violates(self, s: set[int]) -> bool:
        d, dp, dm = self.cut_counts(s)
        return d < dp - dm


def eulerian_orientation(m: MixedGraph):
    """An eulerian orientation of m as a Digraph, or an infeasible-set CutWitness."""
    n = m.n
    for v in range(n):
        if m.degree(v) % 2:
            raise PreconditionError(f"vertex {v} has odd degree {m.degree(v)}")
    for v in range(n):
        if m.violates({v}):
            d, dp, dm = m.cut_counts({v})
            return CutWitness("infeasible-set", (v,), dp - dm - d)
    edges = sorted(m.edges)
    excess = [0] * n
    for u, v in m.arcs:
        excess[u] += 1
        excess[v] -= 1
    for u, v in edges:
        excess[u] += 1
        excess[v] -= 1
    src, snk = n, n + 1
    net = FlowNetwork(n + 2)
    need = 0
    for v in range(n):
        if excess[v] > 0:
            net.add_edge(src, v, excess[v] // 2)
            need += excess[v] // 2
        elif excess[v] < 0:
            net.add_edge(v, snk, -excess[v] // 2)
    handles = [net.add_edge(u, v, 1) for u, v in edges]
    if net.max_flow(src, snk) < need:
        side = net.reachable(src) - {src}
        for s in (side, set(range(n)) - side):
            if 0 < len(s) < n and m.violates(s):
                d, dp, dm = m.cut_counts(s)
                return CutWitness("infeasible-set", tuple(sorted(s)), dp - dm - d)
        raise VerificationError("flow infeasible but no violating set found")
    out = [0] * n
    for u, v in m.arcs:
        out[u] |= 1 << v
    for (u, v), e in zip(edges, handles):
        if net.cap[e] == 0:
            out[v] |= 1 << u
        else:
            out[u] |= 1 << v
    return Digraph(n, out)


def complete_to_eulerian_tournament(t: Tournament, x) -> Tournament:
    n = t.n
    if n % 2 == 0:
        raise PreconditionError("tournament order must be odd (2k+1)")
    k = (n - 1) // 2
    x = to_mask(n, x)
    if 3 * x.bit_count() > 2 * k:
        raise PreconditionError(f"|X| = {x.bit_count()} exceeds 2k/3 = {2 * k / 3:.2f}")
    for v in bits(x):
        if t.out_degree(v) != k:
            raise PreconditionError(f"vertex {v} of X is not balanced (out-degree {t.out_degree(v)})")
    arcs, edges = [], []
    for u, v in t.arcs():
        if (x >> u | x >> v) & 1:
            arcs.append((u, v))
        else:
            edges.append((u, v))
    result = eulerian_orientation(MixedGraph(n, frozenset(edges), frozenset(arcs)))
    if isinstance(result, CutWitness):
        raise VerificationError(f"no eulerian completion exists: {result}")
    return Tournament.from_digraph(result)
