"""Digraphs with bit-packed adjacency and the inversion operation.

Vertices are the integers 0..n-1.  A vertex subset is either an int bit mask
or any iterable of vertex indices; every public function accepts both.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class InvlabError(Exception):
    pass


class PreconditionError(InvlabError, ValueError):
    pass


class VerificationError(InvlabError):
    """A construction produced a family that failed independent verification."""


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(n: int, x) -> int:
    """Normalise a vertex subset given as a mask or an iterable."""
    if isinstance(x, int):
        if x < 0 or x >> n:
            raise PreconditionError(f"subset mask {x:#x} has vertices outside 0..{n - 1}")
        return x
    mask = 0
    for v in x:
        if not isinstance(v, int) or v < 0 or v >= n:
            raise PreconditionError(f"vertex {v!r} out of range 0..{n - 1}")
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    return list(bits(mask))


class Digraph:
    """Immutable loopless digraph; digons allowed, parallel arcs are not."""

    __slots__ = ("n", "out", "_inn")

    def __init__(self, n: int, out: Sequence[int]):
        if n < 0 or len(out) != n:
            raise PreconditionError("need one out-mask per vertex")
        full = (1 << n) - 1
        for v, row in enumerate(out):
            if row & ~full or row < 0:
                raise PreconditionError(f"vertex {v} has an out-neighbour out of range")
            if row >> v & 1:
                raise PreconditionError(f"loop at vertex {v}")
        self.n = n
        self.out = tuple(out)
        self._inn = None

    @classmethod
    def _raw(cls, n: int, out: Sequence[int]):
        d = object.__new__(cls)
        d.n = n
        d.out = tuple(out)
        d._inn = None
        return d

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]):
        out = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"arc ({u}, {v}) out of range")
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            if out[u] >> v & 1:
                raise PreconditionError(f"parallel arc ({u}, {v})")
            out[u] |= 1 << v
        return cls(n, out)

    @property
    def inn(self) -> tuple[int, ...]:
        if self._inn is None:
            inn = [0] * self.n
            for u, row in enumerate(self.out):
                for v in bits(row):
                    inn[v] |= 1 << u
            self._inn = tuple(inn)
        return self._inn

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    def num_arcs(self) -> int:
        return sum(row.bit_count() for row in self.out)

    def out_degree(self, v: int) -> int:
        return self.out[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.inn[v].bit_count()

    def digons(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.arcs() if u < v and self.out[v] >> u & 1]

    def is_oriented(self) -> bool:
        return all(self.out[u] & self.inn[u] == 0 for u in range(self.n))

    def is_tournament(self) -> bool:
        full = (1 << self.n) - 1
        return all(
            self.out[u] & self.inn[u] == 0 and self.out[u] | self.inn[u] | (1 << u) == full
            for u in range(self.n)
        )

    def underlying_multiset(self) -> dict[tuple[int, int], int]:
        """Edge multiplicities of the underlying multigraph UG(D)."""
        edges: dict[tuple[int, int], int] = {}
        for u, v in self.arcs():
            key = (min(u, v), max(u, v))
            edges[key] = edges.get(key, 0) + 1
        return edges

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.out == other.out

    def __hash__(self):
        return hash((self.n, self.out))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, arcs={self.arcs()})"


class Tournament(Digraph):
    """A Digraph validated to be an orientation of the complete graph."""

    __slots__ = ()

    def __init__(self, n: int, out: Sequence[int]):
        super().__init__(n, out)
        if not self.is_tournament():
            raise PreconditionError("not a tournament")

    @classmethod
    def from_digraph(cls, d: Digraph) -> "Tournament":
        return cls(d.n, d.out)

    @classmethod
    def from_bits(cls, n: int, code: str) -> "Tournament":
        """Pairs (i, j), i < j, in row-major order; '1' means i -> j."""
        if len(code) != n * (n - 1) // 2:
            raise PreconditionError(f"expected {n * (n - 1) // 2} bits, got {len(code)}")
        out = [0] * n
        pos = 0
        for i in range(n):
            for j in range(i + 1, n):
                c = code[pos]
                pos += 1
                if c == "1":
                    out[i] |= 1 << j
                elif c == "0":
                    out[j] |= 1 << i
                else:
                    raise PreconditionError(f"bad character {c!r} in tournament code")
        return cls._raw(n, out)

    def to_bits(self) -> str:
        n = self.n
        return "".join(
            "1" if self.out[i] >> j & 1 else "0" for i in range(n) for j in range(i + 1, n)
        )


def same_kind(d: Digraph, out: Sequence[int]) -> Digraph:
    # inversions preserve being a tournament, so skip revalidation
    return type(d)._raw(len(out), out)


@dataclass(frozen=True)
class InversionFamily:
    """An ordered list of vertex subsets stored as bit masks."""

    sets: tuple[int, ...] = ()

    @classmethod
    def of(cls, n: int, sets: Iterable) -> "InversionFamily":
        return cls(tuple(to_mask(n, x) for x in sets))

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def as_lists(self) -> list[list[int]]:
        return [members(x) for x in self.sets]

    def pruned(self) -> "InversionFamily":
        """Drop sets of size at most one; they reverse nothing."""
        return InversionFamily(tuple(x for x in self.sets if x.bit_count() >= 2))


@dataclass(frozen=True)
class VectorLabeling:
    """Per-vertex vectors in F_2^t; coordinate i is the indicator of set i."""

    t: int
    vec: tuple[int, ...]

    def __post_init__(self):
        for v in self.vec:
            if v < 0 or v >> self.t:
                raise PreconditionError(f"vector {v:#x} does not fit in {self.t} coordinates")

    @classmethod
    def from_family(cls, n: int, family: InversionFamily) -> "VectorLabeling":
        vec = [0] * n
        for i, x in enumerate(family.sets):
            for v in bits(x):
                vec[v] |= 1 << i
        return cls(len(family), tuple(vec))

    def coordinate_sets(self) -> InversionFamily:
        sets = []
        for i in range(self.t):
            sets.append(sum(1 << v for v, x in enumerate(self.vec) if x >> i & 1))
        return InversionFamily(tuple(sets))


def flip_rows(n: int, masks: Iterable[int]) -> list[int]:
    """flip[u] has bit v iff an odd number of the masks contain both u and v."""
    flip = [0] * n
    for x in masks:
        for u in bits(x):
            flip[u] ^= x & ~(1 << u)
    return flip


def apply_flips(out: Sequence[int], inn: Sequence[int], flip: Sequence[int]) -> list[int]:
    return [(o & ~f) | (i & f) for o, i, f in zip(out, inn, flip)]


def invert(d: Digraph, x) -> Digraph:
    x = to_mask(d.n, x)
    out = list(d.out)
    inn = d.inn
    for u in bits(x):
        out[u] = (out[u] & ~x) | (inn[u] & x)
    return same_kind(d, out)


def invert_family(d: Digraph, family) -> Digraph:
    if not isinstance(family, InversionFamily):
        family = InversionFamily.of(d.n, family)
    for x in family.sets:
        to_mask(d.n, x)
    return same_kind(d, apply_flips(d.out, d.inn, flip_rows(d.n, family.sets)))


def apply_vector_labeling(d: Digraph, labeling: VectorLabeling) -> Digraph:
    if len(labeling.vec) != d.n:
        raise PreconditionError(f"labeling has {len(labeling.vec)} vectors for {d.n} vertices")
    vec = labeling.vec
    flip = []
    for u in range(d.n):
        row = 0
        for v in range(d.n):
            if v != u and (vec[u] & vec[v]).bit_count() & 1:
                row |= 1 << v
        flip.append(row)
    return same_kind(d, apply_flips(d.out, d.inn, flip))


def converse(d: Digraph) -> Digraph:
    return same_kind(d, d.inn)


def induced(d: Digraph, s) -> Digraph:
    """Subdigraph on s, relabelled 0..|s|-1 in increasing vertex order."""
    verts = members(to_mask(d.n, s))
    pos = {v: i for i, v in enumerate(verts)}
    out = []
    for v in verts:
        row = 0
        for w in bits(d.out[v]):
            if w in pos:
                row |= 1 << pos[w]
        out.append(row)
    return same_kind(d, out)


def relabel(d: Digraph, perm: Sequence[int]) -> Digraph:
    """Vertex v of d becomes vertex perm[v]."""
    out = [0] * d.n
    for u in range(d.n):
        row = 0
        for v in bits(d.out[u]):
            row |= 1 << perm[v]
        out[perm[u]] = row
    return same_kind(d, out)


def disjoint_union(*parts: Digraph) -> tuple[list[int], list[int]]:
    """Out-rows of the disjoint union and the offset of each part."""
    out: list[int] = []
    offsets = []
    for d in parts:
        off = len(out)
        offsets.append(off)
        out.extend(row << off for row in d.out)
    return out, offsets


def rotative_tournament(k: int) -> Tournament:
    """Vertex i (0-based) beats i-1, ..., i-k modulo 2k+1."""
    if k < 0:
        raise PreconditionError("k must be non-negative")
    n = 2 * k + 1
    out = [0] * n
    for i in range(n):
        for d in range(1, k + 1):
            out[i] |= 1 << ((i - d) % n)
    return Tournament._raw(n, out)


def transitive_tournament(n: int) -> Tournament:
    """Arc i -> j for all i < j."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    full = (1 << n) - 1
    return Tournament._raw(n, [full & ~((1 << (i + 1)) - 1) for i in range(n)])


def random_tournament(n: int, seed) -> Tournament:
    if n < 1:
        raise PreconditionError("n must be at least 1")
    rng = random.Random(seed)
    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.getrandbits(1):
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
    return Tournament._raw(n, out)


def random_digraph(n: int, seed, p: float = 0.3, digon_p: float = 0.1) -> Digraph:
    rng = random.Random(seed)
    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            r = rng.random()
            if r < digon_p:
                out[i] |= 1 << j
                out[j] |= 1 << i
            elif r < digon_p + p:
                out[i] |= 1 << j
            elif r < digon_p + 2 * p:
                out[j] |= 1 << i
    return Digraph._raw(n, out)


def dominates(d: Digraph, a, b) -> bool:
    """True iff every vertex of a has an arc to every vertex of b (a => b)."""
    a = to_mask(d.n, a)
    b = to_mask(d.n, b)
    return all(d.out[u] & b == b for u in bits(a))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"bad edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise PreconditionError(f"repeated edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def random(cls, n: int, p: float, seed) -> "Graph":
        rng = random.Random(seed)
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))

    def adjacency(self) -> list[int]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj
