"""Median orders of tournaments: exact subset DP and single-vertex local search."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .connectivity import reach
from .core import Digraph, PreconditionError, bits, to_mask

EXACT_CAP = 22


@dataclass(frozen=True)
class VertexOrder:
    order: tuple[int, ...]
    backward_count: int

    def __str__(self):
        return " ".join(map(str, self.order))


def backward_arcs(t: Digraph, order: Sequence[int]) -> int:
    seen = 0
    count = 0
    for v in order:
        count += (t.out[v] & seen).bit_count()
        seen |= 1 << v
    return count


def m2_violation(t: Digraph, order: Sequence[int]) -> tuple[int, int] | None:
    """First interval (i, j) breaking the half-domination property, if any.

    For every i < j, order[i] must beat at least half of order[i+1..j] and
    order[j] must be beaten by at least half of order[i..j-1].
    """
    n = len(order)
    out = t.out
    for i in range(n):
        u = order[i]
        wins = 0
        for j in range(i + 1, n):
            wins += out[u] >> order[j] & 1
            if 2 * wins < j - i:
                return (i, j)
    for j in range(n):
        w = order[j]
        wins = 0
        for i in range(j - 1, -1, -1):
            wins += out[order[i]] >> w & 1
            if 2 * wins < j - i:
                return (i, j)
    return None


def is_feedback_valid(t: Digraph, order: Sequence[int]) -> bool:
    return m2_violation(t, order) is None


def exact_median_order(t: Digraph) -> VertexOrder:
    """Minimum backward arcs; ties go to the lexicographically smallest order."""
    n = t.n
    if n > EXACT_CAP:
        raise PreconditionError(f"exact median order is capped at n = {EXACT_CAP}")
    if n == 0:
        return VertexOrder((), 0)
    size = 1 << n
    masks = np.arange(size, dtype=np.uint32)
    pop = np.bitwise_count(masks)
    layers = np.argsort(pop, kind="stable").astype(np.uint32)
    starts = np.searchsorted(pop[layers], np.arange(n + 2))
    # best[S]: fewest backward arcs when S is ordered on its own
    best = np.zeros(size, dtype=np.int32)
    inn = [np.uint32(r) for r in t.inn]
    for layer in range(1, n + 1):
        m = layers[starts[layer]:starts[layer + 1]]
        cur = np.full(m.shape, np.iinfo(np.int32).max, dtype=np.int32)
        for v in range(n):
            bit = np.uint32(1 << v)
            has = (m & bit) != 0
            sub = m[has]
            cost = best[sub ^ bit] + np.bitwise_count(sub & inn[v]).astype(np.int32)
            cur[has] = np.minimum(cur[has], cost)
        best[m] = cur
    order = []
    s = size - 1
    while s:
        for v in bits(s):
            rest = s & ~(1 << v)
            if best[s] == (t.inn[v] & s).bit_count() + best[rest]:
                order.append(v)
                s = rest
                break
    return VertexOrder(tuple(order), int(best[size - 1]))


def local_median_order(t: Digraph, seed=None, start: Sequence[int] | None = None) -> VertexOrder:
    """Local optimum under moving one vertex to another position.

    Passes over positions in index order and applies the first improving
    relocation found; stops after a full pass without improvement.
    """
    n = t.n
    if start is not None:
        order = list(start)
    else:
        order = list(range(n))
        random.Random(seed).shuffle(order)
    out = t.out
    improved = True
    while improved:
        improved = False
        for j in range(n):
            v = order[j]
            target = None
            # moving v in front of order[i] for i < j
            delta = 0
            gains = {}
            for i in range(j - 1, -1, -1):
                w = order[i]
                delta += (out[w] >> v & 1) - (out[v] >> w & 1)
                gains[i] = delta
            delta = 0
            for i in range(j + 1, n):
                w = order[i]
                delta += (out[v] >> w & 1) - (out[w] >> v & 1)
                gains[i] = delta
            for i in range(n):
                if i != j and gains[i] < 0:
                    target = i
                    break
            if target is not None:
                order.pop(j)
                order.insert(target, v)
                improved = True
    result = VertexOrder(tuple(order), backward_arcs(t, order))
    bad = m2_violation(t, result.order)
    if bad is not None:
        raise AssertionError(f"local optimum violates half-domination at {bad}")
    return result


def feedback_order(t: Digraph, seed=None, method: str = "auto") -> VertexOrder:
    """Exact median order for n up to the DP cap, local search beyond it."""
    if method == "exact" or (method == "auto" and t.n <= EXACT_CAP):
        return exact_median_order(t)
    if method not in ("auto", "local"):
        raise PreconditionError(f"unknown order method {method!r}")
    return local_median_order(t, seed)


def reach_after_deletion(t: Digraph, order: VertexOrder, f) -> int:
    f = to_mask(t.n, f)
    v1 = order.order[0]
    if f >> v1 & 1:
        raise PreconditionError("the first vertex of the order must not be deleted")
    alive = ((1 << t.n) - 1) & ~f
    return reach(t.out, v1, alive).bit_count()


def check_reachability_bound(t: Digraph, order: VertexOrder, f) -> bool:
    """|R+_{T-F}(v1)| >= n - 2|F| for the first vertex v1 of the order."""
    f = to_mask(t.n, f)
    return reach_after_deletion(t, order, f) >= t.n - 2 * f.bit_count()
