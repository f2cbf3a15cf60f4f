"""Randomised inversion families, each verified by flow before it is returned.

Randomness comes from random.Random seeded by the caller; identical
(input, config) pairs give identical certificates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from itertools import combinations, product
from math import ceil, floor, log2, sqrt
from typing import Callable

from scipy.stats import beta

from .certificate import Certificate, certify
from .connectivity import (
    complete_to_eulerian_tournament,
    is_k_arc_strong,
    is_k_strong,
    k_strong_fast,
)
from .construct import kstrong_2k_family, transform_between
from .core import (
    InvlabError,
    PreconditionError,
    Tournament,
    VectorLabeling,
    bits,
    induced,
    invert,
    invert_family,
    members,
)


class RetryExhausted(InvlabError):
    def __init__(self, message: str, stats: dict):
        super().__init__(message)
        self.stats = stats


@dataclass(frozen=True)
class RandomizedConfig:
    seed: int
    max_retries: int = 50
    t: int = 2
    t_cap: int = 16
    epsilon: float = 0.5
    q: int | None = None
    q_star: int | None = None
    fallback: bool = True


@dataclass(frozen=True)
class DefectProfile:
    k: int
    defects: dict

    @classmethod
    def of(cls, t: Tournament, k: int, vertices) -> "DefectProfile":
        return cls(k, {b: abs(k - t.in_degree(b)) for b in vertices})

    def max(self) -> int:
        return max(self.defects.values(), default=0)


def _nonzero_vector(rng: random.Random, t: int) -> int:
    return rng.randrange(1, 1 << t)


def _fallback(t: Tournament, k: int, prop: str, provenance: str, stats: dict) -> Certificate:
    if k_strong_fast(t.n, t.out, t.inn, k):
        fam = []
    else:
        fam = kstrong_2k_family(t, k)
    stats = dict(stats, fallback=True)
    return certify(t, fam, prop, k, f"{provenance}>make_kstrong_2k", stats)


def _prune(t: Tournament, fam: list[int], ok: Callable) -> list[int]:
    """Drop sets one at a time (first to last) while the property survives."""
    fam = [x for x in fam if x.bit_count() >= 2]
    i = 0
    while i < len(fam):
        trial = fam[:i] + fam[i + 1:]
        if ok(invert_family(t, trial)):
            fam = trial
        else:
            i += 1
    return fam


# ----------------------------------------------------------- vector scheme

def sample_vectors(t: Tournament, k: int, dim: int, retries: int, rng: random.Random):
    """Draw nonzero labels until the labelled tournament is k-strong.

    Returns (labeling or None, number of draws used).
    """
    for attempt in range(1, retries + 1):
        lab = VectorLabeling(dim, tuple(_nonzero_vector(rng, dim) for _ in range(t.n)))
        fam = lab.coordinate_sets()
        result = invert_family(t, fam)
        if k_strong_fast(t.n, result.out, result.inn, k):
            return lab, attempt
    return None, retries


def random_kstrong_vectors(t: Tournament, k: int, cfg: RandomizedConfig) -> Certificate:
    if not t.is_tournament():
        raise PreconditionError("input must be a tournament")
    if t.n <= 2 * k:
        raise PreconditionError(f"need n >= 2k+1 = {2 * k + 1}")
    rng = random.Random(cfg.seed)
    stats: dict = {"draws": 0, "dims": []}
    dim = cfg.t
    lab = None
    while dim <= cfg.t_cap:
        lab, used = sample_vectors(t, k, dim, cfg.max_retries, rng)
        stats["draws"] += used
        stats["dims"].append(dim)
        if lab is not None:
            break
        dim *= 2
    if lab is None:
        if not cfg.fallback:
            raise RetryExhausted("no k-strong labeling found", stats)
        return _fallback(t, k, "k-strong", "random_kstrong_vectors", stats)
    raw = list(lab.coordinate_sets())
    stats["t"] = lab.t
    fam = _prune(t, raw, lambda d: is_k_strong(d, k).verdict)
    stats["pruned_size"] = len(fam)
    if len(fam) > 2 * k:
        return _fallback(t, k, "k-strong", "random_kstrong_vectors", stats)
    return certify(t, fam, "k-strong", k, "random_kstrong_vectors", stats)


# ------------------------------------------------------- order 2k+1 pipeline

def _rank(vectors) -> int:
    rows = list(vectors)
    rank = 0
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def _events(t1: Tournament, k: int, amask: int, bverts, vec, q: int) -> list[str]:
    """Which of the three bad events hold after the random round."""
    found = []
    lk = log2(k) if k > 1 else 0.0
    if any(abs(k - t1.in_degree(b)) >= 2 * sqrt(k) * lk for b in bverts):
        found.append("E1")
    tuples = list(combinations(bverts, q))
    if any(_rank(vec[b] for b in tup) < q for tup in tuples):
        found.append("E2")
    small = 5 * sqrt(k) * lk
    for tup in tuples:
        if _rank(vec[b] for b in tup) < q:
            continue
        for signs in product((0, 1), repeat=q):
            common = amask
            for b, s in zip(tup, signs):
                common &= t1.out[b] if s else t1.inn[b]
            if common.bit_count() <= small:
                found.append("E3")
                break
        if "E3" in found:
            break
    return found


def _balance_batch(t1: Tournament, k: int, amask: int, batch: list[int]) -> int:
    """Grow Y from the batch until every batch vertex has in-degree k.

    Each added y is in A, outside Y, and lies on the correct side of every
    batch vertex of maximum defect, so that maximum drops by one per step.
    """
    y = sum(1 << b for b in batch)
    cur = invert(t1, y)
    prof = DefectProfile.of(cur, k, batch)
    while prof.max() > 0:
        top = prof.max()
        cand = amask & ~y
        for b in batch:
            if prof.defects[b] == top:
                # in-degree too high: flip an in-neighbour, else an out-neighbour
                cand &= t1.inn[b] if cur.in_degree(b) > k else t1.out[b]
        if cand == 0:
            raise RetryExhausted("no vertex of A balances the batch", {"batch": batch})
        pick = (cand & -cand).bit_length() - 1
        y |= 1 << pick
        cur = invert(t1, y)
        new = DefectProfile.of(cur, k, batch)
        for b in batch:
            assert abs(new.defects[b] - prof.defects[b]) == 1, "defect must move by one"
        assert new.max() == top - 1
        prof = new
    return y


def _pipeline_family(t: Tournament, k: int, cfg: RandomizedConfig, rng: random.Random, stats: dict) -> list[int]:
    n = t.n
    amask = (1 << k) - 1
    bverts = list(range(k, n))
    lk = log2(k) if k > 1 else 0.0
    q = cfg.q if cfg.q is not None else max(1, ceil(lk / 4))
    q_star = cfg.q_star if cfg.q_star is not None else ceil(lk ** 2)
    stats.update(q=q, q_star=q_star)
    rounds = []
    t1 = t
    events = []
    for attempt in range(1, cfg.max_retries + 1):
        rounds = [rng.getrandbits(n) for _ in range(q_star)]
        t1 = invert_family(t, rounds)
        vec = {b: sum(1 << i for i, x in enumerate(rounds) if x >> b & 1) for b in bverts}
        events = _events(t1, k, amask, bverts, vec, q)
        if not events:
            break
    stats.update(event_rounds=attempt, events=events)
    # parity-homogeneous batches of size q while (batches * q) <= 2k/3
    by_parity = {0: [], 1: []}
    for b in bverts:
        by_parity[abs(k - t1.in_degree(b)) % 2].append(b)
    batches = []
    for parity in (0, 1):
        group = by_parity[parity]
        for i in range(0, len(group) - q + 1, q):
            if 3 * (len(batches) + 1) * q <= 2 * k:
                batches.append(group[i:i + q])
    stats["batches"] = len(batches)
    ys = [_balance_batch(t1, k, amask, batch) for batch in batches]
    t2 = invert_family(t1, ys)
    xmask = sum(1 << b for batch in batches for b in batch)
    t3 = complete_to_eulerian_tournament(t2, xmask)
    rest = [v for v in range(n) if not xmask >> v & 1]
    rmask = sum(1 << v for v in rest)
    zs = transform_between(induced(t2, rmask), induced(t3, rmask))
    zs = [sum(1 << rest[i] for i in bits(z)) for z in zs]
    stats["r"] = len(zs)
    fam = [x for x in rounds if x.bit_count() >= 2] + ys + zs
    assert invert_family(t, fam) == t3
    return fam


def mkstrich_pipeline(t: Tournament, k: int, cfg: RandomizedConfig) -> Certificate:
    if not t.is_tournament():
        raise PreconditionError("input must be a tournament")
    if k < 1 or t.n != 2 * k + 1:
        raise PreconditionError("the pipeline needs a tournament on exactly 2k+1 vertices")
    if is_k_arc_strong(t, k):
        return certify(t, (), "k-arc-strong", k, "mkstrich_pipeline")
    rng = random.Random(cfg.seed)
    stats: dict = {}
    try:
        fam = _pipeline_family(t, k, cfg, rng, stats)
    except RetryExhausted as exc:
        stats["failure"] = str(exc)
        return _fallback(t, k, "k-arc-strong", "mkstrich_pipeline", stats)
    stats["pipeline_family_size"] = len(fam)
    if len(fam) > 2 * k:
        return _fallback(t, k, "k-arc-strong", "mkstrich_pipeline", stats)
    return certify(t, fam, "k-arc-strong", k, "mkstrich_pipeline", stats)


# ------------------------------------------------------------ general driver

def _lift(verts: list[int], fam) -> list[int]:
    return [sum(1 << verts[i] for i in bits(x)) for x in fam]


def _drive(t: Tournament, k: int, cfg: RandomizedConfig, rng: random.Random, trace: list) -> list[int]:
    n = t.n
    if is_k_arc_strong(t, k):
        return []
    if n == 2 * k + 1:
        sub = mkstrich_pipeline(t, k, replace(cfg, seed=rng.getrandbits(64)))
        trace.append(("base", n, sub.provenance))
        return list(sub.family)
    if n > 4 * k - 2:
        v = next(v for v in range(n) if min(t.out_degree(v), t.in_degree(v)) >= k)
        trace.append(("peel", n, v))
        rest = [w for w in range(n) if w != v]
        return _lift(rest, _drive(induced(t, sum(1 << w for w in rest)), k, cfg, rng, trace))
    lk = log2(k) if k > 1 else 0.0
    if n > 2 * k + 1 + 6 * sqrt(k) * lk:
        size = 2 * k + 1 + floor(6 * sqrt(k) * lk)
        amask = (1 << size) - 1
        bmask = ((1 << n) - 1) & ~amask
        for attempt in range(cfg.max_retries):
            x = rng.getrandbits(size)
            t1 = invert(t, bmask | x)
            if all(min((t1.out[b] & amask).bit_count(), (t1.inn[b] & amask).bit_count()) >= k
                   for b in bits(bmask)):
                trace.append(("split", n, attempt + 1))
                return [bmask | x] + _drive(induced(t1, amask), k, cfg, rng, trace)
        raise RetryExhausted("no random split found", {"n": n})
    # fix the last vertex's degrees with one set, then drop it
    v = n - 1
    out_d, in_d = t.out_degree(v), t.in_degree(v)
    fam = []
    cur = t
    if min(out_d, in_d) < k:
        pool = t.inn[v] if out_d < k else t.out[v]
        chosen = members(pool)[:k - min(out_d, in_d)]
        x = (1 << v) | sum(1 << w for w in chosen)
        fam.append(x)
        cur = invert(t, x)
    trace.append(("fix", n, v))
    rest = list(range(n - 1))
    return fam + _lift(rest, _drive(induced(cur, (1 << (n - 1)) - 1), k, cfg, rng, trace))


def upper_mprime_driver(t: Tournament, k: int, cfg: RandomizedConfig) -> Certificate:
    if not t.is_tournament():
        raise PreconditionError("input must be a tournament")
    if k < 1 or t.n < 2 * k + 1:
        raise PreconditionError(f"need n >= 2k+1 = {2 * k + 1}")
    rng = random.Random(cfg.seed)
    trace: list = []
    stats: dict = {"trace": trace}
    try:
        fam = _drive(t, k, cfg, rng, trace)
    except RetryExhausted as exc:
        stats["failure"] = str(exc)
        return _fallback(t, k, "k-arc-strong", "upper_mprime_driver", stats)
    fam = [x for x in fam if x.bit_count() >= 2]
    stats["driver_family_size"] = len(fam)
    if len(fam) > 2 * k:
        fam = _prune(t, fam, lambda d: is_k_arc_strong(d, k).verdict)
        if len(fam) > 2 * k:
            return _fallback(t, k, "k-arc-strong", "upper_mprime_driver", stats)
    return certify(t, fam, "k-arc-strong", k, "upper_mprime_driver", stats)


# ------------------------------------------------------------- Monte Carlo

@dataclass(frozen=True)
class Estimate:
    successes: int
    trials: int
    low: float
    high: float
    details: dict = field(default_factory=dict, compare=False)

    @property
    def rate(self) -> float:
        return self.successes / self.trials


def clopper_pearson(successes: int, trials: int, alpha: float = 0.01) -> tuple[float, float]:
    low = 0.0 if successes == 0 else float(beta.ppf(alpha / 2, successes, trials - successes + 1))
    high = 1.0 if successes == trials else float(beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return low, high


def _dot(a: int, b: int) -> int:
    return (a & b).bit_count() & 1


def _full_rank_matrix(rng: random.Random, q: int, qp: int) -> list[int]:
    while True:
        rows = [rng.getrandbits(qp) for _ in range(q)]
        if _rank(rows) == q:
            return rows


# linear-image: a fixed full-rank q x q' matrix A over F_2 and a target v;
# success when A w = v for uniform w.
# dot-pair: fixed distinct nonzero u, v and bits x, y; success when
# u.w = x and v.w = y for uniform nonzero w.

def _linear_image_setup(rng, params):
    q, qp = params["q"], params["q_prime"]
    if q > qp:
        raise PreconditionError("need q <= q'")
    return {"rows": _full_rank_matrix(rng, q, qp), "target": rng.getrandbits(q) if q else 0}


def _linear_image_trial(rng, params, setup):
    w = rng.getrandbits(params["q_prime"]) if params["q_prime"] else 0
    got = sum(_dot(r, w) << i for i, r in enumerate(setup["rows"]))
    return got == setup["target"]


def _dot_pair_setup(rng, params):
    t = params["t"]
    u = params.get("u", 1)
    v = params.get("v", 2)
    if u == v or u == 0 or v == 0 or max(u, v) >> t:
        raise PreconditionError("u and v must be distinct nonzero vectors of F_2^t")
    return {"u": u, "v": v, "x": params.get("x", 1), "y": params.get("y", 1)}


def _dot_pair_trial(rng, params, setup):
    w = _nonzero_vector(rng, params["t"])
    return _dot(setup["u"], w) == setup["x"] and _dot(setup["v"], w) == setup["y"]


EXPERIMENTS = {
    "linear-image": (_linear_image_setup, _linear_image_trial),
    "dot-pair": (_dot_pair_setup, _dot_pair_trial),
}


def estimate_success_probability(experiment, params: dict, trials: int, seed) -> Estimate:
    """Monte-Carlo success rate with a 99% Clopper-Pearson interval.

    The setup draws from its own stream; trial i draws from a stream seeded
    by (seed, i), so results do not depend on scheduling.
    """
    if trials < 1:
        raise PreconditionError("trials must be positive")
    setup_fn, trial_fn = EXPERIMENTS[experiment] if isinstance(experiment, str) else experiment
    setup = setup_fn(random.Random(f"{seed}:setup"), params)
    wins = 0
    for i in range(trials):
        wins += bool(trial_fn(random.Random(f"{seed}:{i}"), params, setup))
    low, high = clopper_pearson(wins, trials)
    return Estimate(wins, trials, low, high, {"setup": setup})


def dot_pair_exact(t: int, u: int, v: int, x: int, y: int) -> float:
    """Exact probability by enumerating every nonzero w."""
    hits = sum(_dot(u, w) == x and _dot(v, w) == y for w in range(1, 1 << t))
    return hits / ((1 << t) - 1)


def dot_pair_bound(t: int) -> float:
    return 0.25 - 0.75 / ((1 << t) - 1)
