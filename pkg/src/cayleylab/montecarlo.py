"""Random Cayley digraphs: sampling, diameters, exhaustive and Monte Carlo probabilities.

Sampling uses a counter-based generator (Philox) keyed by ``(seed, block)``
where trials are grouped in fixed blocks of :data:`BLOCK_SIZE`.  A block's
draws depend only on the seed and the block index, so estimates are
bit-identical no matter how blocks are spread over worker threads.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations, islice

import numpy as np
from scipy.stats import binomtest

from .errors import FeasibilityError, PreconditionError
from .groups import FiniteGroup

DEFAULT_SEED = 20070101
BLOCK_SIZE = 2048
EXHAUSTIVE_MAX_SUBSETS = 10**6
INFINITE = math.inf
THREADS_ENV = "CAYLEYLAB_THREADS"


@dataclass(frozen=True)
class GeneratingSet:
    group: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        m = self.members
        if list(m) != sorted(set(m)):
            raise PreconditionError("generating set members must be sorted and distinct")
        if m and (m[0] <= 0 or m[-1] >= self.group.order):
            raise PreconditionError("generating set must lie in G minus the identity")

    @property
    def k(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class DiameterEstimate:
    trials: int
    hits: int
    point: float
    ci_low: float
    ci_high: float
    seed: int
    group_spec: str = ""
    n: int = 0
    k: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        order = ["group_spec", "n", "k", "trials", "hits", "point", "ci_low", "ci_high", "seed"]
        return {key: d[key] for key in order}

    @classmethod
    def from_dict(cls, d: dict) -> "DiameterEstimate":
        return cls(**{key: d[key] for key in
                      ("trials", "hits", "point", "ci_low", "ci_high", "seed",
                       "group_spec", "n", "k")})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def wilson_interval(hits: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials < 1 or not 0 <= hits <= trials:
        raise PreconditionError(f"bad counts hits={hits}, trials={trials}")
    ci = binomtest(hits, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def _check_k(G: FiniteGroup, k: int) -> None:
    if not 1 <= k <= G.order - 1:
        raise PreconditionError(f"need 1 <= k <= n-1 = {G.order - 1}, got k={k}")


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Independent stream for one block: Philox keyed by the 128-bit (block, seed)."""
    key = ((block & (2**64 - 1)) << 64) | (seed & (2**64 - 1))
    return np.random.Generator(np.random.Philox(key=key))


def sample_generating_set(G: FiniteGroup, k: int, rng: np.random.Generator) -> GeneratingSet:
    """Uniform k-subset of the non-identity elements."""
    _check_k(G, k)
    picks = rng.choice(G.order - 1, size=k, replace=False) + 1
    return GeneratingSet(G, tuple(sorted(int(x) for x in picks)))


def sample_subsets(G: FiniteGroup, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform k-subsets as rows (partial Fisher-Yates per row)."""
    _check_k(G, k)
    base = np.broadcast_to(np.arange(1, G.order, dtype=np.int64), (count, G.order - 1))
    return rng.permuted(base, axis=1)[:, :k]


def diameter(G: FiniteGroup, S: GeneratingSet) -> float:
    """Full BFS from the identity along g -> g s; ``INFINITE`` if S does not generate G."""
    gens = np.asarray(S.members, dtype=np.int64)
    dist = np.full(G.order, -1, dtype=np.int64)
    dist[G.identity] = 0
    frontier = np.array([G.identity], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        nxt = np.unique(np.asarray(G.multiply(frontier[:, None], gens[None, :])).ravel())
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = level
        frontier = nxt
    if np.any(dist < 0):
        return INFINITE
    return int(dist.max())


def _reach_two(G: FiniteGroup, subsets: np.ndarray) -> np.ndarray:
    """Boolean (rows, n): element reachable from 1 in at most two steps."""
    rows, k = subsets.shape
    n = G.order
    covered = np.zeros((rows, n), dtype=bool)
    idx = np.arange(rows)[:, None]
    covered[:, G.identity] = True
    covered[idx, subsets] = True
    prods = np.asarray(G.multiply(subsets[:, :, None], subsets[:, None, :])).reshape(rows, k * k)
    covered[idx, prods] = True
    return covered


def _reach_exactly_two(G: FiniteGroup, subsets: np.ndarray) -> np.ndarray:
    """Boolean (rows, n): some s1 s2 with s1, s2 in S equals the element."""
    rows, k = subsets.shape
    covered = np.zeros((rows, G.order), dtype=bool)
    prods = np.asarray(G.multiply(subsets[:, :, None], subsets[:, None, :])).reshape(rows, k * k)
    covered[np.arange(rows)[:, None], prods] = True
    return covered


def diam_gt2_mask(G: FiniteGroup, subsets: np.ndarray) -> np.ndarray:
    """Per row: diameter > 2 (non-generating sets included).  Stops after level 2."""
    return ~_reach_two(G, subsets).all(axis=1)


def coX_mask(G: FiniteGroup, y: int, subsets: np.ndarray) -> np.ndarray:
    """Per row: no directed path of length exactly 2 from 1 to y."""
    return ~_reach_exactly_two(G, subsets)[:, y]


def _workers(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, os.cpu_count() or 1))
    return max(1, threads)


def _run_blocks(G, k, trials, seed, event, threads) -> int:
    nblocks = -(-trials // BLOCK_SIZE)

    def one(b):
        count = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
        subsets = sample_subsets(G, k, count, block_rng(seed, b))
        return int(np.count_nonzero(event(subsets)))

    workers = min(_workers(threads), nblocks)
    if workers == 1:
        return sum(one(b) for b in range(nblocks))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(one, range(nblocks)))


def _estimate(G, k, trials, seed, event, threads) -> DiameterEstimate:
    _check_k(G, k)
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")
    hits = _run_blocks(G, k, trials, seed, event, threads)
    lo, hi = wilson_interval(hits, trials)
    return DiameterEstimate(trials, hits, hits / trials, lo, hi, seed, G.name, G.order, k)


def estimate_pr_diam_gt2(G: FiniteGroup, k: int, trials: int, seed: int = DEFAULT_SEED,
                         threads: int | None = None) -> DiameterEstimate:
    """Monte Carlo estimate of Pr(Diam > 2) with a 95% Wilson interval."""
    return _estimate(G, k, trials, seed, lambda s: diam_gt2_mask(G, s), threads)


def estimate_coX(G: FiniteGroup, y: int, k: int, trials: int, seed: int = DEFAULT_SEED,
                 threads: int | None = None) -> DiameterEstimate:
    """Monte Carlo estimate of Pr(no length-2 path from 1 to y)."""
    if not 0 < y < G.order:
        raise PreconditionError(f"y must be a non-identity element, got {y}")
    return _estimate(G, k, trials, seed, lambda s: coX_mask(G, y, s), threads)


# -- exhaustive oracles --------------------------------------------------------------

def _all_subsets(G: FiniteGroup, k: int):
    _check_k(G, k)
    total = math.comb(G.order - 1, k)
    if total > EXHAUSTIVE_MAX_SUBSETS:
        raise FeasibilityError(
            f"C({G.order - 1}, {k}) = {total} subsets exceeds guard {EXHAUSTIVE_MAX_SUBSETS}")
    combos = combinations(range(1, G.order), k)
    chunk = 1 << 15
    while True:
        block = np.array(list(islice(combos, chunk)), dtype=np.int64).reshape(-1, k)
        if block.shape[0] == 0:
            return
        yield block


def exhaustive_pr_diam_gt2(G: FiniteGroup, k: int) -> Fraction:
    """Exact Pr(Diam > 2) over all C(n-1, k) generating sets."""
    hits = sum(int(np.count_nonzero(diam_gt2_mask(G, block))) for block in _all_subsets(G, k))
    return Fraction(hits, math.comb(G.order - 1, k))


def exhaustive_coX(G: FiniteGroup, k: int) -> list[Fraction]:
    """Exact Pr(no length-2 path 1 -> y) for every y (index 0 is the identity, reported as-is)."""
    counts = np.zeros(G.order, dtype=np.int64)
    for block in _all_subsets(G, k):
        counts += (~_reach_exactly_two(G, block)).sum(axis=0)
    total = math.comb(G.order - 1, k)
    return [Fraction(int(c), total) for c in counts]


def exhaustive_summary(G: FiniteGroup, k: int) -> tuple[Fraction, list[Fraction]]:
    """(Pr(Diam > 2), [Pr(co X(y)) for y]) from a single enumeration."""
    hits = 0
    counts = np.zeros(G.order, dtype=np.int64)
    for block in _all_subsets(G, k):
        hits += int(np.count_nonzero(diam_gt2_mask(G, block)))
        counts += (~_reach_exactly_two(G, block)).sum(axis=0)
    total = math.comb(G.order - 1, k)
    return Fraction(hits, total), [Fraction(int(c), total) for c in counts]
