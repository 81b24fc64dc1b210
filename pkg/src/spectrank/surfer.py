"""Monte-Carlo random surfer.

An independent statistical check of PageRank: simulate the damped walk
and count visits. Random numbers come from NumPy's PCG64 bit generator
seeded with ``SimConfig.seed``, drawn in blocks and consumed by a
numba-compiled walk loop, so a given seed always gives the same counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from spectrank.errors import InputError
from spectrank.graph import ScoreVector, SparseGraph, out_strength
from spectrank.pagerank import PageRankConfig, teleport_vectors

BURN_IN = 1000
BLOCK = 1 << 20


@dataclass(frozen=True)
class SimConfig:
    steps: int = 1_000_000
    alpha: float = 0.85
    seed: int = 0
    personalization: ScoreVector | None = None
    dangling_vector: ScoreVector | None = None

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise InputError(f"steps must be a positive integer, got {self.steps}")
        if not 0.0 <= self.alpha < 1.0:
            raise InputError(f"alpha must lie in [0, 1), got {self.alpha}")
        if not 0 <= int(self.seed) < 2**64:
            raise InputError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@numba.njit(cache=True)
def _walk(state, follow, pick, alpha, indptr, indices, cumw, rowsum, cum_v, cum_w, counts, skip):
    """Advance the walk once per ``(follow, pick)`` pair; count visits after ``skip`` steps."""
    for t in range(follow.shape[0]):
        if follow[t] < alpha:
            lo = indptr[state]
            hi = indptr[state + 1]
            if rowsum[state] > 0.0:
                k = lo + np.searchsorted(cumw[lo:hi], pick[t] * rowsum[state], side="right")
                if k >= hi:
                    k = hi - 1
                state = indices[k]
            else:
                state = min(np.searchsorted(cum_w, pick[t], side="right"), cum_w.shape[0] - 1)
        else:
            state = min(np.searchsorted(cum_v, pick[t], side="right"), cum_v.shape[0] - 1)
        if t >= skip:
            counts[state] += 1
    return state


def simulate(g: SparseGraph, cfg: SimConfig = SimConfig()) -> ScoreVector:
    """Visit frequencies of the damped random surfer after ``cfg.steps`` moves.

    At each step the surfer follows an out-edge (chosen proportionally to
    weight) with probability ``alpha``, jumping along the dangling vector
    when the current node has no out-edges; otherwise it teleports along
    the personalization vector. The first 1000 moves are discarded.
    """
    if g.n == 0:
        raise InputError("cannot simulate on an empty graph")
    if g.m and g.matrix.data.min() < 0:
        raise InputError("random surfer needs nonnegative weights")
    v, w = teleport_vectors(
        g, PageRankConfig(cfg.alpha, cfg.personalization, cfg.dangling_vector)
    )
    mat = g.matrix
    indptr = mat.indptr.astype(np.int64)
    indices = mat.indices.astype(np.int64)
    # cumulative weights restart at every row
    cumw = np.cumsum(mat.data)
    row_start = np.repeat(np.concatenate(([0.0], cumw))[indptr[:-1]], np.diff(indptr))
    cumw = cumw - row_start
    rowsum = out_strength(g).values
    cum_v = np.cumsum(v) / v.sum()
    cum_w = np.cumsum(w) / w.sum()

    rng = np.random.Generator(np.random.PCG64(int(cfg.seed)))
    counts = np.zeros(g.n, dtype=np.int64)
    state = int(min(np.searchsorted(cum_v, rng.random(), side="right"), g.n - 1))
    remaining = BURN_IN + int(cfg.steps)
    skip = BURN_IN
    while remaining:
        size = min(BLOCK, remaining)
        u = rng.random((2, size))
        state = _walk(state, u[0], u[1], cfg.alpha, indptr, indices, cumw, rowsum, cum_v, cum_w, counts, skip)
        skip = max(skip - size, 0)
        remaining -= size
    return ScoreVector(counts / counts.sum(), "sum-to-one")
