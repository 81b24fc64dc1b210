"""PageRank on the sparse link matrix.

The Google matrix ``G = alpha*S + (1-alpha)*E`` is never formed. Each
power step computes

    pi <- alpha * (pi H + (pi . d) w) + (1 - alpha) * (sum pi) v

where ``H`` is the row-normalized adjacency, ``d`` flags dangling nodes,
``w`` is the dangling vector and ``v`` the personalization vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from spectrank.errors import InputError
from spectrank.graph import ScoreVector, SparseGraph, as_values, out_strength, row_stochastic, uniform
from spectrank.solver import SolveReport, SolverConfig, power_method


@dataclass(frozen=True)
class PageRankConfig:
    alpha: float = 0.85
    personalization: ScoreVector | None = None
    dangling_vector: ScoreVector | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise InputError(f"alpha must lie in [0, 1), got {self.alpha}")


def _probability(v, n: int, name: str) -> np.ndarray:
    arr = as_values(v, n, name)
    if np.any(arr < 0):
        raise InputError(f"{name} has negative entries")
    if abs(arr.sum() - 1.0) > 1e-12:
        raise InputError(f"{name} must sum to 1, sums to {arr.sum()!r}")
    return arr


def teleport_vectors(g: SparseGraph, cfg: PageRankConfig) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(personalization, dangling)`` as validated probability arrays."""
    v = uniform(g.n) if cfg.personalization is None else _probability(cfg.personalization, g.n, "personalization")
    w = v if cfg.dangling_vector is None else _probability(cfg.dangling_vector, g.n, "dangling vector")
    return v, w


class GoogleOperator:
    """Row-vector action of the Google matrix, built from the sparse ``H``."""

    def __init__(self, g: SparseGraph, cfg: PageRankConfig):
        self.alpha = cfg.alpha
        self.v, self.w = teleport_vectors(g, cfg)
        self.ht = row_stochastic(g).matrix.T.tocsr()
        self.dangling = out_strength(g).values == 0

    def patched(self, x: np.ndarray) -> np.ndarray:
        """``x S``: follow links, dangling mass redistributed along ``w``."""
        return self.ht @ x + x[self.dangling].sum() * self.w

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.alpha * self.patched(x) + (1.0 - self.alpha) * x.sum() * self.v


def pagerank(
    g: SparseGraph,
    cfg: PageRankConfig = PageRankConfig(),
    start: ScoreVector | np.ndarray | None = None,
) -> tuple[ScoreVector, SolveReport]:
    """Stationary distribution of the damped random surfer.

    The iteration starts from the personalization vector unless ``start``
    is given.

    >>> from spectrank.graph import build_graph
    >>> pi, report = pagerank(build_graph([("A", "B"), ("B", "A")]))
    >>> pi.tolist()
    [0.5, 0.5]
    """
    if g.n == 0:
        raise InputError("PageRank needs at least one node")
    op = GoogleOperator(g, cfg)
    x0 = op.v if start is None else as_values(start, g.n, "start vector")
    return power_method(op, x0, cfg.solver, "sum-to-one")


def endogenous_exogenous_split(
    g: SparseGraph, cfg: PageRankConfig, pi: ScoreVector
) -> tuple[ScoreVector, ScoreVector]:
    """Split PageRank into link-driven ``alpha*pi*S`` and teleport ``(1-alpha)*v`` parts."""
    op = GoogleOperator(g, cfg)
    x = as_values(pi, g.n, "PageRank vector")
    endogenous = cfg.alpha * op.patched(x)
    exogenous = (1.0 - cfg.alpha) * op.v
    return ScoreVector(endogenous, "none"), ScoreVector(exogenous, "none")
