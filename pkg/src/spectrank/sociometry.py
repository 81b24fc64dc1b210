"""Sociometric status indices and pairwise sport ranking.

``seeley``   popularity as the fixed point of proportional choices
``katz``     attenuated count of paths reaching each member
``hubbell``  ``pi = pi W + v`` with arbitrary (signed) endorsements
``sport_rank``  dominant left eigenvector of the match-outcome matrix
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from spectrank.errors import InputError, NumericalError, RankingWarning
from spectrank.graph import (
    ScoreVector,
    SparseGraph,
    as_values,
    binarize,
    out_strength,
    row_stochastic,
)
from spectrank.solver import (
    ORACLE_MAX_N,
    SolveReport,
    SolverConfig,
    neumann_series,
    power_method,
    spectral_radius,
)

OUTCOMES = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class KatzConfig:
    attenuation: float = 0.1
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if not self.attenuation > 0:
            raise InputError(f"attenuation must be positive, got {self.attenuation}")


# -- Seeley -------------------------------------------------------------------


def gth_stationary(p: np.ndarray) -> np.ndarray | None:
    """Stationary vector of a row-stochastic matrix by Grassmann-Taksar-Heyman
    state reduction. Subtraction-free, so it stays accurate for nearly
    decomposable chains. Returns None when a reduction pivot vanishes
    (the chain is reducible).
    """
    a = np.array(p, dtype=float)
    n = a.shape[0]
    for k in range(n - 1, 0, -1):
        s = a[k, :k].sum()
        if s <= 0:
            return None
        a[:k, k] /= s
        a[:k, :k] += np.outer(a[:k, k], a[k, :k])
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ a[:k, k]
    return pi / pi.sum()


def seeley(choices: SparseGraph, cfg: SolverConfig = SolverConfig()) -> ScoreVector:
    """Popularity ``pi = pi P`` where ``P`` spreads each child's choices
    proportionally to their strengths. Sum-to-one.

    Solved by GTH elimination up to 2000 children, by power iteration above
    that or when the choice graph is reducible.
    """
    n = choices.n
    if n == 0:
        raise InputError("empty choice graph")
    c = out_strength(choices).values
    if np.any(c <= 0):
        who = ", ".join(repr(choices.labels[i]) for i in np.flatnonzero(c <= 0)[:5])
        raise NumericalError(f"every child must make a choice; none from {who}")
    p = row_stochastic(choices)
    if n <= ORACLE_MAX_N:
        pi = gth_stationary(p.dense())
        if pi is not None:
            return ScoreVector(pi, "sum-to-one")
        warnings.warn("choice graph is reducible; popularity may not be unique", RankingWarning, stacklevel=2)
    pt = p.matrix.T.tocsr()
    pi, report = power_method(lambda x: pt @ x, np.full(n, 1.0 / n), cfg, "sum-to-one", shift=1.0)
    if not report.converged:
        warnings.warn(f"Seeley iteration did not converge (residual {report.residual:.3g})", RankingWarning, stacklevel=2)
    return pi


# -- Katz and Hubbell -----------------------------------------------------------


def katz(g: SparseGraph, cfg: KatzConfig = KatzConfig()) -> ScoreVector:
    """Attenuated path counts ``e * sum_{k>=1} (a L)^k`` on the 0/1 adjacency.

    Raw counts, not normalized. Raises :class:`NumericalError` when the
    attenuation is not below ``1 / rho(L)``.
    """
    lmat = binarize(g)
    a = cfg.attenuation
    rho = spectral_radius(lmat, cfg.solver)
    if rho > 0 and a * rho >= 1.0:
        raise NumericalError(
            f"attenuation a = {a:.6g} must be below 1/rho(L) = {1.0 / rho:.6g} (rho(L) = {rho:.6g})"
        )
    scores, report = neumann_series(lmat, a, np.ones(g.n), False, cfg.solver)
    if not report.converged:
        warnings.warn(f"Katz series truncated after {report.iterations} terms", RankingWarning, stacklevel=2)
    return scores


def hubbell(
    g: SparseGraph,
    v: ScoreVector | np.ndarray,
    cfg: SolverConfig = SolverConfig(),
    method: str = "auto",
) -> ScoreVector:
    """Prestige ``pi = pi W + v``; weights and ``v`` may be negative.

    ``method="dense"`` solves ``pi (I - W) = v`` directly and only warns
    when ``rho(|W|) >= 1``. ``"series"`` sums ``v W^k`` and requires
    ``rho(|W|) < 1``. ``"auto"`` is dense up to 2000 nodes.
    """
    if method not in ("auto", "dense", "series"):
        raise InputError(f"unknown method {method!r}")
    n = g.n
    x = as_values(v, n, "exogenous vector")
    rho = spectral_radius(g, cfg)
    dense = method == "dense" or (method == "auto" and n <= ORACLE_MAX_N)
    if rho >= 1.0:
        if not dense:
            raise NumericalError(f"Hubbell series needs rho(|W|) < 1, got {rho:.6g}")
        warnings.warn(
            f"rho(|W|) = {rho:.6g} >= 1: the path-sum reading does not apply", RankingWarning, stacklevel=2
        )
    if dense:
        system = np.eye(n) - g.dense().T
        if n and np.linalg.cond(system) > 1e14:
            raise NumericalError("I - W is singular; Hubbell prestige is undefined")
        return ScoreVector(np.linalg.solve(system, x) if n else x, "none")
    scores, report = neumann_series(g, 1.0, x, True, cfg)
    if not report.converged:
        warnings.warn(f"Hubbell series truncated after {report.iterations} terms", RankingWarning, stacklevel=2)
    return scores


# -- sport ranking ----------------------------------------------------------------


@dataclass(frozen=True)
class MatchList:
    """Games as ``(team_i, team_j, outcome)``; ``outcome`` is what ``team_j`` scored
    against ``team_i``: 1 for a win, 0.5 for a tie, 0 for a loss."""

    matches: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        checked = []
        for k, m in enumerate(self.matches, start=1):
            if len(m) != 3:
                raise InputError(f"match needs (team_i, team_j, outcome), got {m!r}", k)
            ti, tj, o = m
            try:
                o = float(o)
            except (TypeError, ValueError):
                raise InputError(f"outcome {o!r} is not a number", k) from None
            if o not in OUTCOMES:
                raise InputError(f"outcome must be 0, 0.5 or 1, got {o!r}", k)
            if not ti or not tj or ti == tj:
                raise InputError(f"a match needs two distinct teams, got {ti!r} and {tj!r}", k)
            checked.append((str(ti), str(tj), o))
        object.__setattr__(self, "matches", tuple(checked))

    def __len__(self) -> int:
        return len(self.matches)

    def labels(self) -> tuple[str, ...]:
        """Teams in order of first appearance."""
        return tuple(dict.fromkeys(t for ti, tj, _ in self.matches for t in (ti, tj)))


def parse_matches(lines: Iterable[str]) -> MatchList:
    """Parse ``team_i<TAB>team_j<TAB>outcome`` lines; ``#`` starts a comment line."""
    games = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise InputError(f"expected 3 TAB-separated fields, got {len(fields)}", lineno)
        try:
            outcome = float(fields[2])
        except ValueError:
            raise InputError(f"outcome {fields[2]!r} is not a number", lineno) from None
        if outcome not in OUTCOMES:
            raise InputError(f"outcome must be 0, 0.5 or 1, got {fields[2]!r}", lineno)
        if not fields[0] or not fields[1] or fields[0] == fields[1]:
            raise InputError("a match needs two distinct teams", lineno)
        games.append((fields[0], fields[1], outcome))
    return MatchList(tuple(games))


def read_matches(path: str | os.PathLike) -> MatchList:
    with open(path, encoding="utf-8") as fh:
        return parse_matches(fh)


def match_matrix(matches: MatchList) -> SparseGraph:
    """``a_ij`` accumulates what ``j`` scored against ``i``, over all games."""
    labels = matches.labels()
    index = {t: k for k, t in enumerate(labels)}
    rows, cols, data = [], [], []
    for ti, tj, o in matches.matches:
        i, j = index[ti], index[tj]
        rows += [i, j]
        cols += [j, i]
        data += [o, 1.0 - o]
    n = len(labels)
    return SparseGraph(labels, sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr())


def sport_rank(
    matches: MatchList, cfg: SolverConfig = SolverConfig(), perturbation: float = 0.01
) -> tuple[ScoreVector, SolveReport]:
    """Team strength as the dominant left eigenvector of the outcome matrix.

    The iteration runs on ``(1 - xi) A + xi c J`` with ``c`` the mean entry
    of ``A``; ``xi = perturbation`` keeps the eigenvector unique when some
    teams never beat anyone.
    """
    if not 0.0 <= perturbation < 1.0:
        raise InputError(f"perturbation must lie in [0, 1), got {perturbation}")
    if not len(matches):
        raise NumericalError("no matches to rank")
    g = match_matrix(matches)
    n = g.n
    if not np.any(g.matrix.data):
        raise NumericalError("outcome matrix is all zeros")
    at = g.matrix.T.tocsr()
    mean_entry = g.total_weight() / n**2

    def apply(x):
        return (1.0 - perturbation) * (at @ x) + perturbation * mean_entry * x.sum()

    return power_method(apply, np.full(n, 1.0 / n), cfg, "sum-to-one", shift=1.0)
