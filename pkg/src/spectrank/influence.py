"""Journal influence per reference and Leontief input-output prices.

Both methods look for the left eigenvector of the matrix whose entry
``(i, j)`` is ``w_ij / out_strength(j)``. That matrix is similar to a
row-stochastic one, so its spectral radius is 1 whenever every node has
positive out-strength.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from spectrank.errors import InputError, NumericalError, RankingWarning
from spectrank.graph import (
    ScoreVector,
    SparseGraph,
    as_values,
    dest_outstrength_normalize,
    has_self_loop,
    is_strongly_connected,
    out_strength,
)
from spectrank.solver import (
    ORACLE_MAX_N,
    SolveReport,
    SolverConfig,
    neumann_series,
    power_method,
    spectral_radius,
)


@dataclass(frozen=True)
class InfluenceResult:
    per_reference: ScoreVector
    total: ScoreVector
    report: SolveReport
    strongly_connected: bool = True
    has_self_loop: bool = False

    @property
    def unique(self) -> bool:
        return self.strongly_connected


@dataclass(frozen=True)
class LeontiefResult:
    prices: ScoreVector
    costs: np.ndarray
    revenues: np.ndarray
    report: SolveReport
    unique: bool = True
    warnings: tuple[str, ...] = field(default=())


def _left_perron(g: SparseGraph, cfg: SolverConfig, subject: str):
    """Sum-to-one left eigenvector of the destination-normalized matrix.

    Returns ``(pi, report, strongly_connected, self_loop, notes)`` and
    emits each note as a :class:`RankingWarning`.
    """
    if g.n == 0:
        raise InputError(f"empty {subject} graph")
    ht = dest_outstrength_normalize(g).matrix.T.tocsr()
    # shift by 1: I + H has the same eigenvectors but cannot oscillate
    pi, report = power_method(lambda x: ht @ x, np.full(g.n, 1.0 / g.n), cfg, "sum-to-one", shift=1.0)
    connected = is_strongly_connected(g)
    notes = []
    if not connected:
        notes.append(f"{subject} graph is not strongly connected; the solution may not be unique")
    if not report.converged:
        notes.append(f"iteration stopped after {report.iterations} steps, residual {report.residual:.3g}")
    for note in notes:
        warnings.warn(note, RankingWarning, stacklevel=3)
    return pi, report, connected, has_self_loop(g), tuple(notes)


def influence_scores(citations: SparseGraph, cfg: SolverConfig = SolverConfig()) -> InfluenceResult:
    """Influence per reference: ``pi = pi H`` with ``h_ij = c_ij / c_j``.

    ``total`` is ``pi_j * c_j``. Uniqueness holds when the citation graph
    is strongly connected; otherwise a :class:`RankingWarning` is issued
    and the vector reached from the uniform start is returned.
    """
    pi, report, connected, loop, _ = _left_perron(citations, cfg, "citation")
    total = pi.values * out_strength(citations).values
    return InfluenceResult(pi, ScoreVector(total, "none"), report, connected, loop)


def _balance(economy: SparseGraph, prices: np.ndarray, output: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    costs = economy.matrix.T @ prices
    revenues = prices * output
    return np.asarray(costs), revenues


def leontief_closed(economy: SparseGraph, cfg: SolverConfig = SolverConfig()) -> LeontiefResult:
    """Equilibrium unit prices of the closed input-output model.

    ``economy[i, j]`` is the quantity sector ``i`` delivers to sector ``j``.
    Prices are scaled to sum to one; ``costs`` and ``revenues`` are the
    per-sector totals at those prices and balance at equilibrium.
    """
    pi, report, connected, _, notes = _left_perron(economy, cfg, "economy")
    costs, revenues = _balance(economy, pi.values, out_strength(economy).values)
    return LeontiefResult(pi, costs, revenues, report, connected, notes)


def leontief_open(
    economy: SparseGraph,
    profit: ScoreVector | np.ndarray,
    cfg: SolverConfig = SolverConfig(),
    output: ScoreVector | np.ndarray | None = None,
    method: str = "auto",
) -> LeontiefResult:
    """Absolute prices of the open model ``pi = pi A + v``.

    With ``output`` (total production per sector, final demand included)
    the coefficients are ``a_ij = q_ij / output_j``. Without it the edge
    weights are taken as the coefficients ``a_ij`` themselves and costs and
    revenues are reported per unit of output.

    ``method`` is ``"dense"``, ``"series"`` or ``"auto"`` (dense up to
    2000 sectors). Both require ``rho(A) < 1``.
    """
    if method not in ("auto", "dense", "series"):
        raise InputError(f"unknown method {method!r}")
    n = economy.n
    v = as_values(profit, n, "profit vector")
    if output is None:
        coeffs = economy
        q = np.ones(n)
    else:
        q = as_values(output, n, "output vector")
        if np.any(q <= 0):
            raise InputError("sector outputs must be positive")
        if economy.m and economy.matrix.data.min() < 0:
            raise NumericalError("open model requires nonnegative quantities")
        coeffs = economy.with_matrix(economy.matrix @ sp.diags(1.0 / q))

    rho = spectral_radius(coeffs, cfg)
    if rho >= 1.0:
        raise NumericalError(f"open model has no nonnegative solution: spectral radius of A is {rho:.6g} >= 1")

    if method == "dense" or (method == "auto" and n <= ORACLE_MAX_N):
        a = coeffs.dense()
        prices = np.linalg.solve(np.eye(n) - a.T, v) if n else v.copy()
        report = SolveReport(0, float(np.abs(prices - a.T @ prices - v).sum()), rho, True)
    else:
        pv, report = neumann_series(coeffs, 1.0, v, True, cfg)
        prices = pv.values
        report = SolveReport(report.iterations, report.residual, rho, report.converged, report.history)
        if not report.converged:
            warnings.warn(f"open-model series truncated after {report.iterations} terms", RankingWarning, stacklevel=2)

    costs = np.asarray(coeffs.matrix.T @ prices) * q
    revenues = prices * q
    return LeontiefResult(ScoreVector(prices, "none"), costs, revenues, report)
