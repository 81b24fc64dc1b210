"""Numerical engines shared by the ranking methods.

* :func:`power_method` -- normalized power iteration on an implicit operator
* :func:`neumann_series` -- truncated ``v (s L)^k`` path sums
* :func:`dense_fixpoint_oracle` -- direct dense solve, used to check the above
* :func:`spectral_radius` -- Perron root estimate for a nonnegative matrix
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from spectrank.errors import InputError, NumericalError
from spectrank.graph import ScoreVector, SparseGraph, abs_weights, is_acyclic

ORACLE_MAX_N = 2000
DIVERGENCE_RUN = 50


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-9
    max_iterations: int = 100_000
    norm: Literal["L1", "Linf"] = "L1"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InputError(f"tolerance must be positive, got {self.tolerance}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise InputError(f"max_iterations must be a positive integer, got {self.max_iterations}")
        if self.norm not in ("L1", "Linf"):
            raise InputError(f"norm must be 'L1' or 'Linf', got {self.norm!r}")

    def distance(self, x: np.ndarray) -> float:
        if self.norm == "L1":
            return float(np.abs(x).sum())
        return float(np.abs(x).max(initial=0.0))


@dataclass(frozen=True)
class SolveReport:
    """Outcome of an iterative solve.

    ``residual`` is the distance between the last two iterates (or the norm
    of the last series term); ``history`` holds it for every iteration.
    """

    iterations: int
    residual: float
    eigenvalue_estimate: float
    converged: bool
    history: tuple[float, ...] = field(default=(), repr=False)


def _signed_max(x: np.ndarray) -> float:
    return float(x[np.argmax(np.abs(x))]) if x.size else 0.0


def power_method(
    apply: Callable[[np.ndarray], np.ndarray],
    start: ScoreVector | np.ndarray,
    cfg: SolverConfig = SolverConfig(),
    normalization: Literal["sum-to-one", "signed-max"] = "sum-to-one",
    shift: float = 0.0,
) -> tuple[ScoreVector, SolveReport]:
    """Iterate ``x <- apply(x) + shift * x`` with renormalization each step.

    Under ``"sum-to-one"`` the eigenvalue estimate is the pre-normalization
    sum; under ``"signed-max"`` it is the signed component of largest
    magnitude. ``shift`` is subtracted from the estimate, so a positive
    shift only damps periodic oscillation without changing the answer.
    Iteration stops when successive iterates are within ``cfg.tolerance``.
    An iterate collapsing to zero ends the run unconverged.
    """
    x = np.array(start.values if isinstance(start, ScoreVector) else start, dtype=float)
    if x.ndim != 1 or not np.any(x):
        raise NumericalError("power method needs a nonzero start vector")
    by_sum = normalization == "sum-to-one"
    if normalization not in ("sum-to-one", "signed-max"):
        raise InputError(f"unknown normalization {normalization!r}")
    scale = x.sum() if by_sum else _signed_max(x)
    if scale == 0:
        raise NumericalError("start vector cannot be normalized (zero sum)")
    x /= scale
    label = "sum-to-one" if by_sum else "max-component"

    history: list[float] = []
    estimate = 0.0
    residual = float("inf")
    for k in range(1, cfg.max_iterations + 1):
        y = np.asarray(apply(x), dtype=float)
        if shift:
            y = y + shift * x
        scale = y.sum() if by_sum else _signed_max(y)
        if scale == 0 or not np.isfinite(scale):
            history.append(residual)
            return ScoreVector(x, label), SolveReport(k, residual, 0.0, False, tuple(history))
        y /= scale
        estimate = float(scale) - shift
        residual = cfg.distance(y - x)
        history.append(residual)
        x = y
        if residual <= cfg.tolerance:
            return ScoreVector(x, label), SolveReport(k, residual, estimate, True, tuple(history))
    return ScoreVector(x, label), SolveReport(cfg.max_iterations, residual, estimate, False, tuple(history))


def neumann_series(
    g: SparseGraph,
    scale: float,
    v: ScoreVector | np.ndarray,
    include_identity_term: bool = True,
    cfg: SolverConfig = SolverConfig(),
) -> tuple[ScoreVector, SolveReport]:
    """Row-vector path sum ``v * sum_{k >= k0} (scale * L)^k``, ``k0`` = 0 or 1.

    Truncates once a term's norm drops to ``cfg.tolerance``. Fifty
    consecutive growing terms raise :class:`NumericalError`, which in
    practice means ``scale * rho(L) >= 1``.
    """
    term = np.array(v.values if isinstance(v, ScoreVector) else v, dtype=float)
    if term.shape != (g.n,):
        raise InputError(f"vector has length {term.size}, graph has {g.n} nodes")
    lt = (g.matrix.T * float(scale)).tocsr()
    total = term.copy() if include_identity_term else np.zeros_like(term)
    prev = cfg.distance(term)
    growing = 0
    history: list[float] = []
    for k in range(1, cfg.max_iterations + 1):
        term = lt @ term
        size = cfg.distance(term)
        history.append(size)
        total += term
        if size <= cfg.tolerance:
            return ScoreVector(total, "none"), SolveReport(k, size, 0.0, True, tuple(history))
        growing = growing + 1 if size > prev else 0
        if growing >= DIVERGENCE_RUN or not np.isfinite(size):
            raise NumericalError(
                f"Neumann series diverges: term norm grew for {growing} consecutive terms "
                f"(scale {scale} is not below 1/spectral radius)"
            )
        prev = size
    return ScoreVector(total, "none"), SolveReport(cfg.max_iterations, prev, 0.0, False, tuple(history))


def dense_fixpoint_oracle(matrix, exogenous: ScoreVector | np.ndarray | None = None) -> ScoreVector:
    """Solve ``pi = pi M`` (sum-to-one) or ``pi = pi M + v`` by dense linear algebra.

    Reference implementation for checking the iterative solvers; limited
    to ``n <= 2000``.
    """
    m = np.asarray(matrix.toarray() if hasattr(matrix, "toarray") else matrix, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n):
        raise InputError(f"oracle needs a square matrix, got shape {m.shape}")
    if n > ORACLE_MAX_N:
        raise InputError(f"dense oracle is limited to n <= {ORACLE_MAX_N}, got {n}")
    system = np.eye(n) - m.T
    if exogenous is not None:
        v = np.asarray(exogenous.values if isinstance(exogenous, ScoreVector) else exogenous, dtype=float)
        if np.linalg.cond(system) > 1e14:
            raise NumericalError("exogenous system I - M is singular")
        return ScoreVector(np.linalg.solve(system, v), "none")
    stacked = np.vstack([system, np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)
    return ScoreVector(pi / pi.sum(), "sum-to-one")


def spectral_radius(g: SparseGraph, cfg: SolverConfig = SolverConfig()) -> float:
    """Perron root of ``|W|`` by shifted power iteration from the ones vector.

    Acyclic weight patterns are nilpotent and return exactly 0. The
    iteration runs on ``I + |W|``, which has the same Perron vector but no
    periodic oscillation. When several components share the largest root
    convergence is only algebraic; the returned value is then the last
    iterate's estimate and may undershoot.
    """
    if g.n == 0 or is_acyclic(g):
        return 0.0
    mat = abs_weights(g).matrix
    _, report = power_method(lambda x: mat @ x, np.ones(g.n), cfg, "signed-max", shift=1.0)
    return max(report.eigenvalue_estimate, 0.0)
