"""HITS authority and hub scores."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from spectrank.errors import InputError, NumericalError, RankingWarning
from spectrank.graph import ScoreVector, SparseGraph, binarize
from spectrank.solver import SolveReport, SolverConfig, power_method

SUBDOMINANT_GAP = 1e-6


@dataclass(frozen=True)
class HitsResult:
    authority: ScoreVector
    hub: ScoreVector
    eigenvalue: float
    report: SolveReport
    unique: bool = True


def _authority_labels(lmat: sp.csr_matrix) -> np.ndarray:
    """Component label per node in the authority graph ``L^T L``; -1 without in-links.

    Two nodes are adjacent in that graph iff they share an in-neighbour,
    so components are read off the bipartite source/target graph without
    forming the product.
    """
    n = lmat.shape[0]
    bip = sp.bmat([[None, lmat], [lmat.T, None]], format="csr")
    _, comp = connected_components(bip, directed=False)
    labels = comp[n:].copy()
    labels[np.diff(lmat.tocsc().indptr) == 0] = -1
    return labels


def authority_components(g: SparseGraph) -> int:
    """Number of connected components of ``L^T L`` among nodes with in-links."""
    if g.n == 0:
        return 0
    labels = _authority_labels(binarize(g).matrix)
    return len(set(labels[labels >= 0].tolist()))


def isolated_in_authority_graph(g: SparseGraph) -> np.ndarray:
    """Mask of nodes with no edge to another node in ``L^T L`` (self-loops ignored).

    ``j`` is isolated when none of its in-neighbours links anywhere else.
    """
    lmat = binarize(g).matrix
    outdeg = np.diff(lmat.indptr)
    widest = np.zeros(g.n)
    coo = lmat.tocoo()
    np.maximum.at(widest, coo.col, outdeg[coo.row])
    return widest <= 1


def isolated_in_hub_graph(g: SparseGraph) -> np.ndarray:
    """Mask of nodes with no edge to another node in ``L L^T`` (self-loops ignored)."""
    lmat = binarize(g).matrix
    indeg = np.diff(lmat.tocsc().indptr)
    widest = np.zeros(g.n)
    coo = lmat.tocoo()
    np.maximum.at(widest, coo.row, indeg[coo.col])
    return widest <= 1


def _drop_subdominant(x: ScoreVector, ax: np.ndarray, eigenvalue: float, lmat) -> ScoreVector:
    """Zero the components of the authority graph whose own Perron root is
    below the dominant eigenvalue.

    Their entries decay like ``(root / eigenvalue)^k`` and vanish in the
    limit; the iteration stops while they are merely small.
    """
    values = x.values.copy()
    labels = _authority_labels(lmat)
    for c in np.unique(labels[labels >= 0]):
        idx = labels == c
        mass = values[idx] @ values[idx]
        if mass and (values[idx] @ ax[idx]) / mass < eigenvalue * (1.0 - SUBDOMINANT_GAP):
            values[idx] = 0.0
    return ScoreVector(values, x.normalization)


def hits(g: SparseGraph, cfg: SolverConfig = SolverConfig(), perturbation: float = 0.0) -> HitsResult:
    """Power iteration on ``A = L^T L`` from the all-ones vector.

    Weights are binarized. ``A`` is applied as two sparse products. The
    authority vector is scaled so its signed largest component is 1, and
    hubs are ``L @ authority`` rescaled the same way.

    With ``perturbation`` = xi > 0 the iteration runs on
    ``(1 - xi) A + xi c J`` where ``J`` is all ones and ``c`` the mean
    entry of ``A``; this makes the dominant eigenvector unique.
    """
    if not 0.0 <= perturbation < 1.0:
        raise InputError(f"perturbation must lie in [0, 1), got {perturbation}")
    lmat = binarize(g).matrix
    if lmat.nnz == 0:
        raise NumericalError("HITS needs at least one edge")
    lt = lmat.T.tocsr()
    n = g.n

    if perturbation:
        mean_entry = float((np.diff(lmat.indptr) ** 2).sum()) / n**2

        def apply(x):
            return (1.0 - perturbation) * (lt @ (lmat @ x)) + perturbation * mean_entry * x.sum()
    else:

        def apply(x):
            return lt @ (lmat @ x)

    authority, report = power_method(apply, np.ones(n), cfg, "signed-max")
    if not perturbation and report.converged:
        authority = _drop_subdominant(authority, apply(authority.values), report.eigenvalue_estimate, lmat)
    if not report.converged:
        warnings.warn(
            f"HITS did not converge in {report.iterations} iterations (residual {report.residual:.3g})",
            RankingWarning,
            stacklevel=2,
        )
    hub = lmat @ authority.values
    top = hub[np.argmax(np.abs(hub))]
    if top == 0:
        raise NumericalError("HITS hub vector vanished")
    unique = perturbation > 0 or authority_components(g) <= 1
    if not unique:
        warnings.warn(
            "authority graph is disconnected; the HITS vector from the ones start may not be unique",
            RankingWarning,
            stacklevel=2,
        )
    return HitsResult(
        authority=authority,
        hub=ScoreVector(hub / top, "max-component"),
        eigenvalue=report.eigenvalue_estimate,
        report=report,
        unique=unique,
    )
