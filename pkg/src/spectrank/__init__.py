"""Spectral ranking over sparse weighted directed graphs."""

from spectrank.errors import InputError, NumericalError, RankingError, RankingWarning
from spectrank.graph import (
    ScoreVector,
    SparseGraph,
    build_graph,
    dest_outstrength_normalize,
    out_strength,
    read_edge_list,
    row_stochastic,
    transpose,
)
from spectrank.hits import HitsResult, hits
from spectrank.influence import InfluenceResult, LeontiefResult, influence_scores, leontief_closed, leontief_open
from spectrank.pagerank import PageRankConfig, endogenous_exogenous_split, pagerank
from spectrank.sociometry import KatzConfig, MatchList, hubbell, katz, seeley, sport_rank
from spectrank.solver import SolveReport, SolverConfig, dense_fixpoint_oracle, neumann_series, power_method, spectral_radius
from spectrank.surfer import SimConfig, simulate

__version__ = "0.1.0"

__all__ = [
    "HitsResult",
    "InfluenceResult",
    "InputError",
    "KatzConfig",
    "LeontiefResult",
    "MatchList",
    "NumericalError",
    "PageRankConfig",
    "RankingError",
    "RankingWarning",
    "ScoreVector",
    "SimConfig",
    "SolveReport",
    "SolverConfig",
    "SparseGraph",
    "build_graph",
    "dense_fixpoint_oracle",
    "dest_outstrength_normalize",
    "endogenous_exogenous_split",
    "hits",
    "hubbell",
    "influence_scores",
    "katz",
    "leontief_closed",
    "leontief_open",
    "neumann_series",
    "out_strength",
    "pagerank",
    "power_method",
    "read_edge_list",
    "row_stochastic",
    "seeley",
    "simulate",
    "spectral_radius",
    "sport_rank",
    "transpose",
]
