import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CHAIN_PAGERANK
from randgraphs import google_matrix, random_digraph, with_buckets
from spectrank.errors import InputError
from spectrank.graph import ScoreVector, build_graph, permute
from spectrank.pagerank import PageRankConfig, endogenous_exogenous_split, pagerank
from spectrank.solver import SolverConfig, dense_fixpoint_oracle


def test_single_dangling_node():
    pi, report = pagerank(build_graph([("A",)]))
    assert pi.tolist() == [1.0]
    assert report.converged


def test_two_cycle(two_cycle):
    pi, _ = pagerank(two_cycle)
    assert pi.tolist() == [0.5, 0.5]


def test_chain_with_dangling_end(chain):
    pi, report = pagerank(chain)
    assert report.converged
    np.testing.assert_allclose(pi.values, [0.1844, 0.3412, 0.4744], atol=1e-4)
    np.testing.assert_allclose(pi.values, CHAIN_PAGERANK, atol=1e-8)


def test_alpha_zero_returns_personalization(chain):
    v = ScoreVector([0.5, 0.3, 0.2], "sum-to-one")
    pi, _ = pagerank(chain, PageRankConfig(alpha=0.0, personalization=v))
    np.testing.assert_allclose(pi.values, v.values, atol=1e-15)


def test_config_rejections(chain):
    with pytest.raises(InputError):
        PageRankConfig(alpha=1.0)
    with pytest.raises(InputError):
        pagerank(chain, PageRankConfig(personalization=ScoreVector([0.5, 0.5, 0.5])))
    with pytest.raises(InputError):
        pagerank(chain, PageRankConfig(personalization=ScoreVector([1.2, -0.2, 0.0])))


def test_split_alpha_zero(chain):
    cfg = PageRankConfig(alpha=0.0)
    pi, _ = pagerank(chain, cfg)
    endo, exo = endogenous_exogenous_split(chain, cfg, pi)
    assert np.all(endo.values == 0.0)
    np.testing.assert_allclose(exo.values, 1 / 3)


def test_split_two_cycle(two_cycle):
    cfg = PageRankConfig()
    pi, _ = pagerank(two_cycle, cfg)
    endo, exo = endogenous_exogenous_split(two_cycle, cfg, pi)
    np.testing.assert_allclose(endo.values, [0.425, 0.425], atol=1e-15)
    np.testing.assert_allclose(exo.values, [0.075, 0.075], atol=1e-15)


def test_split_recombines(chain):
    cfg = PageRankConfig()
    pi, _ = pagerank(chain, cfg)
    endo, exo = endogenous_exogenous_split(chain, cfg, pi)
    np.testing.assert_allclose(endo.values + exo.values, pi.values, atol=1e-9)


def test_dangling_vector_differs_from_personalization(rng):
    g = random_digraph(rng, 7, p=0.25)
    v = rng.random(7)
    v /= v.sum()
    w = np.zeros(7)
    w[0] = 1.0
    cfg = PageRankConfig(personalization=ScoreVector(v), dangling_vector=ScoreVector(w), solver=SolverConfig(1e-13))
    pi, _ = pagerank(g, cfg)
    expected = dense_fixpoint_oracle(google_matrix(g, 0.85, v, w)).values
    np.testing.assert_allclose(pi.values, expected, atol=1e-10)


def test_unendorsed_nodes_share_minimum():
    # five nodes point at a hub and receive nothing
    edges = [(s, "hub") for s in "GHILM"] + [("hub", "C"), ("C", "hub")]
    g = build_graph(edges)
    pi, _ = pagerank(g)
    leaves = [pi[g.index(s)] for s in "GHILM"]
    assert max(leaves) - min(leaves) <= 1e-15
    assert leaves[0] == pytest.approx(0.15 / g.n, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.floats(0.0, 0.95))
def test_fixed_point_and_positivity(n, seed, alpha):
    rng = np.random.default_rng(seed)
    g = random_digraph(rng, n, p=0.3)
    cfg = PageRankConfig(alpha=alpha)
    pi, report = pagerank(g, cfg)
    assert report.converged
    assert abs(pi.values.sum() - 1) <= 1e-12
    assert np.all(pi.values >= (1 - alpha) / n * (1 - 1e-9))
    gm = google_matrix(g, alpha)
    assert np.abs(pi.values - pi.values @ gm).sum() <= 10 * cfg.solver.tolerance


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_permutation_equivariance(n, seed):
    rng = np.random.default_rng(seed)
    g = with_buckets(rng, n)
    order = rng.permutation(n)
    pi, _ = pagerank(g)
    pj, _ = pagerank(permute(g, order))
    np.testing.assert_allclose(pj.values, pi.values[order], atol=1e-9)


def test_uniqueness_from_different_starts(rng):
    cfg = PageRankConfig()
    for _ in range(10):
        g = with_buckets(rng, 9)
        a, b = rng.random(9), rng.random(9)
        pa, _ = pagerank(g, cfg, start=a / a.sum())
        pb, _ = pagerank(g, cfg, start=b / b.sum())
        assert np.abs(pa.values - pb.values).max() <= 10 * cfg.solver.tolerance
