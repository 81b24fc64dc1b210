import io
import json

import numpy as np
import pytest

from conftest import ECONOMY, write_tsv
from spectrank.cli import params_to_argv, run
from spectrank.graph import read_edge_list
from spectrank.pagerank import pagerank


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def table_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    header = lines[0].split("\t")
    return header, [dict(zip(header, l.split("\t"))) for l in lines[1:]]


@pytest.fixture
def two_cycle_file(tmp_path):
    return str(write_tsv(tmp_path / "two_cycle.tsv", [("A", "B"), ("B", "A")]))


@pytest.fixture
def economy_file(tmp_path):
    return str(write_tsv(tmp_path / "economy.tsv", ECONOMY))


@pytest.fixture
def web_file(tmp_path):
    rows = [("A", "B"), ("A", "C", 2.0), ("B", "C"), ("C", "A"), ("D", "C"), ("E",)]
    return str(write_tsv(tmp_path / "web.tsv", rows))


def test_pagerank_two_cycle(two_cycle_file):
    code, out, _ = invoke("pagerank", "--input", two_cycle_file, "--alpha", "0.85")
    assert code == 0
    header, rows = table_rows(out)
    assert header == ["rank", "label", "score"]
    assert [(r["rank"], r["label"], float(r["score"])) for r in rows] == [("1", "A", 0.5), ("2", "B", 0.5)]


def test_tsv_reparses_to_twelve_digits(web_file):
    code, out, _ = invoke("pagerank", "--input", web_file)
    assert code == 0
    g = read_edge_list(web_file)
    pi, _ = pagerank(g)
    _, rows = table_rows(out)
    for r in rows:
        exact = pi[g.index(r["label"])]
        assert float(r["score"]) == pytest.approx(exact, rel=1e-11)
    scores = [float(r["score"]) for r in rows]
    assert scores == sorted(scores, reverse=True)


def test_json_fields(web_file):
    code, out, _ = invoke("pagerank", "--input", web_file, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {
        "method", "params", "n", "m", "iterations", "residual", "eigenvalue", "converged", "warnings", "rows",
    }
    assert doc["method"] == "pagerank" and doc["n"] == 5 and doc["m"] == 5
    assert doc["converged"] is True
    assert sum(r["score"] for r in doc["rows"]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["pagerank", "--alpha", "0.7"],
        ["hits"],
        ["katz", "--attenuation", "0.2", "--normalize", "sum"],
        ["simulate", "--steps", "20000", "--seed", "9"],
    ],
)
def test_json_params_round_trip(web_file, argv):
    first = [argv[0], "--input", web_file, "--format", "json", *argv[1:]]
    code, out, _ = invoke(*first)
    assert code == 0
    doc = json.loads(out)
    code2, out2, _ = invoke(*params_to_argv(doc["method"], doc["params"]))
    assert code2 == 0
    assert out2 == out


def test_leontief_economy(economy_file):
    code, out, _ = invoke("leontief", "--input", economy_file)
    assert code == 0
    header, rows = table_rows(out)
    assert header == ["rank", "label", "price", "cost", "revenue"]
    prices = {r["label"]: float(r["price"]) for r in rows}
    assert [prices[k] for k in ("agriculture", "industry", "family")] == pytest.approx(
        [0.5263, 0.3947, 0.0789], abs=5e-5
    )
    for r in rows:
        assert float(r["cost"]) == pytest.approx(float(r["revenue"]), rel=1e-8)
    assert "# warning: prices are scaled" in out


def test_leontief_open(tmp_path):
    g = write_tsv(tmp_path / "a.tsv", [("A", "B", 0.5), ("B", "A", 0.5)])
    profit = write_tsv(tmp_path / "v.tsv", [("A", 1.0), ("B", 2.0)])
    code, out, _ = invoke("leontief", "--input", str(g), "--open", "--exogenous", str(profit))
    assert code == 0
    _, rows = table_rows(out)
    prices = {r["label"]: float(r["price"]) for r in rows}
    expected = np.linalg.solve(np.array([[1, -0.5], [-0.5, 1]]).T, [1.0, 2.0])
    assert [prices["A"], prices["B"]] == pytest.approx(expected, rel=1e-10)
    code, _, err = invoke("leontief", "--input", str(g), "--open")
    assert code == 1 and "--exogenous" in err


def test_hits_two_columns(web_file):
    code, out, _ = invoke("hits", "--input", web_file)
    assert code == 0
    header, rows = table_rows(out)
    assert header == ["rank", "label", "authority", "hub"]
    assert max(float(r["authority"]) for r in rows) == 1.0


def test_scale_100(web_file):
    _, plain, _ = invoke("pagerank", "--input", web_file, "--format", "json")
    _, scaled, _ = invoke("pagerank", "--input", web_file, "--format", "json", "--scale-100")
    a = [r["score"] for r in json.loads(plain)["rows"]]
    b = [r["score"] for r in json.loads(scaled)["rows"]]
    assert sum(b) == pytest.approx(100.0, rel=1e-12)
    np.testing.assert_allclose(np.array(b), 100 * np.array(a), rtol=1e-15)


def test_katz_rejection_exit_code(two_cycle_file):
    code, out, err = invoke("katz", "--input", two_cycle_file, "--attenuation", "2.0")
    assert code == 2
    assert out == ""
    assert "a = 2" in err and "1/rho(L) = 1" in err


def test_malformed_line_reported(tmp_path):
    bad = write_tsv(tmp_path / "bad.tsv", [("A", "B"), ("B", "A", "heavy")])
    code, _, err = invoke("pagerank", "--input", str(bad))
    assert code == 1
    assert "line 2" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["pagerank"],
        ["pagerank", "--input", "x", "--bogus"],
        ["nosuch", "--input", "x"],
        ["katz", "--input", "x"],
        ["pagerank", "--input", "/nonexistent/file.tsv"],
        ["simulate", "--input", "x", "--steps", "0"],
    ],
)
def test_input_errors_exit_one(argv):
    code, _, err = invoke(*argv)
    assert code == 1
    assert err.startswith("spectrank: input error")


def test_hubbell_exogenous_default_zero(tmp_path):
    g = write_tsv(tmp_path / "w.tsv", [("A", "B", 0.5), ("C",)])
    v = write_tsv(tmp_path / "v.tsv", [("A", 0.2)])
    code, out, _ = invoke("hubbell", "--input", str(g), "--exogenous", str(v), "--format", "json")
    assert code == 0
    scores = {r["label"]: r["score"] for r in json.loads(out)["rows"]}
    assert scores == pytest.approx({"A": 0.2, "B": 0.1, "C": 0.0})


def test_personalization_must_cover_nodes(tmp_path, two_cycle_file):
    v = write_tsv(tmp_path / "p.tsv", [("A", 1.0)])
    code, _, err = invoke("pagerank", "--input", two_cycle_file, "--personalization", str(v))
    assert code == 1 and "'B'" in err


def test_sport_and_seeley(tmp_path):
    m = write_tsv(tmp_path / "m.tsv", [("A", "B", 0), ("B", "C", 0), ("C", "A", 0)])
    code, out, _ = invoke("sport", "--input", str(m))
    assert code == 0
    _, rows = table_rows(out)
    assert [r["label"] for r in rows] == ["A", "B", "C"]
    assert all(float(r["score"]) == pytest.approx(1 / 3, abs=1e-10) for r in rows)
    c = write_tsv(tmp_path / "c.tsv", [("A", "B"), ("B", "C"), ("C", "A")])
    code, out, _ = invoke("seeley", "--input", str(c), "--format", "json")
    assert code == 0 and json.loads(out)["residual"] <= 1e-12


def test_influence_and_simulate(two_cycle_file):
    code, out, _ = invoke("influence", "--input", two_cycle_file)
    assert code == 0 and table_rows(out)[0] == ["rank", "label", "score", "total"]
    code, out, _ = invoke("simulate", "--input", two_cycle_file, "--steps", "100000", "--seed", "1")
    assert code == 0
    _, rows = table_rows(out)
    assert all(abs(float(r["score"]) - 0.5) < 0.01 for r in rows)


def test_warnings_reach_output(tmp_path):
    g = write_tsv(tmp_path / "g.tsv", [("A", "B"), ("C", "D")])
    code, out, _ = invoke("hits", "--input", str(g), "--format", "json")
    assert code == 0
    assert any("disconnected" in w for w in json.loads(out)["warnings"])
