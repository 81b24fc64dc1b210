"""Command-line front end.

    spectrank pagerank --input graph.tsv --alpha 0.85
    spectrank leontief --input economy.tsv --format json

Exit status: 0 on success, 1 for input errors (bad flags, unreadable or
malformed files), 2 when a method rejects the input numerically.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, TextIO

import numpy as np

from spectrank.errors import InputError, NumericalError, RankingWarning
from spectrank.graph import ScoreVector, SparseGraph, binarize, read_edge_list, row_stochastic
from spectrank.hits import hits
from spectrank.influence import influence_scores, leontief_closed, leontief_open
from spectrank.pagerank import PageRankConfig, pagerank
from spectrank.sociometry import KatzConfig, hubbell, katz, match_matrix, read_matches, seeley, sport_rank
from spectrank.solver import SolverConfig
from spectrank.surfer import SimConfig, simulate

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
JSON_FIELDS = ("method", "params", "n", "m", "iterations", "residual", "eigenvalue", "converged", "warnings", "rows")


@dataclass
class RankedOutput:
    method: str
    params: dict[str, Any]
    labels: tuple[str, ...]
    columns: dict[str, np.ndarray]
    n: int = 0
    m: int = 0
    iterations: int | None = None
    residual: float | None = None
    eigenvalue: float | None = None
    converged: bool = True
    warnings: list[str] = field(default_factory=list)

    def ordered_rows(self, scale: float = 1.0) -> list[dict[str, Any]]:
        """Rows by first column descending, ties by label in byte order."""
        names = list(self.columns)
        key = self.columns[names[0]]
        order = sorted(range(len(self.labels)), key=lambda i: (-key[i], self.labels[i].encode("utf-8")))
        rows = []
        for rank, i in enumerate(order, start=1):
            row = {"rank": rank, "label": self.labels[i]}
            row.update({name: float(col[i]) * scale for name, col in self.columns.items()})
            rows.append(row)
        return rows

    def to_json(self, scale: float = 1.0) -> str:
        doc = {
            "method": self.method,
            "params": self.params,
            "n": self.n,
            "m": self.m,
            "iterations": self.iterations,
            "residual": self.residual,
            "eigenvalue": self.eigenvalue,
            "converged": self.converged,
            "warnings": self.warnings,
            "rows": self.ordered_rows(scale),
        }
        return json.dumps(doc, indent=2)

    def to_tsv(self, scale: float = 1.0) -> str:
        meta = [
            f"# method: {self.method}",
            f"# params: {json.dumps(self.params, sort_keys=True)}",
            f"# n: {self.n}",
            f"# m: {self.m}",
            f"# iterations: {self.iterations}",
            f"# residual: {self.residual}",
            f"# eigenvalue: {self.eigenvalue}",
            f"# converged: {self.converged}",
        ]
        meta += [f"# warning: {w}" for w in self.warnings]
        lines = meta + ["\t".join(["rank", "label", *self.columns])]
        for row in self.ordered_rows(scale):
            values = [f"{row[c]:.12g}" for c in self.columns]
            lines.append("\t".join([str(row["rank"]), row["label"], *values]))
        return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _solver(args) -> SolverConfig:
    return SolverConfig(tolerance=args.tol, max_iterations=args.max_iter)


def _read_vector(path: str, labels: tuple[str, ...], *, fill: float | None) -> np.ndarray:
    """Read ``label<TAB>value`` lines. Missing labels get ``fill``, or are an error when it is None."""
    index = {label: i for i, label in enumerate(labels)}
    values = np.full(len(labels), np.nan)
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise InputError(f"{path}: expected 'label<TAB>value'", lineno)
            if fields[0] not in index:
                raise InputError(f"{path}: unknown label {fields[0]!r}", lineno)
            try:
                x = float(fields[1])
            except ValueError:
                raise InputError(f"{path}: value {fields[1]!r} is not a number", lineno) from None
            if not np.isfinite(x):
                raise InputError(f"{path}: non-finite value", lineno)
            values[index[fields[0]]] = x
    missing = np.isnan(values)
    if missing.any():
        if fill is None:
            names = ", ".join(repr(labels[i]) for i in np.flatnonzero(missing)[:5])
            raise InputError(f"{path}: no value for {names}")
        values[missing] = fill
    return values


def _personalization(args, g: SparseGraph) -> ScoreVector | None:
    if not args.personalization:
        return None
    v = _read_vector(args.personalization, g.labels, fill=None)
    if np.any(v < 0) or v.sum() <= 0:
        raise InputError(f"{args.personalization}: personalization must be nonnegative with positive sum")
    return ScoreVector(v / v.sum(), "sum-to-one")


def _display_factor(args, values: np.ndarray) -> float:
    """1, or the factor that makes ``values`` sum to one under ``--normalize sum``."""
    if getattr(args, "normalize", "none") != "sum":
        return 1.0
    total = values.sum()
    if total == 0:
        raise NumericalError("scores sum to zero and cannot be normalized")
    return 1.0 / total


def _graph_output(method: str, g: SparseGraph, params: dict, columns: dict, report=None, **extra) -> RankedOutput:
    out = RankedOutput(method, params, g.labels, columns, n=g.n, m=g.m)
    if report is not None:
        out.iterations = report.iterations
        out.residual = report.residual
        out.eigenvalue = report.eigenvalue_estimate
        out.converged = report.converged
    for k, v in extra.items():
        setattr(out, k, v)
    return out


# -- subcommands ----------------------------------------------------------------


def _cmd_pagerank(args, params):
    g = read_edge_list(args.input)
    cfg = PageRankConfig(alpha=args.alpha, personalization=_personalization(args, g), solver=_solver(args))
    pi, report = pagerank(g, cfg)
    return _graph_output("pagerank", g, params, {"score": pi.values}, report)


def _cmd_hits(args, params):
    g = read_edge_list(args.input)
    res = hits(g, _solver(args), perturbation=args.perturbation)
    return _graph_output("hits", g, params, {"authority": res.authority.values, "hub": res.hub.values}, res.report)


def _cmd_influence(args, params):
    g = read_edge_list(args.input)
    res = influence_scores(g, _solver(args))
    return _graph_output(
        "influence", g, params, {"score": res.per_reference.values, "total": res.total.values}, res.report
    )


def _cmd_leontief(args, params):
    g = read_edge_list(args.input)
    if args.open:
        if not args.exogenous:
            raise InputError("--open needs --exogenous PATH (profit vector)")
        profit = _read_vector(args.exogenous, g.labels, fill=0.0)
        output = _read_vector(args.output, g.labels, fill=None) if args.output else None
        res = leontief_open(g, profit, _solver(args), output=output)
        f = _display_factor(args, res.prices.values)
        columns = {"price": res.prices.values * f, "cost": res.costs * f, "revenue": res.revenues * f}
        out = _graph_output("leontief", g, params, columns)
        out.residual = res.report.residual
        return out
    res = leontief_closed(g, _solver(args))
    out = _graph_output(
        "leontief", g, params, {"price": res.prices.values, "cost": res.costs, "revenue": res.revenues}, res.report
    )
    out.warnings.append("prices are scaled to sum to one; every positive multiple is also an equilibrium")
    return out


def _cmd_seeley(args, params):
    g = read_edge_list(args.input)
    pi = seeley(g, _solver(args))
    p = row_stochastic(g).matrix
    residual = float(np.abs(p.T @ pi.values - pi.values).sum())
    return _graph_output("seeley", g, params, {"score": pi.values}, residual=residual, eigenvalue=1.0)


def _cmd_katz(args, params):
    g = read_edge_list(args.input)
    pi = katz(g, KatzConfig(attenuation=args.attenuation, solver=_solver(args)))
    lt = binarize(g).matrix.T
    raw = pi.values
    residual = float(np.abs(raw - args.attenuation * (lt @ (raw + 1.0))).sum())
    return _graph_output("katz", g, params, {"score": raw * _display_factor(args, raw)}, residual=residual)


def _cmd_hubbell(args, params):
    g = read_edge_list(args.input)
    v = _read_vector(args.exogenous, g.labels, fill=0.0) if args.exogenous else np.ones(g.n)
    pi = hubbell(g, v, _solver(args)).values
    residual = float(np.abs(pi - g.matrix.T @ pi - v).sum())
    return _graph_output("hubbell", g, params, {"score": pi * _display_factor(args, pi)}, residual=residual)


def _cmd_sport(args, params):
    matches = read_matches(args.input)
    scores, report = sport_rank(matches, _solver(args), perturbation=args.perturbation)
    g = match_matrix(matches)
    out = _graph_output("sport", g, params, {"score": scores.values}, report)
    out.m = len(matches)
    return out


def _cmd_simulate(args, params):
    g = read_edge_list(args.input)
    cfg = SimConfig(steps=args.steps, alpha=args.alpha, seed=args.seed, personalization=_personalization(args, g))
    freq = simulate(g, cfg)
    return _graph_output("simulate", g, params, {"score": freq.values}, iterations=args.steps)


# -- parser -------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


COMMANDS: dict[str, tuple[Callable, tuple[str, ...], str]] = {
    "pagerank": (_cmd_pagerank, ("alpha", "personalization"), "PageRank by power iteration"),
    "hits": (_cmd_hits, ("perturbation",), "HITS authority and hub scores"),
    "influence": (_cmd_influence, (), "journal influence per reference"),
    "leontief": (_cmd_leontief, ("open", "exogenous", "output", "normalize"), "Leontief input-output prices"),
    "seeley": (_cmd_seeley, (), "Seeley popularity"),
    "katz": (_cmd_katz, ("attenuation", "normalize"), "Katz attenuated path status"),
    "hubbell": (_cmd_hubbell, ("exogenous", "normalize"), "Hubbell prestige with exogenous input"),
    "sport": (_cmd_sport, ("perturbation",), "team ranking from pairwise matches"),
    "simulate": (_cmd_simulate, ("alpha", "personalization", "steps", "seed"), "Monte-Carlo random surfer"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spectrank", description="Spectral ranking of weighted directed graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, flags, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--input", required=True, metavar="PATH")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--max-iter", type=_positive_int, default=100_000)
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")
        p.add_argument("--scale-100", action="store_true", help="multiply displayed scores by 100")
        if "alpha" in flags:
            p.add_argument("--alpha", type=float, default=0.85)
        if "personalization" in flags:
            p.add_argument("--personalization", metavar="PATH")
        if "perturbation" in flags:
            p.add_argument("--perturbation", type=float, default=0.01 if name == "sport" else 0.0)
        if "open" in flags:
            p.add_argument("--open", action="store_true", help="open model with a profit vector")
            p.add_argument("--output", metavar="PATH", help="total output per sector (open model)")
        if "exogenous" in flags:
            p.add_argument("--exogenous", metavar="PATH")
        if "normalize" in flags:
            p.add_argument("--normalize", choices=("sum", "none"), default="none")
        if "attenuation" in flags:
            p.add_argument("--attenuation", type=float, required=True)
        if "steps" in flags:
            p.add_argument("--steps", type=_positive_int, default=1_000_000)
            p.add_argument("--seed", type=_seed, default=0)
    return parser


def params_to_argv(method: str, params: dict[str, Any]) -> list[str]:
    """Rebuild a command line from the ``params`` echo of a previous run."""
    argv = [method]
    for key, value in params.items():
        flag = "--" + key.replace("_", "-")
        if value is None or value is False:
            continue
        if value is True:
            argv.append(flag)
        else:
            argv += [flag, repr(value) if isinstance(value, float) else str(value)]
    return argv


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        params = {k: v for k, v in vars(args).items() if k != "command"}
        handler = COMMANDS[args.command][0]
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", RankingWarning)
            out = handler(args, params)
        out.warnings = [str(w.message) for w in caught if issubclass(w.category, RankingWarning)] + out.warnings
        scale = 100.0 if args.scale_100 else 1.0
        stdout.write(out.to_json(scale) + "\n" if args.format == "json" else out.to_tsv(scale))
        return EXIT_OK
    except NumericalError as exc:
        print(f"spectrank: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    except (InputError, OSError) as exc:
        print(f"spectrank: input error: {exc}", file=stderr)
        return EXIT_INPUT


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
