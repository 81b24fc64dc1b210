"""Sparse weighted directed graphs and the normalizations the rankers share.

A :class:`SparseGraph` is an immutable, label-indexed CSR adjacency matrix.
Entry ``(i, j)`` holds the total weight of the edges ``i -> j``; parallel
edges are merged by summing their weights when the graph is built.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from spectrank.errors import InputError, NumericalError

Normalization = Literal["sum-to-one", "max-component", "none"]
NORMALIZATIONS = ("sum-to-one", "max-component", "none")


@dataclass(frozen=True)
class ScoreVector:
    """Per-node scores together with how they were normalized."""

    values: np.ndarray
    normalization: Normalization = "none"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise InputError(f"score vector must be one-dimensional, got shape {values.shape}")
        if self.normalization not in NORMALIZATIONS:
            raise InputError(f"unknown normalization {self.normalization!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def tolist(self) -> list[float]:
        return self.values.tolist()


def as_values(v: ScoreVector | Sequence[float] | np.ndarray, n: int, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a float array of length ``n`` or raise InputError."""
    arr = np.asarray(v.values if isinstance(v, ScoreVector) else v, dtype=float)
    if arr.shape != (n,):
        raise InputError(f"{name} has length {arr.size}, graph has {n} nodes")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


@dataclass(frozen=True, eq=False)
class SparseGraph:
    """Immutable weighted digraph in compressed sparse row form.

    ``matrix[i, j]`` is the merged weight of the edges from ``labels[i]``
    to ``labels[j]``. Rows are contiguous and column indices sorted.
    """

    labels: tuple[str, ...]
    matrix: sp.csr_matrix
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        n = len(labels)
        index = {label: i for i, label in enumerate(labels)}
        if len(index) != n:
            raise InputError("node labels must be unique")
        mat = sp.csr_matrix(self.matrix, dtype=float, shape=(n, n))
        mat.sum_duplicates()
        mat.sort_indices()
        for arr in (mat.data, mat.indices, mat.indptr):
            arr.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "_index", index)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        """Number of stored (merged) edges."""
        return int(self.matrix.nnz)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown node label {label!r}") from None

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield ``(source, dest, weight)`` in row-major order."""
        mat = self.matrix
        for i in range(self.n):
            for k in range(mat.indptr[i], mat.indptr[i + 1]):
                yield i, int(mat.indices[k]), float(mat.data[k])

    def labelled_edges(self) -> Iterator[tuple[str, str, float]]:
        for i, j, w in self.edges():
            yield self.labels[i], self.labels[j], w

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def total_weight(self) -> float:
        return float(self.matrix.data.sum())

    def with_matrix(self, matrix) -> SparseGraph:
        """Same labels, different weights."""
        return SparseGraph(self.labels, sp.csr_matrix(matrix, shape=(self.n, self.n)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseGraph):
            return NotImplemented
        if self.labels != other.labels:
            return False
        a, b = self.matrix, other.matrix
        return (
            np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices)
            and np.array_equal(a.data, b.data)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseGraph(n={self.n}, m={self.m})"


def _check_weight(w, line: int | None) -> float:
    try:
        w = float(w)
    except (TypeError, ValueError):
        raise InputError(f"weight {w!r} is not a number", line) from None
    if not math.isfinite(w):
        raise InputError(f"non-finite weight {w!r}", line)
    return w


def build_graph(edge_list: Iterable[Sequence], line_numbers: Sequence[int] | None = None) -> SparseGraph:
    """Build a graph from ``(src, dst)``, ``(src, dst, weight)`` or ``(label,)`` records.

    Nodes are indexed in order of first appearance. A one-element record
    declares a node without adding an edge. Duplicate edges are merged by
    summing weights. Negative weights are accepted.

    >>> g = build_graph([("A", "B", 2.0), ("A", "B", 3.0)])
    >>> g.n, g.m, g.matrix[0, 1]
    (2, 1, 5.0)
    """
    index: dict[str, int] = {}
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []

    def node(label, line) -> int:
        if not isinstance(label, str) or not label or "\t" in label or "\n" in label:
            raise InputError(f"invalid node label {label!r}", line)
        if label not in index:
            index[label] = len(index)
        return index[label]

    for k, record in enumerate(edge_list):
        line = line_numbers[k] if line_numbers is not None else k + 1
        record = tuple(record)
        if len(record) == 1:
            node(record[0], line)
            continue
        if len(record) not in (2, 3):
            raise InputError(f"expected 1 to 3 fields, got {len(record)}", line)
        w = _check_weight(record[2], line) if len(record) == 3 else 1.0
        i = node(record[0], line)
        j = node(record[1], line)
        rows.append(i)
        cols.append(j)
        data.append(w)

    n = len(index)
    mat = sp.coo_matrix((np.array(data, dtype=float), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))), shape=(n, n))
    return SparseGraph(tuple(index), mat.tocsr())


def parse_edge_lines(lines: Iterable[str]) -> SparseGraph:
    """Parse the TAB-separated edge-list format.

    Each line is ``src<TAB>dst[<TAB>weight]`` or a lone ``label`` declaring
    an isolated node. Blank lines and lines starting with ``#`` are skipped.
    """
    records = []
    numbers = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) > 3:
            raise InputError(f"expected at most 3 TAB-separated fields, got {len(fields)}", lineno)
        if any(f == "" for f in fields[:2]):
            raise InputError("empty node label", lineno)
        if len(fields) == 3:
            fields[2] = _check_weight(fields[2].strip(), lineno)
        records.append(fields)
        numbers.append(lineno)
    return build_graph(records, numbers)


def read_edge_list(path: str | os.PathLike) -> SparseGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_lines(fh)


def format_edge_list(g: SparseGraph) -> str:
    """Serialize ``g`` so that :func:`parse_edge_lines` rebuilds it exactly.

    Every node is declared first, which pins the node order.
    """
    out = [label for label in g.labels]
    out.extend(f"{s}\t{d}\t{w!r}" for s, d, w in g.labelled_edges())
    return "".join(line + "\n" for line in out)


def write_edge_list(g: SparseGraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))


# -- strengths and normalizations -------------------------------------------


def out_strength(g: SparseGraph) -> ScoreVector:
    """Row sums: total weight leaving each node (zero for dangling nodes)."""
    return ScoreVector(np.asarray(g.matrix.sum(axis=1)).ravel(), "none")


def in_strength(g: SparseGraph) -> ScoreVector:
    return ScoreVector(np.asarray(g.matrix.sum(axis=0)).ravel(), "none")


def dangling_mask(g: SparseGraph) -> np.ndarray:
    """True for nodes without a stored outgoing edge."""
    return np.diff(g.matrix.indptr) == 0


def _require_nonnegative(g: SparseGraph, what: str) -> None:
    if g.m and g.matrix.data.min() < 0:
        raise NumericalError(f"{what} requires nonnegative weights")


def row_stochastic(g: SparseGraph) -> SparseGraph:
    """Divide every row by its sum. All-zero rows stay zero."""
    _require_nonnegative(g, "row normalization")
    mat = g.matrix.copy()
    sums = out_strength(g).values
    # divide entries directly: 1/sum overflows for subnormal weights
    rows = np.repeat(sums, np.diff(mat.indptr))
    mat.data = np.divide(mat.data, rows, out=np.zeros_like(mat.data), where=mat.data != 0)
    return g.with_matrix(mat)


def dest_outstrength_normalize(g: SparseGraph) -> SparseGraph:
    """Divide entry ``(i, j)`` by the out-strength of the destination ``j``.

    This is the citation-per-reference normalization shared by journal
    influence and the closed input-output model.
    """
    _require_nonnegative(g, "destination normalization")
    c = out_strength(g).values
    cited = np.unique(g.matrix.indices[g.matrix.data != 0])
    bad = cited[c[cited] <= 0]
    if bad.size:
        names = ", ".join(repr(g.labels[j]) for j in bad[:5])
        raise NumericalError(f"nodes with incoming weight but zero out-strength: {names}")
    mat = g.matrix.copy()
    with np.errstate(over="ignore"):
        mat.data = np.divide(mat.data, c[mat.indices], out=np.zeros_like(mat.data), where=mat.data != 0)
    if not np.all(np.isfinite(mat.data)):
        raise NumericalError("normalized weights overflow; out-strengths span too many orders of magnitude")
    return g.with_matrix(mat)


def transpose(g: SparseGraph) -> SparseGraph:
    return g.with_matrix(g.matrix.T.tocsr())


def binarize(g: SparseGraph) -> SparseGraph:
    """0/1 adjacency: positive weights become 1, everything else is dropped."""
    mat = g.matrix.copy()
    mat.data = (mat.data > 0).astype(float)
    mat.eliminate_zeros()
    return g.with_matrix(mat)


def abs_weights(g: SparseGraph) -> SparseGraph:
    mat = g.matrix.copy()
    mat.data = np.abs(mat.data)
    return g.with_matrix(mat)


def scale(g: SparseGraph, factor: float) -> SparseGraph:
    return g.with_matrix(g.matrix * float(factor))


def permute(g: SparseGraph, order: Sequence[int]) -> SparseGraph:
    """Relabel so that new node ``k`` is old node ``order[k]``."""
    order = np.asarray(order)
    mat = g.matrix[order][:, order]
    return SparseGraph(tuple(g.labels[i] for i in order), mat)


# -- structural diagnostics ---------------------------------------------------


def _support(g: SparseGraph) -> sp.csr_matrix:
    mat = g.matrix.copy()
    mat.data = (mat.data != 0).astype(float)
    mat.eliminate_zeros()
    return mat


def is_strongly_connected(g: SparseGraph) -> bool:
    if g.n <= 1:
        return True
    ncomp, _ = connected_components(_support(g), directed=True, connection="strong")
    return ncomp == 1


def has_self_loop(g: SparseGraph) -> bool:
    return bool(np.any(_support(g).diagonal() != 0))


def is_acyclic(g: SparseGraph) -> bool:
    """True when the nonzero pattern has no directed cycle (self-loops count)."""
    mat = _support(g)
    if np.any(mat.diagonal() != 0):
        return False
    indeg = np.diff(mat.tocsc().indptr).copy()
    stack = list(np.flatnonzero(indeg == 0))
    seen = 0
    while stack:
        i = stack.pop()
        seen += 1
        for j in mat.indices[mat.indptr[i] : mat.indptr[i + 1]]:
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    return seen == g.n
