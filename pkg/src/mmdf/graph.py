"""Core graph data model: symmetric weighted adjacency, edge-list I/O,
and positive/negative decomposition for signed networks.

Graphs are dense and immutable. Weights may be any finite real number;
self-edges are not represented (the diagonal is always zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "WeightedGraph",
    "SignSplit",
    "GroundTruth",
    "EdgeListResult",
    "ParseError",
    "load_edge_list",
    "write_edge_list",
    "sign_split",
]


class ParseError(ValueError):
    """Malformed edge-list record; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _check_symmetric_zero_diag(w: np.ndarray) -> None:
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("adjacency contains non-finite entries")
    if not np.array_equal(w, w.T):
        raise ValueError("adjacency must be exactly symmetric")
    if np.any(np.diagonal(w) != 0.0):
        raise ValueError("adjacency diagonal must be zero (no self-edges)")


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted network as a dense symmetric matrix.

    Attributes:
        weights: (n, n) float array, exactly symmetric, zero diagonal,
            all entries finite. Any sign is allowed.
        node_labels: optional display names, one per node.
    """

    weights: np.ndarray
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        _check_symmetric_zero_diag(w)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.node_labels is not None:
            labels = tuple(str(s) for s in self.node_labels)
            if len(labels) != w.shape[0]:
                raise ValueError(
                    f"{len(labels)} labels for {w.shape[0]} nodes"
                )
            object.__setattr__(self, "node_labels", labels)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def edge_count(self) -> int:
        """Number of unordered node pairs with nonzero weight."""
        iu = np.triu_indices(self.n, k=1)
        return int(np.count_nonzero(self.weights[iu]))

    def isolated_nodes(self) -> list[int]:
        """Indices of nodes with no incident nonzero weight."""
        deg = np.count_nonzero(self.weights, axis=1)
        return [int(i) for i in np.flatnonzero(deg == 0)]

    def permuted(self, order: np.ndarray) -> "WeightedGraph":
        """Relabel nodes: node i of the result is node order[i] of self."""
        order = np.asarray(order)
        w = self.weights[np.ix_(order, order)]
        labels = None
        if self.node_labels is not None:
            labels = tuple(self.node_labels[i] for i in order)
        return WeightedGraph(w, labels)


@dataclass(frozen=True)
class SignSplit:
    """Decomposition of a signed adjacency into nonnegative parts.

    pos - neg reconstructs the original weights exactly, and
    pos * neg == 0 entrywise (each entry lands in exactly one part).
    """

    pos: np.ndarray
    neg: np.ndarray
    pos_degrees: np.ndarray
    neg_degrees: np.ndarray
    pos_mass: float
    neg_mass: float


def sign_split(g: WeightedGraph) -> SignSplit:
    """Split a graph into its positive and negative parts.

    Returns the two nonnegative matrices max(0, W) and max(0, -W),
    their degree vectors, and the total edge masses (half the degree
    sums, so each unordered pair counts once).
    """
    pos = np.maximum(0.0, g.weights)
    neg = np.maximum(0.0, -g.weights)
    pos.setflags(write=False)
    neg.setflags(write=False)
    d_pos = pos.sum(axis=1)
    d_neg = neg.sum(axis=1)
    return SignSplit(
        pos=pos,
        neg=neg,
        pos_degrees=d_pos,
        neg_degrees=d_neg,
        pos_mass=float(d_pos.sum() / 2.0),
        neg_mass=float(d_neg.sum() / 2.0),
    )


@dataclass(frozen=True)
class GroundTruth:
    """Known community structure for a graph, when available.

    labels: hard community index per node (0-based), or None.
    memberships: (n, K) row-stochastic soft assignment, or None.
    When both are given, labels must equal the row argmax of memberships.
    """

    labels: np.ndarray | None = None
    memberships: np.ndarray | None = None

    def __post_init__(self):
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=int)
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)
        if self.memberships is not None:
            m = np.asarray(self.memberships, dtype=float)
            m.setflags(write=False)
            object.__setattr__(self, "memberships", m)
        if self.labels is not None and self.memberships is not None:
            if not np.array_equal(self.labels, np.argmax(self.memberships, axis=1)):
                raise ValueError("labels disagree with membership row argmax")

    @property
    def k(self) -> int | None:
        if self.memberships is not None:
            return self.memberships.shape[1]
        if self.labels is not None:
            return int(self.labels.max()) + 1
        return None


@dataclass
class EdgeListResult:
    """Outcome of parsing an edge list.

    self_edges_dropped counts records with identical endpoints (their
    node identifiers are still registered). duplicate_pairs counts
    repeated (i, j) records, whose weights were summed.
    """

    graph: WeightedGraph
    self_edges_dropped: int = 0
    duplicate_pairs: int = 0
    isolated: list[int] = field(default_factory=list)


def _tokenize(line: str) -> list[str]:
    if "," in line:
        return [t.strip() for t in line.split(",") if t.strip()]
    return line.split()


def load_edge_list(
    path: str | Path,
    labels_path: str | Path | None = None,
) -> EdgeListResult:
    """Read a whitespace- or comma-separated edge list into a graph.

    Each record is ``src dst [weight]``; a missing weight defaults to 1.
    Lines starting with ``#`` are comments. A first line with three
    fields whose last is not numeric is treated as a header and skipped.
    Node identifiers may be names or integers; node order is
    first-appearance order unless labels_path supplies an explicit node
    roster (one label per line), in which case identifiers must match a
    label or be a 1-based index into the roster.

    Duplicate (i, j) records are summed. Self-edge records are dropped
    and counted. Raises ParseError with the offending line number on
    malformed input.
    """
    path = Path(path)
    roster: list[str] | None = None
    if labels_path is not None:
        roster = [
            ln.strip()
            for ln in Path(labels_path).read_text().splitlines()
            if ln.strip() and not ln.startswith("#")
        ]

    index: dict[str, int] = {}
    if roster is not None:
        for i, name in enumerate(roster):
            if name in index:
                raise ValueError(f"duplicate node label {name!r}")
            index[name] = i

    def resolve(token: str, line_no: int) -> int:
        if roster is None:
            if token not in index:
                index[token] = len(index)
            return index[token]
        if token in index:
            return index[token]
        try:
            i = int(token)
        except ValueError:
            raise ParseError(line_no, f"unknown node {token!r}") from None
        if not 1 <= i <= len(roster):
            raise ParseError(line_no, f"node index {i} outside roster")
        return i - 1

    accum: dict[tuple[int, int], float] = {}
    self_dropped = 0
    duplicates = 0
    first_data_line = True

    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = _tokenize(line)
            if first_data_line and len(tokens) >= 2:
                # header detection: last column not numeric
                try:
                    float(tokens[-1])
                except ValueError:
                    if len(tokens) >= 3:
                        first_data_line = False
                        continue
            first_data_line = False
            if len(tokens) < 2 or len(tokens) > 3:
                raise ParseError(line_no, f"expected 2 or 3 fields, got {len(tokens)}")
            if len(tokens) == 3:
                try:
                    w = float(tokens[2])
                except ValueError:
                    raise ParseError(line_no, f"bad weight {tokens[2]!r}") from None
                if not np.isfinite(w):
                    raise ParseError(line_no, f"non-finite weight {tokens[2]!r}")
            else:
                w = 1.0
            i = resolve(tokens[0], line_no)
            j = resolve(tokens[1], line_no)
            if i == j:
                self_dropped += 1
                continue
            key = (min(i, j), max(i, j))
            if key in accum:
                duplicates += 1
                accum[key] += w
            else:
                accum[key] = w

    n = len(roster) if roster is not None else len(index)
    weights = np.zeros((n, n))
    for (i, j), w in accum.items():
        weights[i, j] = w
        weights[j, i] = w
    labels = tuple(roster) if roster is not None else _names_in_order(index)
    graph = WeightedGraph(weights, labels if labels else None)
    return EdgeListResult(
        graph=graph,
        self_edges_dropped=self_dropped,
        duplicate_pairs=duplicates,
        isolated=graph.isolated_nodes(),
    )


def _names_in_order(index: dict[str, int]) -> tuple[str, ...]:
    names = [""] * len(index)
    for name, i in index.items():
        names[i] = name
    return tuple(names)


def write_edge_list(g: WeightedGraph, path: str | Path, labels_path: str | Path | None = None) -> None:
    """Write the nonzero upper triangle as ``src dst weight`` records.

    Node identifiers are the graph's labels when present, else 1-based
    indices. Weights use repr so reloading reproduces the matrix exactly.
    """
    path = Path(path)
    names = g.node_labels or tuple(str(i + 1) for i in range(g.n))
    lines = []
    iu, ju = np.triu_indices(g.n, k=1)
    for i, j in zip(iu, ju):
        w = float(g.weights[i, j])
        if w != 0.0:
            lines.append(f"{names[i]} {names[j]} {w!r}")
    path.write_text("\n".join(lines) + ("\n" if lines else ""))
    if labels_path is not None:
        Path(labels_path).write_text("\n".join(names) + "\n")
