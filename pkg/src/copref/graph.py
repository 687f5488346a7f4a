"""Weighted undirected graphs, partitions and modularity.

Graphs are stored as a node tuple plus three aligned edge arrays
(``rows < cols``, ``weights``), each undirected edge recorded once.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Raised for malformed graphs or partitions."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable weighted undirected graph without self-loops.

    Use :meth:`from_edges` rather than the raw constructor unless the edge
    arrays are already canonical (``rows < cols``, positive weights,
    no duplicates).
    """

    nodes: tuple[str, ...]
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    names: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(self.cols, dtype=np.int64).reshape(-1)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if not (len(rows) == len(cols) == len(weights)):
            raise GraphError("edge arrays must have equal length")
        n = len(self.nodes)
        if len(set(self.nodes)) != n:
            raise GraphError("duplicate node identifiers")
        if len(rows):
            if rows.min() < 0 or cols.max() >= n:
                raise GraphError("edge endpoint out of range")
            if np.any(rows >= cols):
                raise GraphError("edges must satisfy row < col (no self-loops)")
            if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
                raise GraphError("edge weights must be finite and > 0")
            keys = rows * n + cols
            if len(np.unique(keys)) != len(keys):
                raise GraphError("duplicate edges")
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "rows", _frozen(rows))
        object.__setattr__(self, "cols", _frozen(cols))
        object.__setattr__(self, "weights", _frozen(weights))
        object.__setattr__(self, "names", dict(self.names))

    @classmethod
    def from_edges(
        cls,
        nodes: Iterable[str],
        edges: Mapping[tuple[str, str], float] | Iterable[tuple[str, str, float]],
        names: Mapping[str, str] | None = None,
    ) -> WeightedGraph:
        """Build a graph from ``{(u, v): w}`` or ``(u, v, w)`` triples.

        Zero-weight edges are dropped; self-loops, negative weights and
        conflicting duplicate edges raise :class:`GraphError`.
        """
        nodes = tuple(nodes)
        index = {v: i for i, v in enumerate(nodes)}
        items = edges.items() if isinstance(edges, Mapping) else (((u, v), w) for u, v, w in edges)
        acc: dict[tuple[int, int], float] = {}
        for (u, v), w in items:
            if u not in index or v not in index:
                raise GraphError(f"node not found: {u if u not in index else v!r}")
            i, j = index[u], index[v]
            if i == j:
                raise GraphError(f"self-loop on {u!r}")
            w = float(w)
            if w < 0:
                raise GraphError("negative edge weight")
            key = (i, j) if i < j else (j, i)
            if key in acc and acc[key] != w:
                raise GraphError(f"conflicting weights for edge {u!r}-{v!r}")
            if w > 0:
                acc[key] = w
        keys = sorted(acc)
        rows = np.array([k[0] for k in keys], dtype=np.int64)
        cols = np.array([k[1] for k in keys], dtype=np.int64)
        weights = np.array([acc[k] for k in keys], dtype=np.float64)
        return cls(nodes, rows, cols, weights, names or {})

    @classmethod
    def from_adjacency(cls, adjacency, nodes: Iterable[str] | None = None) -> WeightedGraph:
        """Build a graph from a symmetric dense or sparse adjacency matrix.

        The diagonal is ignored.
        """
        mat = sp.coo_matrix(adjacency)
        n = mat.shape[0]
        if mat.shape != (n, n):
            raise GraphError("adjacency matrix must be square")
        nodes = tuple(str(i) for i in range(n)) if nodes is None else tuple(nodes)
        if len(nodes) != n:
            raise GraphError("node count does not match adjacency size")
        upper = sp.triu(sp.csr_matrix(mat), k=1).tocsr()
        lower = sp.tril(sp.csr_matrix(mat), k=-1).T.tocsr()
        if (upper != lower).nnz:
            raise GraphError("adjacency matrix must be symmetric")
        upper.eliminate_zeros()
        upper = upper.tocoo()
        order = np.lexsort((upper.col, upper.row))
        return cls(nodes, upper.row[order], upper.col[order], upper.data[order])

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"WeightedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def degrees(self) -> np.ndarray:
        """Weighted degree of every node, aligned with :attr:`nodes`."""
        deg = np.bincount(self.rows, weights=self.weights, minlength=self.n_nodes)
        deg += np.bincount(self.cols, weights=self.weights, minlength=self.n_nodes)
        return _frozen(deg)

    @cached_property
    def edge_degrees(self) -> np.ndarray:
        """Number of incident edges per node (unweighted degree)."""
        deg = np.bincount(self.rows, minlength=self.n_nodes) + np.bincount(self.cols, minlength=self.n_nodes)
        return _frozen(deg.astype(np.int64))

    @property
    def total_weight(self) -> float:
        """Sum of edge weights, i.e. ``m`` in the modularity formula."""
        return float(self.weights.sum())

    def adjacency(self, weighted: bool = True) -> sp.csr_matrix:
        """Symmetric CSR adjacency matrix in node order."""
        data = self.weights if weighted else np.ones(self.n_edges)
        n = self.n_nodes
        upper = sp.coo_matrix((data, (self.rows, self.cols)), shape=(n, n))
        return (upper + upper.T).tocsr()

    def edges(self) -> Iterator[tuple[str, str, float]]:
        for i, j, w in zip(self.rows.tolist(), self.cols.tolist(), self.weights.tolist()):
            yield self.nodes[i], self.nodes[j], w

    def weight(self, u: str, v: str) -> float:
        """Weight of edge ``u``-``v`` (0.0 when absent)."""
        i, j = self._node_index(u), self._node_index(v)
        if i > j:
            i, j = j, i
        hits = np.flatnonzero((self.rows == i) & (self.cols == j))
        return float(self.weights[hits[0]]) if len(hits) else 0.0

    def name(self, node: str) -> str:
        return self.names.get(node, node)

    def subgraph(self, keep: Iterable[str]) -> WeightedGraph:
        """Induced subgraph on ``keep``, preserving the original node order."""
        keep = set(keep)
        mask = np.array([v in keep for v in self.nodes], dtype=bool)
        return self._restrict(mask, np.ones(self.n_edges, dtype=bool))

    def _restrict(self, node_mask: np.ndarray, edge_mask: np.ndarray) -> WeightedGraph:
        edge_mask = edge_mask & node_mask[self.rows] & node_mask[self.cols]
        remap = np.cumsum(node_mask) - 1
        nodes = tuple(v for v, keep in zip(self.nodes, node_mask) if keep)
        names = {v: self.names[v] for v in nodes if v in self.names}
        return type(self)._rebuild(self, nodes, remap[self.rows[edge_mask]], remap[self.cols[edge_mask]],
                                   self.weights[edge_mask], names, edge_mask)

    @classmethod
    def _rebuild(cls, src, nodes, rows, cols, weights, names, edge_mask):
        return cls(nodes, rows, cols, weights, names)

    def connected_components(self) -> list[np.ndarray]:
        """Node-index arrays of each connected component, ordered by first node."""
        n_comp, labels = sp.csgraph.connected_components(self.adjacency(), directed=False)
        # scipy labels components in order of lowest node index
        return [np.flatnonzero(labels == c) for c in range(n_comp)]

    def _node_index(self, node: str) -> int:
        try:
            return self.index[node]
        except KeyError:
            raise GraphError(f"node not found: {node!r}") from None


@dataclass(frozen=True)
class Partition:
    """Total assignment of nodes to integer community labels."""

    assignment: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "assignment", {str(k): int(v) for k, v in self.assignment.items()})

    @classmethod
    def from_labels(cls, nodes: Iterable[str], labels: Iterable[int]) -> Partition:
        nodes, labels = list(nodes), list(labels)
        if len(nodes) != len(labels):
            raise GraphError("nodes and labels differ in length")
        return cls(dict(zip(nodes, (int(x) for x in labels))))

    def __getitem__(self, node: str) -> int:
        return self.assignment[node]

    def __len__(self) -> int:
        return len(self.assignment)

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def labels_for(self, graph: WeightedGraph) -> np.ndarray:
        """Labels aligned with ``graph.nodes``; raises if the partition is not total."""
        missing = [v for v in graph.nodes if v not in self.assignment]
        if missing:
            raise GraphError(f"partition does not cover node {missing[0]!r}")
        return np.array([self.assignment[v] for v in graph.nodes], dtype=np.int64)

    def communities(self) -> dict[int, list[str]]:
        groups: dict[int, list[str]] = {}
        for node, label in self.assignment.items():
            groups.setdefault(label, []).append(node)
        return groups


def weighted_degree(graph: WeightedGraph, node: str) -> float:
    """Sum of the weights of edges incident to ``node``."""
    return float(graph.degrees[graph._node_index(node)])


def canonicalize_partition(partition: Partition, order: Iterable[str] | None = None) -> Partition:
    """Relabel communities 0..c-1 by first appearance along ``order``.

    ``order`` defaults to the partition's own node order.
    """
    order = list(partition.assignment) if order is None else list(order)
    mapping: dict[int, int] = {}
    out = {}
    for node in order:
        label = partition.assignment[node]
        if label not in mapping:
            mapping[label] = len(mapping)
        out[node] = mapping[label]
    return Partition(out)


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Array version of :func:`canonicalize_partition`."""
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse.reshape(-1)]


def modularity(
    graph: WeightedGraph,
    partition: Partition | np.ndarray,
    resolution: float = 1.0,
    weighted: bool = True,
) -> float:
    """Newman-Girvan modularity with weighted adjacency and degrees.

    Computed in the per-community form ``sum_c in_c/2m - res*(tot_c/2m)**2``
    where ``in_c`` counts internal weight twice. ``weighted=False`` scores the
    binarized adjacency instead. ``partition`` may be a :class:`Partition` or
    a label array aligned with ``graph.nodes``.
    """
    if graph.n_nodes == 0:
        raise GraphError("modularity undefined: empty graph")
    if isinstance(partition, Partition):
        labels = partition.labels_for(graph)
    else:
        labels = np.asarray(partition, dtype=np.int64)
        if labels.shape != (graph.n_nodes,):
            raise GraphError("partition does not cover every node")
    w = graph.weights if weighted else np.ones(graph.n_edges)
    two_m = 2.0 * float(w.sum())
    if two_m <= 0:
        raise GraphError("modularity undefined: total weight is 0")
    _, labels = np.unique(labels, return_inverse=True)
    labels = labels.reshape(-1)
    c = labels.max() + 1
    deg = np.bincount(graph.rows, weights=w, minlength=graph.n_nodes)
    deg += np.bincount(graph.cols, weights=w, minlength=graph.n_nodes)
    tot = np.bincount(labels, weights=deg, minlength=c)
    same = labels[graph.rows] == labels[graph.cols]
    internal = 2.0 * float(w[same].sum())
    return internal / two_m - resolution * float(np.sum((tot / two_m) ** 2))
