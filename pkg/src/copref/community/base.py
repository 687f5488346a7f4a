"""Shared estimator plumbing for the community detectors."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClusterMixin

from ..graph import GraphError, Partition, WeightedGraph, canonical_labels, modularity


class AlgorithmError(RuntimeError):
    """Raised when a detector cannot produce a partition."""


@dataclass(frozen=True)
class CommunityReport:
    algorithm: str
    params: dict[str, Any]
    seed: int | None
    partition: Partition
    modularity: float
    n_communities: int
    variant: str | None = None
    category: str | None = None
    duration: float = field(default=0.0, compare=False)


def check_graph(X) -> WeightedGraph:
    """Accept a :class:`WeightedGraph` or a symmetric (sparse) adjacency matrix."""
    if isinstance(X, WeightedGraph):
        graph = X
    elif sp.issparse(X) or isinstance(X, np.ndarray) or isinstance(X, list):
        graph = WeightedGraph.from_adjacency(X)
    else:
        raise TypeError(f"expected a WeightedGraph or adjacency matrix, got {type(X).__name__}")
    if graph.n_nodes == 0:
        raise GraphError("empty graph")
    return graph


def neighbor_lists(graph: WeightedGraph) -> tuple[list[list[int]], list[list[float]]]:
    adj = graph.adjacency()
    nbrs, wts = [], []
    for i in range(graph.n_nodes):
        lo, hi = adj.indptr[i], adj.indptr[i + 1]
        nbrs.append(adj.indices[lo:hi].tolist())
        wts.append(adj.data[lo:hi].tolist())
    return nbrs, wts


class CommunityDetector(ClusterMixin, BaseEstimator):
    """Base class: subclasses implement ``_detect(graph) -> labels``.

    After ``fit`` the estimator exposes ``labels_`` (aligned with the graph's
    node order), ``partition_``, ``modularity_`` and ``n_communities_``.
    """

    name = "base"

    def _validate_params(self):
        pass

    def _detect(self, graph: WeightedGraph) -> np.ndarray:
        raise NotImplementedError

    def fit(self, X, y=None):
        graph = check_graph(X)
        self._validate_params()
        start = time.perf_counter()
        labels = np.asarray(self._detect(graph), dtype=np.int64)
        self.fit_time_ = time.perf_counter() - start
        self.labels_ = canonical_labels(labels)
        self.partition_ = Partition.from_labels(graph.nodes, self.labels_)
        self.n_communities_ = int(self.labels_.max()) + 1
        self.modularity_ = modularity(graph, self.labels_) if graph.total_weight > 0 else math.nan
        return self

    def _seed(self) -> int | None:
        return getattr(self, "random_state", None)

    def report(self, graph: WeightedGraph, **context) -> CommunityReport:
        """Fit on ``graph`` and wrap the outcome in a :class:`CommunityReport`."""
        self.fit(graph)
        return CommunityReport(
            algorithm=self.name,
            params=self.get_params(),
            seed=self._seed(),
            partition=self.partition_,
            modularity=self.modularity_,
            n_communities=self.n_communities_,
            duration=self.fit_time_,
            **context,
        )
