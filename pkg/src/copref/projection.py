"""Item co-preference graphs: projection, rating blend, filtering, normalization."""

from __future__ import annotations

import csv
import warnings
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .graph import GraphError, WeightedGraph, _frozen
from .ingest import (
    ITEM_PREFIX,
    Category,
    InputError,
    ReviewRecord,
    build_bipartite,
    BipartiteGraph,
    filter_low_engagement,
    item_names,
)


@dataclass(frozen=True, eq=False)
class CoPreferenceGraph(WeightedGraph):
    """Item graph whose edges also carry the raw co-preference count ``C_jk``."""

    counts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        super().__post_init__()
        counts = np.asarray(self.counts, dtype=np.int64).reshape(-1)
        if len(counts) != self.n_edges:
            raise GraphError("counts must align with edges")
        object.__setattr__(self, "counts", _frozen(counts))

    @classmethod
    def _rebuild(cls, src, nodes, rows, cols, weights, names, edge_mask):
        return cls(nodes, rows, cols, weights, names, src.counts[edge_mask])

    def with_weights(self, weights: np.ndarray) -> CoPreferenceGraph:
        """Copy with new edge weights; non-positive weights drop their edge."""
        weights = np.asarray(weights, dtype=np.float64)
        keep = weights > 0
        return CoPreferenceGraph(self.nodes, self.rows[keep], self.cols[keep], weights[keep], self.names,
                                 self.counts[keep])

    def with_names(self, names: Mapping[str, str]) -> CoPreferenceGraph:
        names = {v: names[v] for v in self.nodes if v in names}
        return CoPreferenceGraph(self.nodes, self.rows, self.cols, self.weights, names, self.counts)

    def count(self, u: str, v: str) -> int:
        i, j = sorted((self._node_index(u), self._node_index(v)))
        hits = np.flatnonzero((self.rows == i) & (self.cols == j))
        return int(self.counts[hits[0]]) if len(hits) else 0


@dataclass(frozen=True)
class ItemRatings:
    """Per-item average rating and vote count for one category."""

    category: Category
    average: Mapping[str, float]
    votes: Mapping[str, int] = field(default_factory=dict)

    def global_mean(self) -> float:
        if not self.average:
            return 0.0
        return float(np.mean(list(self.average.values())))


def ratings_from_records(records: Iterable[ReviewRecord], category: Category) -> ItemRatings:
    """Average of the present votes per item in ``category``."""
    sums: dict[str, float] = defaultdict(float)
    counts: dict[str, int] = defaultdict(int)
    for r in records:
        vote = r.vote(category)
        if vote is not None:
            sums[r.item_id] += vote
            counts[r.item_id] += 1
    return ItemRatings(category, {k: sums[k] / counts[k] for k in sums}, dict(counts))


def read_ratings_csv(path: str | Path) -> dict[Category, ItemRatings]:
    """Read ``perfume_id,category,avg_rating,vote_count`` rows keyed by category."""
    avg: dict[Category, dict[str, float]] = defaultdict(dict)
    cnt: dict[Category, dict[str, int]] = defaultdict(dict)
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        need = ("perfume_id", "category", "avg_rating", "vote_count")
        if not reader.fieldnames or any(c not in reader.fieldnames for c in need):
            raise InputError(f"{path}: expected columns {', '.join(need)}")
        for row in reader:
            where = f"{path}:{reader.line_num}"
            try:
                cat = Category.parse(row["category"])
                rating = float(row["avg_rating"])
                votes = int(row["vote_count"] or 0)
            except (InputError, ValueError, TypeError) as exc:
                raise InputError(f"{where}: {exc}") from None
            if not 0 <= rating <= 10:
                raise InputError(f"{where}: average rating {rating} outside [0, 10]")
            item = row["perfume_id"].strip()
            if not item.startswith(ITEM_PREFIX):
                item = ITEM_PREFIX + item
            avg[cat][item] = rating
            cnt[cat][item] = votes
    return {cat: ItemRatings(cat, avg[cat], cnt[cat]) for cat in avg}


def project_bipartite(bip: BipartiteGraph) -> CoPreferenceGraph:
    """One-mode item projection ``P = A^T A`` with the diagonal dropped.

    Edge weights start out equal to the raw counts. Items without any
    co-preference stay in the graph as isolated nodes.
    """
    a = bip.matrix()
    p = (a.T @ a).tocsr()
    upper = sp.triu(p, k=1).tocoo()
    order = np.lexsort((upper.col, upper.row))
    rows, cols = upper.row[order], upper.col[order]
    counts = upper.data[order].astype(np.int64)
    return CoPreferenceGraph(bip.items, rows, cols, counts.astype(np.float64), {}, counts)


def blend_weights(
    graph: CoPreferenceGraph,
    ratings: ItemRatings | Mapping[str, float],
    rating_coeff: float = 0.6,
    count_coeff: float = 0.4,
) -> CoPreferenceGraph:
    """Set ``W_jk = a*R_j + a*R_k + b*C_jk`` for every edge.

    Items missing from ``ratings`` get the category's global mean rating
    and a :class:`UserWarning` is emitted.
    """
    if rating_coeff < 0 or count_coeff < 0:
        raise ValueError("blend coefficients must be >= 0")
    if not isinstance(ratings, ItemRatings):
        ratings = ItemRatings(Category.SCENT, dict(ratings))
    fallback = ratings.global_mean()
    missing = [v for v in graph.nodes if v not in ratings.average]
    if missing:
        warnings.warn(
            f"{len(missing)} item(s) lack a {ratings.category.value} rating; "
            f"using global mean {fallback:.3f} (first: {missing[0]})",
            stacklevel=2,
        )
    r = np.array([ratings.average.get(v, fallback) for v in graph.nodes], dtype=np.float64)
    w = rating_coeff * r[graph.rows] + rating_coeff * r[graph.cols] + count_coeff * graph.counts
    return graph.with_weights(w)


def filter_edges(graph: CoPreferenceGraph, min_weight: float = 3.0, on: str = "weight") -> CoPreferenceGraph:
    """Drop edges whose weight (or raw count with ``on="count"``) is <= ``min_weight``."""
    if on == "weight":
        values = graph.weights
    elif on == "count":
        values = graph.counts
    else:
        raise ValueError(f"unknown filter target {on!r}")
    keep = values > min_weight
    return graph._restrict(np.ones(graph.n_nodes, dtype=bool), keep)


def prune_isolated(graph: WeightedGraph) -> WeightedGraph:
    """Remove every node with no incident edge."""
    return graph._restrict(graph.edge_degrees > 0, np.ones(graph.n_edges, dtype=bool))


def normalize_weights(graph: CoPreferenceGraph) -> CoPreferenceGraph:
    """Divide each edge weight by the product of its endpoints' edge counts."""
    deg = graph.edge_degrees.astype(np.float64)
    if graph.n_edges and np.any(deg[graph.rows] == 0):
        raise GraphError("normalization needs degrees >= 1")
    return graph.with_weights(graph.weights / (deg[graph.rows] * deg[graph.cols]))


class CoPreferenceNetwork(TransformerMixin, BaseEstimator):
    """Turn review records into a filtered, normalized item co-preference graph.

    ``fit`` learns per-item category ratings from the records' votes unless
    ``ratings`` is passed; ``transform`` runs the construction pipeline.

    Parameters
    ----------
    category : str or None
        Rating category used for the vote override and the blend. ``None``
        builds the primary network from every comment, ignoring sentiment.
    blend : bool
        Replace raw counts by rating-blended weights.
    rating_coeff, count_coeff : float
        Blend coefficients.
    min_comments : int
        Items with at most this many comments are dropped.
    min_edge_weight : float
        Edges at or below this value are dropped.
    filter_mode : {"blended", "raw"}
        Whether the edge threshold applies to the current weight or the raw count.
    normalize : bool
        Apply degree normalization after filtering.
    """

    def __init__(
        self,
        category=None,
        blend=False,
        rating_coeff=0.6,
        count_coeff=0.4,
        min_comments=3,
        min_edge_weight=3.0,
        filter_mode="blended",
        normalize=True,
    ):
        self.category = category
        self.blend = blend
        self.rating_coeff = rating_coeff
        self.count_coeff = count_coeff
        self.min_comments = min_comments
        self.min_edge_weight = min_edge_weight
        self.filter_mode = filter_mode
        self.normalize = normalize

    def _validate(self):
        if self.filter_mode not in ("blended", "raw"):
            raise ValueError(f"filter_mode must be 'blended' or 'raw', got {self.filter_mode!r}")
        if self.min_comments < 0:
            raise ValueError("min_comments must be >= 0")
        if self.rating_coeff < 0 or self.count_coeff < 0:
            raise ValueError("blend coefficients must be >= 0")
        if self.blend and self.category is None:
            raise ValueError("blending needs a rating category")
        return None if self.category is None else Category.parse(self.category)

    def fit(self, X, y=None, ratings: ItemRatings | None = None):
        category = self._validate()
        records = list(X)
        if category is not None:
            self.ratings_ = ratings if ratings is not None else ratings_from_records(records, category)
        else:
            self.ratings_ = None
        self.category_ = category
        return self

    def transform(self, X) -> CoPreferenceGraph:
        check_is_fitted(self, "category_")
        records = filter_low_engagement(list(X), self.min_comments)
        self.bipartite_ = build_bipartite(records, self.category_)
        graph = project_bipartite(self.bipartite_)
        if self.blend:
            graph = blend_weights(graph, self.ratings_, self.rating_coeff, self.count_coeff)
        graph = filter_edges(graph, self.min_edge_weight, on="weight" if self.filter_mode == "blended" else "count")
        graph = prune_isolated(graph)
        if self.normalize:
            graph = normalize_weights(graph)
        return graph.with_names(item_names(records))
