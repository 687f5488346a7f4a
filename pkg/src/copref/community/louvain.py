"""Multilevel (Louvain) modularity optimisation."""

from __future__ import annotations

import numpy as np

from ..graph import WeightedGraph
from .base import CommunityDetector, neighbor_lists


def _one_level(nbrs, wts, loops, degree, two_m, resolution, order):
    """Local-move phase on one level. Returns (community per node, moved?)."""
    n = len(nbrs)
    comm = list(range(n))
    tot = list(degree)
    moved_any = False
    while True:
        moved = 0
        for i in order:
            ci = comm[i]
            ki = degree[i]
            links: dict[int, float] = {}
            for j, w in zip(nbrs[i], wts[i]):
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[ci] -= ki
            scale = resolution * ki / two_m
            best, best_gain = ci, links.get(ci, 0.0) - scale * tot[ci]
            for c in sorted(links):
                gain = links[c] - scale * tot[c]
                if gain > best_gain + 1e-12 * (abs(best_gain) + 1.0):
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                comm[i] = best
                moved += 1
        if not moved:
            break
        moved_any = True
    return comm, moved_any


def _aggregate(nbrs, wts, loops, comm):
    labels = {c: k for k, c in enumerate(sorted(set(comm)))}
    m = len(labels)
    new_loops = [0.0] * m
    edges: list[dict[int, float]] = [dict() for _ in range(m)]
    for i, ci in enumerate(comm):
        a = labels[ci]
        new_loops[a] += loops[i]
        for j, w in zip(nbrs[i], wts[i]):
            b = labels[comm[j]]
            if a == b:
                new_loops[a] += w
            else:
                edges[a][b] = edges[a].get(b, 0.0) + w
    new_nbrs = [sorted(e) for e in edges]
    new_wts = [[edges[a][b] for b in new_nbrs[a]] for a in range(m)]
    return new_nbrs, new_wts, new_loops, [labels[c] for c in comm]


def _level_quality(nbrs, wts, loops, degree, two_m, resolution):
    # every level node is its own community here
    internal = sum(loops)
    return internal / two_m - resolution * sum((d / two_m) ** 2 for d in degree)


class Louvain(CommunityDetector):
    """Louvain community detection.

    Parameters
    ----------
    resolution : float
        Multiplier on the null-model term; values above 1 favour smaller
        communities.
    random_state : int or None
        Seeds the node visiting order.

    Attributes
    ----------
    history_ : list of float
        Resolution-scaled modularity after each aggregation level.
    """

    name = "louvain"

    def __init__(self, resolution=1.0, random_state=None):
        self.resolution = resolution
        self.random_state = random_state

    def _validate_params(self):
        if not self.resolution > 0:
            raise ValueError("resolution must be > 0")

    def _detect(self, graph: WeightedGraph) -> np.ndarray:
        rng = np.random.default_rng(self.random_state)
        nbrs, wts = neighbor_lists(graph)
        loops = [0.0] * graph.n_nodes
        two_m = 2.0 * graph.total_weight
        membership = np.arange(graph.n_nodes)
        self.history_ = []
        if two_m == 0:
            return membership
        while True:
            degree = [sum(w) + loop for w, loop in zip(wts, loops)]
            if not self.history_:
                self.history_.append(_level_quality(nbrs, wts, loops, degree, two_m, self.resolution))
            order = rng.permutation(len(nbrs)).tolist()
            comm, moved = _one_level(nbrs, wts, loops, degree, two_m, self.resolution, order)
            if not moved:
                break
            nbrs, wts, loops, mapping = _aggregate(nbrs, wts, loops, comm)
            membership = np.asarray(mapping)[membership]
            degree = [sum(w) + loop for w, loop in zip(wts, loops)]
            self.history_.append(_level_quality(nbrs, wts, loops, degree, two_m, self.resolution))
        return membership
