"""Pons-Latapy random-walk agglomeration (Walktrap)."""

from __future__ import annotations

import heapq

import numpy as np

from ..graph import WeightedGraph
from .base import CommunityDetector


class Walktrap(CommunityDetector):
    """Walktrap community detection.

    Nodes are compared through their ``walk_length``-step random-walk
    distributions under the transition matrix ``D^-1 W``. Adjacent
    communities are merged greedily by the smallest increase of the mean
    squared distance (Ward criterion); the dendrogram is cut where
    modularity peaks.

    Attributes
    ----------
    merges_ : list of (int, int)
    q_history_ : list of float
    """

    name = "walktrap"

    def __init__(self, walk_length=4, random_state=None):
        self.walk_length = walk_length
        self.random_state = random_state

    def _validate_params(self):
        if int(self.walk_length) < 1:
            raise ValueError("walk_length must be >= 1")

    def _detect(self, graph: WeightedGraph) -> np.ndarray:
        n = graph.n_nodes
        two_m = 2.0 * graph.total_weight
        self.merges_, self.q_history_ = [], []
        if two_m == 0:
            return np.arange(n)
        adj = graph.adjacency().toarray()
        deg = adj.sum(axis=1)
        inv = np.divide(1.0, deg, out=np.zeros(n), where=deg > 0)
        trans = adj * inv[:, None]
        walk = np.linalg.matrix_power(trans, int(self.walk_length))
        # D^-1/2 column scaling turns the walk distance into a plain Euclidean one
        vec = walk * np.sqrt(inv)[None, :]

        size = np.ones(n)
        tot = deg / two_m
        links: list[dict[int, float]] = [dict() for _ in range(n)]
        for i, j, w in zip(graph.rows.tolist(), graph.cols.tolist(), graph.weights.tolist()):
            links[i][j] = w
            links[j][i] = w
        sigma: list[dict[int, float]] = [dict() for _ in range(n)]
        heap = []
        rows, cols = graph.rows, graph.cols
        d2 = np.sum((vec[rows] - vec[cols]) ** 2, axis=1) / (2.0 * n)
        for i, j, ds in zip(rows.tolist(), cols.tolist(), d2.tolist()):
            sigma[i][j] = sigma[j][i] = ds
            heap.append((ds, i, j))
        heapq.heapify(heap)

        alive = np.ones(n, dtype=bool)
        q = float(-np.sum(tot**2))
        self.q_history_.append(q)
        best_q, best_step = q, 0
        while heap:
            ds, i, j = heapq.heappop(heap)
            if not (alive[i] and alive[j]) or sigma[i].get(j) != ds:
                continue
            # merge j into i
            w_ij = links[i].pop(j)
            del links[j][i]
            q += 2.0 * w_ij / two_m - 2.0 * tot[i] * tot[j]
            si, sj = size[i], size[j]
            old_i, old_j = sigma[i], sigma[j]
            del old_i[j], old_j[i]
            merged_vec = (si * vec[i] + sj * vec[j]) / (si + sj)
            neighbors = sorted(set(old_i) | set(old_j))
            new_sigma: dict[int, float] = {}
            direct = []
            for k in neighbors:
                if k in old_i and k in old_j:
                    sk = size[k]
                    new_sigma[k] = ((si + sk) * old_i[k] + (sj + sk) * old_j[k] - sk * ds) / (si + sj + sk)
                else:
                    direct.append(k)
            if direct:
                idx = np.array(direct)
                dist = np.sum((vec[idx] - merged_vec) ** 2, axis=1)
                sk = size[idx]
                vals = dist * (si + sj) * sk / ((si + sj + sk) * n)
                new_sigma.update(zip(direct, vals.tolist()))
            for k, w in links[j].items():
                links[i][k] = links[i].get(k, 0.0) + w
                links[k][i] = links[k].get(i, 0.0) + w
                del links[k][j]
            links[j] = {}
            for k in neighbors:
                sigma[k].pop(j, None)
                sigma[k][i] = new_sigma[k]
                heapq.heappush(heap, (new_sigma[k], min(i, k), max(i, k)))
            sigma[i] = new_sigma
            sigma[j] = {}
            vec[i] = merged_vec
            size[i] = si + sj
            tot[i] += tot[j]
            tot[j] = 0.0
            alive[j] = False
            self.merges_.append((i, j))
            self.q_history_.append(q)
            if q > best_q + 1e-12:
                best_q, best_step = q, len(self.merges_)
        self.best_step_ = best_step
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.merges_[:best_step]:
            parent[find(j)] = find(i)
        return np.array([find(x) for x in range(n)])
