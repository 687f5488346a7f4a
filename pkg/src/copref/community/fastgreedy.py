"""Clauset-Newman-Moore greedy agglomeration."""

from __future__ import annotations

import heapq

import numpy as np

from ..graph import WeightedGraph
from .base import CommunityDetector


class FastGreedy(CommunityDetector):
    """Greedy modularity agglomeration (CNM).

    Starting from singletons, the adjacent pair with the largest modularity
    gain is merged until no adjacent pairs remain; the partition with the
    highest modularity along the way is returned. Equal gains go to the
    lowest ``(i, j)`` label pair.

    Attributes
    ----------
    merges_ : list of (int, int)
        Every merge performed, as ``(kept, absorbed)`` singleton-level labels.
    q_history_ : list of float
        Modularity before the first merge and after each merge.
    best_step_ : int
        Number of merges applied to obtain ``labels_``.
    """

    name = "fastgreedy"

    def __init__(self, random_state=None):
        self.random_state = random_state

    def _detect(self, graph: WeightedGraph) -> np.ndarray:
        n = graph.n_nodes
        two_m = 2.0 * graph.total_weight
        self.merges_, self.q_history_, self.best_step_ = [], [], 0
        if two_m == 0:
            return np.arange(n)
        a = (graph.degrees / two_m).tolist()
        dq: list[dict[int, float]] = [dict() for _ in range(n)]
        for i, j, w in zip(graph.rows.tolist(), graph.cols.tolist(), graph.weights.tolist()):
            val = 2.0 * (w / two_m - a[i] * a[j])
            dq[i][j] = val
            dq[j][i] = val
        heap = [(-v, i, j) for i in range(n) for j, v in dq[i].items() if i < j]
        heapq.heapify(heap)
        alive = [True] * n
        q = -sum(x * x for x in a)
        self.q_history_.append(q)
        best_q, best_step = q, 0
        while heap:
            neg, i, j = heapq.heappop(heap)
            if not (alive[i] and alive[j]) or dq[i].get(j) != -neg:
                continue
            gain = -neg
            # merge j into i (i < j keeps the lower label)
            di, dj = dq[i], dq[j]
            del di[j]
            del dj[i]
            for k in set(di) | set(dj):
                if k in di and k in dj:
                    val = di[k] + dj[k]
                elif k in di:
                    val = di[k] - 2.0 * a[j] * a[k]
                else:
                    val = dj[k] - 2.0 * a[i] * a[k]
                di[k] = val
                dq[k][i] = val
                dq[k].pop(j, None)
                heapq.heappush(heap, (-val, min(i, k), max(i, k)))
            dq[j] = {}
            alive[j] = False
            a[i] += a[j]
            a[j] = 0.0
            q += gain
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
