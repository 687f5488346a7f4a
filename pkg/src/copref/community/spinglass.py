"""Potts-model community detection by simulated annealing (Reichardt-Bornholdt)."""

from __future__ import annotations

import numpy as np

from ..graph import WeightedGraph
from .base import CommunityDetector


def hamiltonian(graph: WeightedGraph, labels, gamma: float = 1.0) -> float:
    """``-sum_{i<j} (W_ij - gamma k_i k_j / 2m) delta(s_i, s_j)``."""
    labels = np.asarray(labels)
    two_m = 2.0 * graph.total_weight
    same = labels[graph.rows] == labels[graph.cols]
    attract = float(graph.weights[same].sum())
    deg = graph.degrees
    tot = np.bincount(labels, weights=deg)
    # sum over unordered pairs i<j in the same spin state
    null = float((np.sum(tot**2) - np.sum(deg**2)) / 2.0) / two_m
    return -(attract - gamma * null)


class Spinglass(CommunityDetector):
    """Spin-glass community detection.

    Minimises the Potts Hamiltonian with a configuration null model by
    heat-bath simulated annealing, one connected component at a time. The
    null model always uses the whole graph's total weight, so the
    per-component runs minimise the global Hamiltonian.
    Temperatures are measured in units of the component's mean weighted
    degree, so the schedule does not depend on the overall weight scale.
    A zero-temperature sweep finishes the run.

    Parameters
    ----------
    gamma : float
        Null-model weight; larger values give smaller communities.
    spin_states : int
        Upper bound on the number of communities per component.
    start_temp, cooling, max_sweeps, stop_acceptance : float, float, int, float
        Geometric schedule ``T <- T * cooling`` after each sweep; annealing
        stops early once the fraction of spin changes in a sweep falls below
        ``stop_acceptance``.
    random_state : int or None
    """

    name = "spinglass"

    def __init__(
        self,
        gamma=1.0,
        spin_states=25,
        start_temp=1.0,
        cooling=0.99,
        max_sweeps=300,
        stop_acceptance=0.001,
        random_state=None,
    ):
        self.gamma = gamma
        self.spin_states = spin_states
        self.start_temp = start_temp
        self.cooling = cooling
        self.max_sweeps = max_sweeps
        self.stop_acceptance = stop_acceptance
        self.random_state = random_state

    def _validate_params(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")
        if int(self.spin_states) < 2:
            raise ValueError("spin_states must be >= 2")
        if not (self.start_temp > 0 and 0 < self.cooling < 1 and self.max_sweeps >= 1):
            raise ValueError("invalid annealing schedule")

    def _detect(self, graph: WeightedGraph) -> np.ndarray:
        rng = np.random.default_rng(self.random_state)
        labels = np.zeros(graph.n_nodes, dtype=np.int64)
        self.sweeps_ = []
        offset = 0
        two_m = 2.0 * graph.total_weight
        for comp in graph.connected_components():
            if len(comp) == 1:
                labels[comp] = offset
                offset += 1
                continue
            sub = graph.subgraph([graph.nodes[i] for i in comp])
            spins, sweeps = self._anneal(sub, rng, two_m)
            _, spins = np.unique(spins, return_inverse=True)
            labels[comp] = spins.reshape(-1) + offset
            offset += int(spins.max()) + 1
            self.sweeps_.append(sweeps)
        return labels

    def _anneal(self, graph: WeightedGraph, rng: np.random.Generator, two_m: float):
        n = graph.n_nodes
        q = min(int(self.spin_states), n)
        adj = graph.adjacency()
        deg = graph.degrees
        scale = float(deg.mean())
        nbr = [adj.indices[adj.indptr[i]:adj.indptr[i + 1]] for i in range(n)]
        wt = [adj.data[adj.indptr[i]:adj.indptr[i + 1]] / scale for i in range(n)]
        coupling = self.gamma * (deg / scale) / two_m
        spins = rng.integers(q, size=n)
        tot = np.bincount(spins, weights=deg, minlength=q)

        def local_energy(i):
            field = np.bincount(spins[nbr[i]], weights=wt[i], minlength=q)
            rest = tot.copy()
            rest[spins[i]] -= deg[i]
            return -(field - coupling[i] * rest)

        temp = float(self.start_temp)
        sweeps = 0
        for sweeps in range(1, int(self.max_sweeps) + 1):
            changed = 0
            for i in rng.permutation(n):
                energy = local_energy(i)
                p = np.exp(-(energy - energy.min()) / temp)
                new = int(np.searchsorted(np.cumsum(p), rng.random() * p.sum(), side="right"))
                new = min(new, q - 1)
                old = spins[i]
                if new != old:
                    tot[old] -= deg[i]
                    tot[new] += deg[i]
                    spins[i] = new
                    changed += 1
            temp *= self.cooling
            if changed / n < self.stop_acceptance:
                break
        # quench
        while True:
            changed = 0
            for i in range(n):
                energy = local_energy(i)
                old = spins[i]
                new = int(np.argmin(energy))
                if energy[new] < energy[old] - 1e-12:
                    tot[old] -= deg[i]
                    tot[new] += deg[i]
                    spins[i] = new
                    changed += 1
            if not changed:
                break
        return spins, sweeps
