"""Spectral clustering on the graph Laplacian."""

from __future__ import annotations

import numpy as np

from ..graph import WeightedGraph
from ..linalg import eigensolve_symmetric, kmeans
from .base import CommunityDetector

EIGENGAP_WINDOW = 20


def laplacian_embedding(graph: WeightedGraph, k: int, laplacian: str = "unnormalized", method: str = "auto"):
    """Smallest ``k`` eigenvalues of the Laplacian and the n x k embedding.

    ``laplacian="random_walk"`` uses ``L_rw = I - D^-1 W``, solved through
    the similar symmetric matrix ``D^-1/2 L D^-1/2``; embedding columns are
    rescaled to unit norm either way.
    """
    w = graph.adjacency().toarray()
    deg = w.sum(axis=1)
    lap = np.diag(deg) - w
    if laplacian == "unnormalized":
        vals, vecs = eigensolve_symmetric(lap, k, method=method)
    elif laplacian == "random_walk":
        if np.any(deg == 0):
            raise ValueError("random-walk Laplacian needs every degree > 0")
        s = 1.0 / np.sqrt(deg)
        vals, vecs = eigensolve_symmetric(lap * s[:, None] * s[None, :], k, method=method)
        vecs = vecs * s[:, None]
        vecs = vecs / np.linalg.norm(vecs, axis=0)
    else:
        raise ValueError(f"unknown laplacian {laplacian!r}")
    return vals, vecs


def eigengap_k(eigenvalues) -> int:
    """Cluster count at the largest gap between consecutive sorted eigenvalues."""
    vals = np.asarray(eigenvalues)
    if len(vals) < 2:
        return 1
    return int(np.argmax(np.diff(vals))) + 1


class SpectralCommunities(CommunityDetector):
    """Laplacian eigenvector embedding followed by k-means.

    Parameters
    ----------
    n_clusters : int or None
        Number of communities; ``None`` picks it by the eigengap among the
        smallest ``min(20, n)`` eigenvalues.
    laplacian : {"unnormalized", "random_walk"}
    eigensolver : {"auto", "jacobi", "lapack"}
    n_init : int
        k-means++ restarts (best inertia kept).
    random_state : int or None
    """

    name = "spectral"

    def __init__(self, n_clusters=None, laplacian="unnormalized", eigensolver="auto", n_init=10, random_state=None):
        self.n_clusters = n_clusters
        self.laplacian = laplacian
        self.eigensolver = eigensolver
        self.n_init = n_init
        self.random_state = random_state

    def _validate_params(self):
        if self.n_clusters is not None and int(self.n_clusters) < 1:
            raise ValueError("n_clusters must be >= 1")

    def _detect(self, graph: WeightedGraph) -> np.ndarray:
        n = graph.n_nodes
        if self.n_clusters is not None and int(self.n_clusters) > n:
            raise ValueError(f"n_clusters={self.n_clusters} exceeds node count {n}")
        window = min(EIGENGAP_WINDOW, n)
        need = max(window, int(self.n_clusters or 1))
        vals, vecs = laplacian_embedding(graph, need, self.laplacian, self.eigensolver)
        self.eigenvalues_ = vals
        k = int(self.n_clusters) if self.n_clusters is not None else eigengap_k(vals[:window])
        self.k_ = k
        if k == 1:
            return np.zeros(n, dtype=np.int64)
        return kmeans(vecs[:, :k], k, seed=self.random_state, n_init=self.n_init).labels
