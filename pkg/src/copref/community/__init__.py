"""Community detection algorithms with a scikit-learn style interface."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from ..graph import WeightedGraph
from .base import AlgorithmError, CommunityDetector, CommunityReport, check_graph
from .fastgreedy import FastGreedy
from .louvain import Louvain
from .spectral import SpectralCommunities
from .spinglass import Spinglass, hamiltonian
from .walktrap import Walktrap

ALGORITHMS = ("louvain", "fastgreedy", "walktrap", "spinglass", "spectral")


@dataclass(frozen=True)
class AlgorithmParams:
    """Flat parameter set covering all five detectors."""

    algorithm: str = "louvain"
    resolution: float = 1.0
    gamma: float = 1.0
    walk_length: int = 4
    spin_states: int = 25
    k_clusters: int | None = None
    laplacian: str = "unnormalized"
    start_temp: float = 1.0
    cooling: float = 0.99
    max_sweeps: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if not self.resolution > 0 or not self.gamma > 0:
            raise ValueError("resolution and gamma must be > 0")
        if self.walk_length < 1 or self.spin_states < 2:
            raise ValueError("walk_length must be >= 1 and spin_states >= 2")
        if self.k_clusters is not None and self.k_clusters < 1:
            raise ValueError("k_clusters must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")

    def as_dict(self) -> dict:
        return asdict(self)


def make_detector(params: AlgorithmParams) -> CommunityDetector:
    """Instantiate the estimator selected by ``params.algorithm``."""
    seed = params.seed
    if params.algorithm == "louvain":
        return Louvain(resolution=params.resolution, random_state=seed)
    if params.algorithm == "fastgreedy":
        return FastGreedy(random_state=seed)
    if params.algorithm == "walktrap":
        return Walktrap(walk_length=params.walk_length, random_state=seed)
    if params.algorithm == "spinglass":
        return Spinglass(
            gamma=params.gamma,
            spin_states=params.spin_states,
            start_temp=params.start_temp,
            cooling=params.cooling,
            max_sweeps=params.max_sweeps,
            random_state=seed,
        )
    return SpectralCommunities(n_clusters=params.k_clusters, laplacian=params.laplacian, random_state=seed)


def detect(graph: WeightedGraph, params: AlgorithmParams, **context) -> CommunityReport:
    """Run one algorithm and return its report."""
    return make_detector(params).report(check_graph(graph), **context)


def louvain(graph, params: AlgorithmParams) -> CommunityReport:
    return detect(graph, _with(params, "louvain"))


def fast_greedy(graph, params: AlgorithmParams) -> CommunityReport:
    return detect(graph, _with(params, "fastgreedy"))


def walktrap(graph, params: AlgorithmParams) -> CommunityReport:
    return detect(graph, _with(params, "walktrap"))


def spinglass(graph, params: AlgorithmParams) -> CommunityReport:
    return detect(graph, _with(params, "spinglass"))


def spectral(graph, params: AlgorithmParams) -> CommunityReport:
    return detect(graph, _with(params, "spectral"))


def _with(params: AlgorithmParams, algorithm: str) -> AlgorithmParams:
    return params if params.algorithm == algorithm else AlgorithmParams(**{**params.as_dict(), "algorithm": algorithm})


__all__ = [
    "ALGORITHMS",
    "AlgorithmError",
    "AlgorithmParams",
    "CommunityDetector",
    "CommunityReport",
    "FastGreedy",
    "Louvain",
    "SpectralCommunities",
    "Spinglass",
    "Walktrap",
    "check_graph",
    "detect",
    "fast_greedy",
    "hamiltonian",
    "louvain",
    "make_detector",
    "spectral",
    "spinglass",
    "walktrap",
]
