"""Item co-preference networks from sentiment-labelled reviews, with community detection."""

from .community import (
    AlgorithmParams,
    CommunityReport,
    FastGreedy,
    Louvain,
    SpectralCommunities,
    Spinglass,
    Walktrap,
    detect,
)
from .graph import Partition, WeightedGraph, canonicalize_partition, modularity, weighted_degree
from .ingest import BipartiteGraph, Category, EmojiDictionary, ReviewRecord, Sentiment, read_reviews_csv
from .pipeline import PipelineConfig, run_pipeline
from .projection import CoPreferenceGraph, CoPreferenceNetwork, ItemRatings

__version__ = "0.1.0"

__all__ = [
    "AlgorithmParams",
    "BipartiteGraph",
    "Category",
    "CoPreferenceGraph",
    "CoPreferenceNetwork",
    "CommunityReport",
    "EmojiDictionary",
    "FastGreedy",
    "ItemRatings",
    "Louvain",
    "Partition",
    "PipelineConfig",
    "ReviewRecord",
    "Sentiment",
    "SpectralCommunities",
    "Spinglass",
    "Walktrap",
    "WeightedGraph",
    "canonicalize_partition",
    "detect",
    "modularity",
    "read_reviews_csv",
    "run_pipeline",
    "weighted_degree",
]
