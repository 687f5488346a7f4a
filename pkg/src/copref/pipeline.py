"""End-to-end experiment grid: networks x algorithms, with all outputs written."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .community import ALGORITHMS, AlgorithmParams, CommunityReport, make_detector
from .community.base import AlgorithmError
from .graph import GraphError, modularity
from .ingest import NETWORK_CATEGORIES, Category, EmojiDictionary, InputError, ReviewRecord, read_reviews_csv
from .io import write_communities_csv, write_dot, write_graphml, write_summary_csv
from .linalg import ConvergenceError
from .projection import CoPreferenceGraph, CoPreferenceNetwork, ItemRatings, read_ratings_csv

log = logging.getLogger(__name__)

VARIANTS = ("primary", "sentiment", "blend")
_VARIANT_ALIASES = {"sentiment+blend": "blend", "sentiment_blend": "blend"}


def parse_variant(value: str) -> str:
    key = value.strip().lower()
    key = _VARIANT_ALIASES.get(key, key)
    if key not in VARIANTS:
        raise InputError(f"unknown network variant {value!r}")
    return key


@dataclass
class PipelineConfig:
    input: Path | None = None
    emoji: Path | None = None
    ratings: Path | None = None
    categories: tuple[str, ...] = ("scent", "longevity", "sillage")
    variants: tuple[str, ...] = VARIANTS
    algorithms: tuple[str, ...] = ALGORITHMS
    resolution: float = 1.0
    gamma: float = 1.0
    walk_length: int = 4
    spin_states: int = 25
    k: int | None = None
    laplacian: str = "unnormalized"
    min_comments: int = 3
    min_edge_weight: float = 3.0
    blend_rating: float = 0.6
    blend_count: float = 0.4
    filter_mode: str = "blended"
    modularity_mode: str = "weighted"
    primary_postprocess: bool = True
    seed: int = 42
    out: Path = Path("copref-out")
    workers: int = 1

    def validate(self) -> PipelineConfig:
        cats = tuple(Category.parse(c).value for c in self.categories)
        if not cats or any(Category(c) not in NETWORK_CATEGORIES for c in cats):
            raise InputError("categories must be a non-empty subset of scent, longevity, sillage")
        variants = tuple(dict.fromkeys(parse_variant(v) for v in self.variants))
        algos = tuple(dict.fromkeys(a.strip().lower() for a in self.algorithms))
        if "all" in algos:
            algos = ALGORITHMS
        unknown = [a for a in algos if a not in ALGORITHMS]
        if unknown:
            raise InputError(f"unknown algorithm {unknown[0]!r}; choose from {', '.join(ALGORITHMS)}")
        if not variants or not algos:
            raise InputError("need at least one variant and one algorithm")
        if self.filter_mode not in ("blended", "raw"):
            raise InputError("filter_mode must be 'blended' or 'raw'")
        if self.modularity_mode not in ("weighted", "binarized"):
            raise InputError("modularity_mode must be 'weighted' or 'binarized'")
        if self.min_comments < 0 or self.min_edge_weight < 0:
            raise InputError("thresholds must be >= 0")
        if self.blend_rating < 0 or self.blend_count < 0:
            raise InputError("blend coefficients must be >= 0")
        if self.workers < 1:
            raise InputError("workers must be >= 1")
        return replace(self, categories=cats, variants=variants, algorithms=algos)

    def algorithm_params(self, algorithm: str) -> AlgorithmParams:
        return AlgorithmParams(
            algorithm=algorithm,
            resolution=self.resolution,
            gamma=self.gamma,
            walk_length=self.walk_length,
            spin_states=self.spin_states,
            k_clusters=self.k,
            laplacian=self.laplacian,
            seed=self.seed,
        )


def _coerce(f, raw: str):
    typ = str(f.type)
    text = raw.strip()
    if "tuple" in typ:
        return tuple(x.strip() for x in text.split(",") if x.strip())
    if "Path" in typ:
        return Path(text) if text else None
    if "bool" in typ:
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise InputError(f"{f.name}: expected a boolean, got {raw!r}")
    try:
        if "int" in typ and "float" not in typ:
            if text.lower() in ("", "none", "auto"):
                return None
            return int(text)
        if "float" in typ:
            return float(text)
    except ValueError:
        raise InputError(f"{f.name}: cannot parse {raw!r}") from None
    return text


def config_from_mapping(values: dict[str, str], base: PipelineConfig | None = None) -> PipelineConfig:
    """Apply string-valued settings (config file or flags) on top of ``base``."""
    base = base or PipelineConfig()
    by_name = {f.name: f for f in fields(PipelineConfig)}
    aliases = {"category": "categories", "variant": "variants", "algorithm": "algorithms",
               "output": "out", "output_dir": "out", "emoji_dictionary": "emoji"}
    updates = {}
    for key, raw in values.items():
        name = key.strip().lower().replace("-", "_")
        name = aliases.get(name, name)
        if name not in by_name:
            raise InputError(f"unknown configuration key {key!r}")
        updates[name] = _coerce(by_name[name], str(raw))
    return replace(base, **updates)


def read_config(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


@dataclass(frozen=True)
class NetworkSpec:
    variant: str
    category: str | None

    @property
    def label(self) -> str:
        return self.variant if self.category is None else f"{self.variant}-{self.category}"


def network_specs(config: PipelineConfig) -> list[NetworkSpec]:
    specs = []
    for variant in config.variants:
        if variant == "primary":
            specs.append(NetworkSpec("primary", None))
        else:
            specs.extend(NetworkSpec(variant, c) for c in config.categories)
    return specs


def load_records(config: PipelineConfig) -> list[ReviewRecord]:
    if config.input is None:
        raise InputError("no input file given")
    emojis = EmojiDictionary.from_tsv(config.emoji) if config.emoji else None
    records = read_reviews_csv(config.input, emojis)
    if not records:
        raise InputError("no records")
    return records


def build_network(
    records: list[ReviewRecord],
    spec: NetworkSpec,
    config: PipelineConfig,
    ratings: dict[Category, ItemRatings] | None = None,
) -> CoPreferenceGraph:
    primary = spec.variant == "primary"
    post = config.primary_postprocess or not primary
    net = CoPreferenceNetwork(
        category=spec.category,
        blend=spec.variant == "blend",
        rating_coeff=config.blend_rating,
        count_coeff=config.blend_count,
        min_comments=config.min_comments,
        min_edge_weight=config.min_edge_weight if post else 0.0,
        filter_mode=config.filter_mode,
        normalize=post,
    )
    supplied = None
    if ratings is not None and spec.category is not None:
        supplied = ratings.get(Category(spec.category))
    return net.fit(records, ratings=supplied).transform(records)


def build_networks(config: PipelineConfig, records=None) -> dict[NetworkSpec, CoPreferenceGraph]:
    config = config.validate()
    records = load_records(config) if records is None else records
    ratings = read_ratings_csv(config.ratings) if config.ratings else None
    return {spec: build_network(records, spec, config, ratings) for spec in network_specs(config)}


def _run_cell(graph: CoPreferenceGraph, spec: NetworkSpec, algorithm: str, config: PipelineConfig) -> CommunityReport:
    if graph.n_nodes == 0 or graph.n_edges == 0:
        raise AlgorithmError(f"{spec.label}: network is empty after filtering; nothing to cluster")
    params = config.algorithm_params(algorithm)
    detector = make_detector(params)
    start = time.perf_counter()
    try:
        detector.fit(graph)
    except (ConvergenceError, GraphError, ValueError) as exc:
        raise AlgorithmError(f"{algorithm} on {spec.label}: {exc}") from exc
    q = modularity(graph, detector.labels_, weighted=config.modularity_mode == "weighted")
    report = CommunityReport(
        algorithm=algorithm,
        params=detector.get_params(),
        seed=params.seed,
        partition=detector.partition_,
        modularity=q,
        n_communities=detector.n_communities_,
        variant=spec.variant,
        category=spec.category,
        duration=time.perf_counter() - start,
    )
    cell_dir = Path(config.out) / spec.label / algorithm
    write_graphml(graph, report.partition, cell_dir / "communities.graphml")
    write_communities_csv(report, cell_dir / "communities.csv", graph.names)
    write_dot(graph, report.partition, cell_dir / "communities.dot")
    log.info("%s %s: Q=%.4f, %d communities (%.2fs)", algorithm, spec.label, q, report.n_communities, report.duration)
    return report


def _sort_key(report: CommunityReport):
    return (report.algorithm, VARIANTS.index(report.variant), report.category or "")


def run_pipeline(config: PipelineConfig, records: list[ReviewRecord] | None = None) -> list[CommunityReport]:
    """Build every selected network, run every selected algorithm, write outputs.

    Returns the reports sorted by (algorithm, variant, category).
    """
    config = config.validate()
    networks = build_networks(config, records)
    out = Path(config.out)
    for spec, graph in networks.items():
        write_graphml(graph, None, out / spec.label / "network.graphml")
    cells = [(graph, spec, algo) for spec, graph in networks.items() for algo in config.algorithms]
    if config.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_run_cell, g, s, a, config) for g, s, a in cells]
            reports = [f.result() for f in futures]
    else:
        reports = [_run_cell(g, s, a, config) for g, s, a in cells]
    reports.sort(key=_sort_key)
    write_summary_csv(reports, out / "reports.csv")
    return reports


def network_stats(networks: dict[NetworkSpec, CoPreferenceGraph]) -> list[dict]:
    return [
        {"network": spec.label, "nodes": g.n_nodes, "edges": g.n_edges, "total_weight": g.total_weight}
        for spec, g in networks.items()
    ]
