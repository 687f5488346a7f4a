"""Command line entry point: ``copref run | project | score``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .community.base import AlgorithmError
from .graph import GraphError, modularity
from .ingest import InputError
from .io import read_communities_csv, read_graphml, write_graphml
from .linalg import ConvergenceError
from .pipeline import PipelineConfig, build_networks, config_from_mapping, network_stats, read_config, run_pipeline

EXIT_OK, EXIT_INPUT, EXIT_ALGORITHM = 0, 1, 2

# flag dest -> config key
_FLAG_KEYS = {
    "input": "input",
    "emoji": "emoji",
    "ratings": "ratings",
    "category": "categories",
    "variant": "variants",
    "algorithm": "algorithms",
    "resolution": "resolution",
    "gamma": "gamma",
    "walk_length": "walk_length",
    "k": "k",
    "min_comments": "min_comments",
    "min_edge_weight": "min_edge_weight",
    "blend_rating": "blend_rating",
    "blend_count": "blend_count",
    "filter_mode": "filter_mode",
    "modularity_mode": "modularity_mode",
    "seed": "seed",
    "out": "out",
    "workers": "workers",
}


def _add_network_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key = value configuration file")
    p.add_argument("--input", help="review CSV")
    p.add_argument("--emoji", help="emoji dictionary TSV")
    p.add_argument("--ratings", help="item ratings CSV (perfume_id,category,avg_rating,vote_count)")
    p.add_argument("--category", action="append", choices=["scent", "longevity", "sillage"])
    p.add_argument("--variant", action="append", choices=["primary", "sentiment", "blend"])
    p.add_argument("--min-comments", type=int)
    p.add_argument("--min-edge-weight", type=float)
    p.add_argument("--blend-rating", type=float)
    p.add_argument("--blend-count", type=float)
    p.add_argument("--filter-mode", choices=["blended", "raw"])
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copref", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="build networks and detect communities")
    _add_network_flags(run)
    run.add_argument("--algorithm", action="append",
                     choices=["louvain", "fastgreedy", "walktrap", "spinglass", "spectral", "all"])
    run.add_argument("--resolution", type=float)
    run.add_argument("--gamma", type=float)
    run.add_argument("--walk-length", type=int)
    run.add_argument("--k", type=int)
    run.add_argument("--modularity-mode", choices=["weighted", "binarized"])
    run.add_argument("--seed", type=int)
    run.add_argument("--workers", type=int)

    project = sub.add_parser("project", help="stop after network construction")
    _add_network_flags(project)

    score = sub.add_parser("score", help="recompute modularity of a saved partition")
    score.add_argument("--graphml", required=True, type=Path)
    score.add_argument("--communities", type=Path, help="communities CSV (default: labels inside the GraphML)")
    score.add_argument("--binarized", action="store_true", help="score the 0/1 adjacency")
    return parser


def _config(args) -> PipelineConfig:
    values = read_config(args.config) if getattr(args, "config", None) else {}
    for dest, key in _FLAG_KEYS.items():
        val = getattr(args, dest, None)
        if val is None:
            continue
        values[key] = ",".join(val) if isinstance(val, list) else str(val)
    return config_from_mapping(values)


def cmd_run(args) -> int:
    reports = run_pipeline(_config(args))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["algorithm", "variant", "category", "modularity", "n_communities", "seconds"])
    for r in reports:
        writer.writerow([r.algorithm, r.variant, r.category or "", f"{r.modularity:.4f}", r.n_communities,
                         f"{r.duration:.2f}"])
    return EXIT_OK


def cmd_project(args) -> int:
    config = _config(args).validate()
    networks = build_networks(config)
    for spec, graph in networks.items():
        write_graphml(graph, None, Path(config.out) / spec.label / "network.graphml")
    writer = csv.DictWriter(sys.stdout, fieldnames=["network", "nodes", "edges", "total_weight"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(network_stats(networks))
    return EXIT_OK


def cmd_score(args) -> int:
    graph, embedded = read_graphml(args.graphml)
    partition = read_communities_csv(args.communities) if args.communities else embedded
    if partition is None:
        raise InputError("no partition: pass --communities or a GraphML with community labels")
    q = modularity(graph, partition, weighted=not args.binarized)
    print(repr(q))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"run": cmd_run, "project": cmd_project, "score": cmd_score}[args.command]
    try:
        return handler(args)
    except (AlgorithmError, ConvergenceError) as exc:
        print(f"copref: algorithm failure: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM
    except (InputError, GraphError, OSError, ValueError) as exc:
        print(f"copref: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
