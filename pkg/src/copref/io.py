"""GraphML, CSV and DOT serialization of graphs and partitions."""

from __future__ import annotations

import csv
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from .community.base import CommunityReport
from .graph import Partition, WeightedGraph, canonicalize_partition
from .ingest import InputError
from .projection import CoPreferenceGraph

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

# 32-colour cycle for community fills
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
    "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5", "#393b79", "#637939", "#8c6d31", "#843c39",
    "#7b4173", "#5254a3", "#8ca252", "#bd9e39", "#ad494a", "#a55194", "#6b6ecf", "#e7969c",
)

SUMMARY_FIELDS = ("algorithm", "variant", "category", "modularity", "n_communities", "seed", "params")


def _open_for_write(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_graphml(graph: WeightedGraph, partition: Partition | None, path) -> None:
    """Write GraphML 1.0 with ``name``/``community`` node and ``weight``/``raw_count`` edge data."""
    if partition is not None:
        partition.labels_for(graph)
    has_counts = isinstance(graph, CoPreferenceGraph)
    root = ET.Element("graphml", {"xmlns": GRAPHML_NS})
    keys = [("d0", "node", "name", "string")]
    if partition is not None:
        keys.append(("d1", "node", "community", "int"))
    keys.append(("d2", "edge", "weight", "double"))
    if has_counts:
        keys.append(("d3", "edge", "raw_count", "int"))
    for kid, target, name, typ in keys:
        ET.SubElement(root, "key", {"id": kid, "for": target, "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, "graph", {"id": "G", "edgedefault": "undirected"})
    for node in graph.nodes:
        el = ET.SubElement(g, "node", {"id": node})
        ET.SubElement(el, "data", {"key": "d0"}).text = graph.name(node)
        if partition is not None:
            ET.SubElement(el, "data", {"key": "d1"}).text = str(partition[node])
    counts = graph.counts.tolist() if has_counts else [None] * graph.n_edges
    for (u, v, w), c in zip(graph.edges(), counts):
        el = ET.SubElement(g, "edge", {"source": u, "target": v})
        ET.SubElement(el, "data", {"key": "d2"}).text = repr(float(w))
        if c is not None:
            ET.SubElement(el, "data", {"key": "d3"}).text = str(c)
    ET.indent(root)
    with _open_for_write(path) as fh:
        fh.write("<?xml version='1.0' encoding='utf-8'?>\n")
        fh.write(ET.tostring(root, encoding="unicode"))
        fh.write("\n")


def read_graphml(path) -> tuple[WeightedGraph, Partition | None]:
    """Parse a file produced by :func:`write_graphml`."""
    try:
        tree = ET.parse(path)
    except (OSError, ET.ParseError) as exc:
        raise InputError(f"cannot read GraphML {path}: {exc}") from exc
    ns = {"g": GRAPHML_NS}
    root = tree.getroot()
    keys = {k.get("id"): k.get("attr.name") for k in root.findall("g:key", ns)}
    graph_el = root.find("g:graph", ns)
    if graph_el is None:
        raise InputError(f"{path}: no <graph> element")
    nodes, names, labels = [], {}, {}
    for el in graph_el.findall("g:node", ns):
        node = el.get("id")
        nodes.append(node)
        for d in el.findall("g:data", ns):
            attr = keys.get(d.get("key"))
            if attr == "name" and d.text and d.text != node:
                names[node] = d.text
            elif attr == "community":
                labels[node] = int(d.text)
    index = {v: i for i, v in enumerate(nodes)}
    rows, cols, weights, counts = [], [], [], []
    for el in graph_el.findall("g:edge", ns):
        i, j = index[el.get("source")], index[el.get("target")]
        data = {keys.get(d.get("key")): d.text for d in el.findall("g:data", ns)}
        rows.append(min(i, j))
        cols.append(max(i, j))
        weights.append(float(data.get("weight", 1.0)))
        counts.append(int(data["raw_count"]) if "raw_count" in data else None)
    order = np.lexsort((cols, rows)) if rows else np.array([], dtype=np.int64)
    rows, cols, weights = np.array(rows)[order], np.array(cols)[order], np.array(weights)[order]
    if "raw_count" in keys.values():
        graph = CoPreferenceGraph(tuple(nodes), rows, cols, weights, names, np.array(counts, dtype=np.int64)[order])
    else:
        graph = WeightedGraph(tuple(nodes), rows, cols, weights, names)
    partition = Partition({v: labels[v] for v in nodes}) if len(labels) == len(nodes) and labels else None
    return graph, partition


def write_communities_csv(report: CommunityReport, path, names: dict[str, str] | None = None) -> None:
    """Write ``community_id,perfume_id,perfume_name`` rows plus a ``*.summary.csv`` companion."""
    names = names or {}
    partition = canonicalize_partition(report.partition)
    rows = sorted((label, node) for node, label in partition.assignment.items())
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["community_id", "perfume_id", "perfume_name"])
        for label, node in rows:
            writer.writerow([label, node, names.get(node, node)])
    write_summary_csv([report], summary_path(path))


def summary_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".summary.csv")


def _summary_row(report: CommunityReport) -> list:
    params = ";".join(f"{k}={v}" for k, v in sorted(report.params.items()))
    return [report.algorithm, report.variant or "", report.category or "", repr(float(report.modularity)),
            report.n_communities, "" if report.seed is None else report.seed, params]


def write_summary_csv(reports, path) -> None:
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_FIELDS)
        for report in reports:
            writer.writerow(_summary_row(report))


def read_communities_csv(path) -> Partition:
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"community_id", "perfume_id"} <= set(reader.fieldnames):
            raise InputError(f"{path}: expected community_id and perfume_id columns")
        try:
            return Partition({row["perfume_id"]: int(row["community_id"]) for row in reader})
        except (TypeError, ValueError) as exc:
            raise InputError(f"{path}:{reader.line_num}: {exc}") from None


def dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def write_dot(graph: WeightedGraph, partition: Partition | None, path) -> None:
    """Undirected DOT graph with nodes filled by community colour."""
    lines = ["graph communities {", "  node [style=filled];"]
    for node in graph.nodes:
        attrs = [f"label={dot_quote(graph.name(node))}"]
        if partition is not None:
            label = partition[node]
            attrs.append(f'fillcolor="{PALETTE[label % len(PALETTE)]}"')
            attrs.append(f'community="{label}"')
        lines.append(f"  {dot_quote(node)} [{', '.join(attrs)}];")
    for u, v, w in graph.edges():
        lines.append(f"  {dot_quote(u)} -- {dot_quote(v)} [weight={w!r}];")
    lines.append("}")
    with _open_for_write(path) as fh:
        fh.write("\n".join(lines) + "\n")

