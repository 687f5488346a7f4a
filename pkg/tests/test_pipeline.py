import csv

import pytest

from copref.community import ALGORITHMS, AlgorithmError
from copref.data import fixture_path
from copref.graph import modularity
from copref.ingest import InputError
from copref.io import read_communities_csv, read_graphml
from copref.pipeline import (
    NetworkSpec,
    PipelineConfig,
    build_networks,
    config_from_mapping,
    network_specs,
    parse_variant,
    read_config,
    run_pipeline,
)


def fixture_config(out, **kw):
    base = dict(input=fixture_path("reviews.csv"), emoji=fixture_path("emoji.tsv"),
                ratings=fixture_path("ratings.csv"), out=out)
    base.update(kw)
    return PipelineConfig(**base)


@pytest.fixture(scope="module")
def grid(tmp_path_factory):
    out = tmp_path_factory.mktemp("grid")
    return out, run_pipeline(fixture_config(out))


def test_full_grid_counts(grid):
    out, reports = grid
    assert len(reports) == 35
    labels = {(r.variant, r.category) for r in reports}
    assert len(labels) == 7
    assert sum(1 for r in reports if r.variant == "primary") == 5
    assert sorted(p.name for p in out.iterdir() if p.is_dir()) == sorted(
        ["primary"] + [f"{v}-{c}" for v in ("sentiment", "blend") for c in ("scent", "longevity", "sillage")])


def test_reports_sorted(grid):
    _, reports = grid
    keys = [(r.algorithm, ("primary", "sentiment", "blend").index(r.variant), r.category or "") for r in reports]
    assert keys == sorted(keys)
    assert [r.algorithm for r in reports[::7]] == sorted(ALGORITHMS)


def test_q_recomputes_from_serialized_outputs(grid):
    out, reports = grid
    for r in reports:
        assert -0.5 <= r.modularity <= 1
        label = r.variant if r.category is None else f"{r.variant}-{r.category}"
        cell = out / label / r.algorithm
        graph, embedded = read_graphml(cell / "communities.graphml")
        from_csv = read_communities_csv(cell / "communities.csv")
        assert embedded == from_csv == r.partition
        assert modularity(graph, from_csv) == pytest.approx(r.modularity, abs=1e-9)


def test_reports_csv(grid):
    out, reports = grid
    with open(out / "reports.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 35
    assert [float(row["modularity"]) for row in rows] == [r.modularity for r in reports]


def test_single_cell(tmp_path):
    cfg = fixture_config(tmp_path, variants=("sentiment+blend",), categories=("Scent",), algorithms=("louvain",))
    (rep,) = run_pipeline(cfg)
    assert (rep.algorithm, rep.variant, rep.category) == ("louvain", "blend", "scent")
    assert -0.5 <= rep.modularity <= 1


def test_network_specs_seven():
    specs = network_specs(PipelineConfig().validate())
    assert len(specs) == 7 and specs[0] == NetworkSpec("primary", None)
    assert NetworkSpec("blend", "scent").label == "blend-scent"


def test_networks_are_filtered_and_normalized(tmp_path):
    nets = build_networks(fixture_config(tmp_path))
    for spec, g in nets.items():
        assert g.n_nodes > 0 and g.n_edges > 0
        assert g.edge_degrees.min() >= 1
        # items with <= 3 comments never appear
        assert "perfume_30" not in g.nodes and "perfume_31" not in g.nodes


def test_raw_filter_mode_changes_blend_network(tmp_path):
    spec = NetworkSpec("blend", "scent")
    blended = build_networks(fixture_config(tmp_path, variants=("blend",), categories=("scent",)))[spec]
    raw = build_networks(fixture_config(tmp_path, variants=("blend",), categories=("scent",), filter_mode="raw"))[spec]
    assert raw.n_edges < blended.n_edges


def test_binarized_modularity_mode(tmp_path):
    cfg = fixture_config(tmp_path, variants=("primary",), algorithms=("louvain",), modularity_mode="binarized")
    (rep,) = run_pipeline(cfg)
    graph, part = read_graphml(tmp_path / "primary" / "louvain" / "communities.graphml")
    assert rep.modularity == pytest.approx(modularity(graph, part, weighted=False), abs=1e-12)


def test_no_records(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("user_id,perfume_id,comment,vote_scent,vote_longevity,vote_sillage,vote_bottle,sentiment,is_reply\n")
    with pytest.raises(InputError, match="no records"):
        run_pipeline(PipelineConfig(input=p, out=tmp_path / "o"))


def test_empty_network_is_algorithm_error(tmp_path):
    with pytest.raises(AlgorithmError, match="empty"):
        run_pipeline(fixture_config(tmp_path, variants=("primary",), min_edge_weight=1e9))


@pytest.mark.parametrize(
    "values, message",
    [({"categories": "colour"}, "unknown"), ({"variants": "mixed"}, "variant"),
     ({"algorithms": "infomap"}, "unknown algorithm"), ({"bogus": "1"}, "unknown configuration key"),
     ({"seed": "x"}, "cannot parse")],
)
def test_config_errors(values, message):
    with pytest.raises(InputError, match=message):
        config_from_mapping(values).validate()


def test_config_file(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("# experiment\nvariant = sentiment+blend\nk = auto\nresolution = 2  # coarser\nseed=7\n")
    cfg = config_from_mapping(read_config(p)).validate()
    assert cfg.variants == ("blend",) and cfg.k is None and cfg.resolution == 2.0 and cfg.seed == 7
    p.write_text("just words\n")
    with pytest.raises(InputError, match=":1"):
        read_config(p)


def test_parse_variant():
    assert parse_variant("Sentiment+Blend") == "blend"
    with pytest.raises(InputError):
        parse_variant("none")


def test_workers_match_serial(tmp_path):
    cfg = dict(variants=("sentiment",), categories=("scent",), algorithms=("louvain", "walktrap"))
    serial = run_pipeline(fixture_config(tmp_path / "a", **cfg))
    parallel = run_pipeline(fixture_config(tmp_path / "b", workers=2, **cfg))
    assert serial == parallel
