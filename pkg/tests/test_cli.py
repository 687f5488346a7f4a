import subprocess
import sys

import pytest

from copref.cli import EXIT_ALGORITHM, EXIT_INPUT, EXIT_OK, main
from copref.data import fixture_path


def fixture_args(out):
    return ["--input", str(fixture_path("reviews.csv")), "--emoji", str(fixture_path("emoji.tsv")),
            "--ratings", str(fixture_path("ratings.csv")), "--out", str(out)]


def test_run_single_cell(tmp_path, capsys):
    code = main(["run", *fixture_args(tmp_path), "--variant", "blend", "--category", "scent",
                 "--algorithm", "louvain", "--resolution", "2"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "algorithm,variant,category,modularity,n_communities,seconds"
    assert lines[1].startswith("louvain,blend,scent,")
    assert (tmp_path / "blend-scent" / "louvain" / "communities.dot").exists()


def test_score_recomputes_q(tmp_path, capsys):
    main(["run", *fixture_args(tmp_path), "--variant", "sentiment", "--category", "sillage",
          "--algorithm", "walktrap"])
    out = capsys.readouterr().out.strip().splitlines()[1]
    reported = float(out.split(",")[3])
    cell = tmp_path / "sentiment-sillage" / "walktrap"
    assert main(["score", "--graphml", str(cell / "communities.graphml")]) == EXIT_OK
    embedded = float(capsys.readouterr().out)
    assert main(["score", "--graphml", str(tmp_path / "sentiment-sillage" / "network.graphml"),
                 "--communities", str(cell / "communities.csv")]) == EXIT_OK
    from_csv = float(capsys.readouterr().out)
    assert embedded == from_csv
    assert round(embedded, 4) == reported


def test_score_without_partition(tmp_path, capsys):
    main(["project", *fixture_args(tmp_path), "--variant", "primary"])
    capsys.readouterr()
    code = main(["score", "--graphml", str(tmp_path / "primary" / "network.graphml")])
    assert code == EXIT_INPUT
    assert "no partition" in capsys.readouterr().err


def test_project_stats(tmp_path, capsys):
    assert main(["project", *fixture_args(tmp_path)]) == EXIT_OK
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "network,nodes,edges,total_weight"
    assert len(rows) == 8


def test_missing_input_exit_code(tmp_path, capsys):
    code = main(["run", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
    assert code == EXIT_INPUT
    assert "input error" in capsys.readouterr().err


def test_malformed_row_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("user_id,perfume_id,comment,vote_scent,vote_longevity,vote_sillage,vote_bottle,sentiment,is_reply\n"
                 "1,2,x,99,,,,positive,0\n")
    assert main(["run", "--input", str(p), "--out", str(tmp_path)]) == EXIT_INPUT
    assert "bad.csv:2" in capsys.readouterr().err


def test_algorithm_failure_exit_code(tmp_path, capsys):
    code = main(["run", *fixture_args(tmp_path), "--variant", "primary", "--algorithm", "louvain",
                 "--min-edge-weight", "1e9"])
    assert code == EXIT_ALGORITHM
    assert "algorithm failure" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(f"input = {fixture_path('reviews.csv')}\nvariant = primary\nalgorithm = fastgreedy\n"
                   f"seed = 1\nout = {tmp_path / 'from-config'}\n")
    assert main(["run", "--config", str(cfg), "--algorithm", "louvain", "--out", str(tmp_path / "flag")]) == EXIT_OK
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert [r.split(",")[0] for r in rows] == ["louvain"]
    assert (tmp_path / "flag" / "primary" / "louvain").is_dir()
    assert not (tmp_path / "from-config").exists()


def test_bad_choice_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--algorithm", "infomap"])
    assert exc.value.code == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "copref.cli", "score", "--graphml", str(tmp_path / "x.graphml")],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_INPUT
