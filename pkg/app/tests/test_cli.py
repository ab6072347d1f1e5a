"""
Command-line tests.

This module contains tests for the subcommands of the command-line interface.
"""
import json

import numpy as np
from sqlalchemy.orm import Session

from app import cli
from app.database import make_engine
from app.exceptions import GuaranteeError
from app.models.experiment import ExperimentRun
from app.services import storage


def test_cross(capsys, tmp_path):
    out = tmp_path / "cross.csv"
    assert cli.main(["cross", "--dim", "2", "--radius", "20", "--out", str(out)]) == 0
    assert "m=107 M=2000" in capsys.readouterr().out
    rows = np.loadtxt(out, delimiter=",", skiprows=1, ndmin=2)
    assert rows.shape == (107, 2)


def test_cross_lists_members(capsys):
    assert cli.main(["cross", "--dim", "2", "--radius", "1", "--list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1:] == ["0,0", "0,1", "1,0", "1,1"]


def test_sample_subsample_recover(capsys, tmp_path):
    nodes = tmp_path / "nodes.csv"
    selected = tmp_path / "selected.csv"
    result = tmp_path / "result.json"
    assert cli.main(["sample", "--dim", "2", "--count", "193", "--seed", "5", "--out", str(nodes)]) == 0
    written = storage.read_nodes(nodes)
    assert (written.count, written.d, written.seed) == (193, 2, 5)

    capsys.readouterr()
    assert cli.main(
        ["subsample", "--nodes", str(nodes), "--dim", "2", "--radius", "4", "--out", str(selected)]
    ) == 0
    summary = json.loads(capsys.readouterr().out)
    assert (summary["m"], summary["M"], summary["n"]) == (17, 193, 19)
    assert storage.read_nodes(selected).count == 19
    meta = (tmp_path / "selected.csv.meta.jsonl").read_text().splitlines()
    assert len(meta) == 1 and len(json.loads(meta[0])["indices"]) == 19

    assert cli.main(
        ["recover", "--nodes", str(selected), "--dim", "2", "--radius", "4", "--out", str(result), "--coefficients"]
    ) == 0
    report = json.loads(result.read_text())
    assert report["error_method"] == "parseval"
    assert report["m"] == 17 and len(report["coefficients"]) == 17
    assert 0.0 < report["error"] < 1.0

    assert cli.main(
        [
            "recover", "--nodes", str(nodes), "--dim", "2", "--radius", "4", "--out", str(result),
            "--error", "mc", "--mc-points", "2000",
        ]
    ) == 0
    report = json.loads(result.read_text())
    assert report["error_method"] == "mc" and report["mc_points"] == 2000


def test_subsample_guarantee_failure(monkeypatch, tmp_path):
    nodes = tmp_path / "nodes.csv"
    cli.main(["sample", "--dim", "1", "--count", "40", "--seed", "1", "--out", str(nodes)])

    def reject(result):
        raise GuaranteeError("rejected", margin=-1.0, tolerance=0.0)

    monkeypatch.setattr(cli, "require_guarantee", reject)
    code = cli.main(["subsample", "--nodes", str(nodes), "--dim", "1", "--radius", "3", "--out", str(tmp_path / "s.csv")])
    assert code == 1


def test_invalid_arguments_exit_with_two(tmp_path):
    assert cli.main(["cross", "--dim", "0", "--radius", "5"]) == 2
    nodes = tmp_path / "nodes.csv"
    cli.main(["sample", "--dim", "2", "--count", "100", "--seed", "1", "--out", str(nodes)])
    code = cli.main(
        ["subsample", "--nodes", str(nodes), "--dim", "2", "--radius", "4", "--b", "1.01", "--out", str(tmp_path / "s.csv")]
    )
    assert code == 2
    assert cli.main(["recover", "--nodes", str(tmp_path / "missing.csv"), "--dim", "2", "--radius", "4",
                     "--out", str(tmp_path / "r.json")]) == 2


def test_coeffs(capsys):
    assert cli.main(["coeffs", "--basis", "cheb", "--kmax", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,coefficient"
    assert lines[1] == "0,0.46875"
    assert len(lines) == 6


def test_sweep_and_rate(capsys, tmp_path):
    records = tmp_path / "records.csv"
    code = cli.main(
        ["cheb-sweep", "--dim", "2", "--radii", "4,6,8,10", "--repeats", "1", "--seed", "3", "--out", str(records)]
    )
    assert code == 0
    rows = storage.read_records(records)
    assert [row.R for row in rows] == [4, 6, 8, 10]
    capsys.readouterr()
    assert cli.main(["rate", "--in", str(records)]) == 0
    assert "fitted slope" in capsys.readouterr().out


def test_frame_bound_demo_is_stored(capsys, tmp_path):
    url = f"sqlite:///{tmp_path / 'runs.db'}"
    out = tmp_path / "frame_bounds.csv"
    nodes_dir = tmp_path / "nodes"
    assert cli.main(["frame-bounds", "--radius", "4", "--out", str(out), "--db", url, "--nodes-dir", str(nodes_dir)]) == 0
    assert "cheb: m=17" in capsys.readouterr().out
    assert len(storage.read_records(out)) == 2
    assert storage.read_nodes(nodes_dir / "hpc_selected.csv").measure.value == "uniform"
    with Session(make_engine(url)) as db:
        runs = ExperimentRun.get_all(db, kind="frame_bounds")
        assert len(runs) == 2
        assert len(runs[0].selected) == runs[0].n


def test_numbered_experiment_aliases(capsys, tmp_path):
    records = tmp_path / "records.csv"
    code = cli.main(["fig3", "--dim", "2", "--radii", "4,6", "--repeats", "1", "--seed", "3", "--out", str(records)])
    assert code == 0
    rows = storage.read_records(records)
    assert [row.R for row in rows] == [4, 6]
    assert all(row.basis.value == "cheb" for row in rows)

    cosine = tmp_path / "cosine.csv"
    assert cli.main(["fig4", "--dim", "2", "--radii", "4", "--repeats", "1", "--out", str(cosine)]) == 0
    assert storage.read_records(cosine)[0].basis.value == "hpc"

    assert cli.main(["fig2", "--radius", "4", "--out", str(tmp_path / "bounds.csv")]) == 0
    assert "cheb: m=17" in capsys.readouterr().out


def test_rate_rejects_mixed_series(tmp_path):
    cheb = tmp_path / "cheb.csv"
    cosine = tmp_path / "cosine.csv"
    cli.main(["cheb-sweep", "--dim", "2", "--radii", "4,6", "--repeats", "1", "--out", str(cheb)])
    cli.main(["cosine-sweep", "--dim", "2", "--radii", "4,6", "--repeats", "1", "--out", str(cosine)])
    mixed = tmp_path / "mixed.csv"
    storage.write_records(mixed, storage.read_records(cheb) + storage.read_records(cosine))
    assert cli.main(["rate", "--in", str(mixed)]) == 2
