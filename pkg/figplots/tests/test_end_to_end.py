"""End-to-end: drive the installed simulator CLI, then render its output.

Exercises only the public interfaces: the `floqhop` console script writes
CSVs + manifest, `floqplot` consumes them from disk.
"""

import json
import shutil
import subprocess

import numpy as np
import pytest

from conftest import write_csv
from floqplot.cli import main

needs_floqhop = pytest.mark.skipif(
    shutil.which("floqhop") is None, reason="floqhop CLI not installed"
)


@pytest.fixture(scope="module")
def fast_fig2(tmp_path_factory):
    root = tmp_path_factory.mktemp("runs")
    proc = subprocess.run(
        [
            "floqhop", "figure", "--preset", "fig2",
            "--out-dir", str(root), "--methods", "FQME,FaQME", "--fast",
        ],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    return root


@needs_floqhop
def test_plot_preset_renders_simulator_output(fast_fig2, capsys):
    rc = main(["plot", "--preset", "fig2", "--dir", str(fast_fig2)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "fig2.png" in out and "fig2.svg" in out
    fig_dir = fast_fig2 / "fig2"
    assert (fig_dir / "fig2.png").stat().st_size > 1000
    assert (fig_dir / "fig2.svg").stat().st_size > 1000
    manifest = json.loads((fig_dir / "manifest.json").read_text())
    assert manifest["fast"] is True


@needs_floqhop
def test_check_rejects_incomplete_fast_dataset(fast_fig2, capsys):
    # only two of five methods present: checks must refuse, not pass
    rc = main(["check", "--preset", "fig2", "--dir", str(fast_fig2)])
    assert rc == 2
    assert "missing runs" in capsys.readouterr().err


def test_plot_spec_route(tmp_path, capsys):
    t = np.arange(0.0, 10.0, 0.1)
    write_csv(tmp_path / "a.csv", t, 0.5 + 0.2 * np.sin(t), pop_err=0.01)
    spec = {
        "output": "img/panel",
        "panels": [
            {"column": "pop", "curves": [{"csv": "a.csv", "label": "demo"}]},
        ],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    rc = main(["plot", "--spec", str(path)])
    assert rc == 0
    assert (tmp_path / "img" / "panel.png").exists()
    assert (tmp_path / "img" / "panel.svg").exists()


def test_cli_schema_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n")
    spec = {
        "output": "x",
        "panels": [{"column": "pop", "curves": [{"csv": "bad.csv", "label": "B"}]}],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    rc = main(["plot", "--spec", str(path)])
    assert rc == 2
    assert "floqplot: schema error:" in capsys.readouterr().err


def test_cli_check_failure_exit_code(tmp_path, capsys):
    # a complete fig2 dataset with one blatant outlier → exit 1, FAIL lines
    t = np.arange(0.0, 400.0 + 1e-9, 0.2)
    from conftest import preset_dataset

    groups = {
        "": {
            "FQME": dict(t=t, pop=np.full(len(t), 0.88)),
            "FaQME": dict(t=t, pop=np.full(len(t), 0.88)),
            "FSH": dict(t=t, pop=np.full(len(t), 0.95), pop_err=0.003),
            "FaSH": dict(t=t, pop=np.full(len(t), 0.881), pop_err=0.003),
            "FaSH-density": dict(t=t, pop=np.full(len(t), 0.879), pop_err=0.002),
        }
    }
    preset_dataset(tmp_path, "fig2", groups)
    rc = main(["check", "--preset", "fig2", "--dir", str(tmp_path)])
    assert rc == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "checks passed" in out


def test_cli_empty_csv_warning_exit_zero(tmp_path, capsys):
    from conftest import HEADER

    empty = tmp_path / "empty.csv"
    empty.write_text(HEADER + "\n")
    spec = {
        "output": "img",
        "panels": [{"column": "pop", "curves": [{"csv": "empty.csv", "label": "E"}]}],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    rc = main(["plot", "--spec", str(path)])
    captured = capsys.readouterr()
    assert rc == 0
    assert "floqplot: warning:" in captured.err
    assert (tmp_path / "img.png").exists()
