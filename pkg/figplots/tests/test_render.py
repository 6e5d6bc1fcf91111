import numpy as np
import pytest

from conftest import HEADER, write_csv
from floqplot.csvio import SchemaError
from floqplot.render import plot_compare
from floqplot.spec import CurveSpec, PanelSpec, PlotSpec


def two_curve_spec(tmp_path, stem="fig", second_grid=None, second_err=0.0):
    t = np.arange(0.0, 20.0, 0.1)
    a = write_csv(tmp_path / "a.csv", t, 0.5 + 0.1 * np.sin(t), ekin=0.5)
    t2 = t if second_grid is None else second_grid
    b = write_csv(tmp_path / "b.csv", t2, np.full(len(t2), 0.6), pop_err=second_err, ekin=0.55)
    panels = tuple(
        PanelSpec(
            column=col,
            ylabel=col,
            curves=(CurveSpec(a, "A", "C0:solid"), CurveSpec(b, "B", "C1:dashed")),
        )
        for col in ("pop", "ekin")
    )
    return PlotSpec(output=str(tmp_path / stem), panels=panels, title="demo", drive_period=2 * np.pi)


def test_writes_png_and_svg(tmp_path):
    files, warnings = plot_compare(two_curve_spec(tmp_path))
    assert [f.rsplit(".", 1)[1] for f in files] == ["png", "svg"]
    for f in files:
        with open(f, "rb") as fh:
            assert len(fh.read()) > 1000
    assert warnings == []


def test_identical_inputs_give_identical_bytes(tmp_path):
    first, _ = plot_compare(two_curve_spec(tmp_path, stem="one"))
    second, _ = plot_compare(two_curve_spec(tmp_path, stem="two"))
    for f1, f2 in zip(first, second):
        b1 = open(f1, "rb").read()
        b2 = open(f2, "rb").read()
        assert b1 == b2, f"{f1} differs from {f2}"


def test_error_bands_and_mixed_grids(tmp_path):
    # coarser second grid and nonzero errors exercise the band + dagger paths
    spec = two_curve_spec(tmp_path, second_grid=np.arange(0.0, 20.0, 0.25), second_err=0.02)
    files, warnings = plot_compare(spec)
    assert len(files) == 2
    assert warnings == []


def test_empty_csv_warns_but_succeeds(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(HEADER + "\n")
    spec = PlotSpec(
        output=str(tmp_path / "fig"),
        panels=(PanelSpec("pop", "population", (CurveSpec(str(empty), "E"),)),),
    )
    files, warnings = plot_compare(spec)
    assert len(files) == 2
    assert len(warnings) == 1 and "empty" in warnings[0]


def test_schema_errors_collected_across_files(tmp_path):
    bad1 = tmp_path / "bad1.csv"
    bad1.write_text("wrong\n")
    bad2 = tmp_path / "bad2.csv"
    bad2.write_text(HEADER + "\n0,0.5,0\n")
    spec = PlotSpec(
        output=str(tmp_path / "fig"),
        panels=(
            PanelSpec("pop", "p", (CurveSpec(str(bad1), "1"), CurveSpec(str(bad2), "2"))),
        ),
    )
    with pytest.raises(SchemaError) as exc:
        plot_compare(spec)
    text = "\n".join(exc.value.messages)
    assert "bad1.csv" in text and "bad2.csv" in text


def test_output_directory_created(tmp_path):
    spec = two_curve_spec(tmp_path)
    nested = PlotSpec(
        output=str(tmp_path / "deep" / "dir" / "fig"),
        panels=spec.panels,
    )
    files, _ = plot_compare(nested)
    for f in files:
        assert (tmp_path / "deep" / "dir").exists()
