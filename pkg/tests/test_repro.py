import csv

import numpy as np
import pytest

from po_orders.errors import CatalogError
from po_orders.repro import crossing_points, evaluate_figure, figures, get_figure, repro_figure

FIGURE_IDS = ["F1", "F2a", "F2b", "F3a", "F3b", "F4a", "F4b"]


def test_catalog():
    assert list(figures()) == FIGURE_IDS
    with pytest.raises(CatalogError):
        get_figure("F9")


@pytest.mark.parametrize("figure_id", FIGURE_IDS)
def test_curves_cross(figure_id):
    result = evaluate_figure(get_figure(figure_id))
    assert result.crossings
    assert np.all(np.isfinite(result.curve_x)) and np.all(np.isfinite(result.curve_y))
    assert all(result.t[0] <= c <= result.t[-1] for c in result.crossings)


def test_crossing_points():
    t = np.array([0.0, 1.0, 2.0])
    assert crossing_points(t, np.array([1.0, -1.0, 1.0]), np.zeros(3)) == [0.5, 1.5]
    assert crossing_points(t, np.array([1.0, 0.0, -1.0]), np.zeros(3)) == [1.0]
    assert crossing_points(t, np.array([1.0, 0.0, 2.0]), np.zeros(3)) == []


def test_files_are_written(tmp_path):
    result = repro_figure("F2a", tmp_path)
    assert result.files == [str(tmp_path / "F2a.csv"), str(tmp_path / "F2a.svg")]
    with (tmp_path / "F2a.csv").open(newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "curve_X", "curve_Y"]
    assert len(rows) == result.to_dict()["rows"] + 1
    assert (tmp_path / "F2a.svg").read_text(encoding="utf-8").lstrip().startswith("<?xml")


def test_csv_is_stable_across_runs(tmp_path):
    repro_figure("F1", tmp_path / "a")
    repro_figure("F1", tmp_path / "b")
    assert (tmp_path / "a" / "F1.csv").read_bytes() == (tmp_path / "b" / "F1.csv").read_bytes()


def test_without_out_dir_nothing_is_written(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    result = repro_figure("F4a")
    assert result.files == [] and not any(tmp_path.iterdir())
    data = result.to_dict()
    assert data["crossing_count"] == len(data["crossings"]) >= 1
