"""Writers: byte stability, layouts, image smoke checks."""

import json
import math

import numpy as np
import pytest

from metaclad import report
from metaclad.scene import Scene
from metaclad.sweep import EnhancementKernel, SweepSpec, find_maxima, sweep


@pytest.fixture(scope="module")
def tiny_grid():
    spec = SweepSpec(re_min=-1.0, re_max=1.0, re_points=3,
                     im_min=0.0, im_max=1.0, im_points=2)
    kernel = EnhancementKernel(kappa=np.array([0.5 + 0.1j]),
                               weights=np.array([1.0]))
    return sweep(Scene(), spec, kernel=kernel)


class TestFloatFormat:
    def test_round_trip(self):
        for value in (1.0 / 3.0, 1e-17, -0.0, 2.5, 171949.1909410108,
                      math.pi, float("inf")):
            assert float(report.fmt(value)) == value or (
                math.isinf(value) and math.isinf(float(report.fmt(value))))

    def test_shortest_repr(self):
        assert report.fmt(0.5) == "0.5"
        assert report.fmt(-12.0) == "-12.0"


class TestDelimited:
    def test_sweep_layout(self, tiny_grid):
        lines = report.sweep_csv(tiny_grid).splitlines()
        assert lines[0] == "re_y,im_y,enhancement"
        assert len(lines) == 1 + 6
        # inner loop walks Re[y], outer loop Im[y]
        assert lines[1].startswith("-1.0,0.0,")
        assert lines[2].startswith("0.0,0.0,")
        assert lines[4].startswith("-1.0,1.0,")

    def test_sweep_values_round_trip(self, tiny_grid):
        body = report.sweep_csv(tiny_grid).splitlines()[1:]
        parsed = np.array([[float(v) for v in line.split(",")] for line in body])
        assert np.array_equal(parsed[:, 2], tiny_grid.values.ravel())

    def test_matrix_layout(self):
        x = np.array([0.0, 0.5])
        y = np.array([-1.0, 0.0, 1.0])
        values = np.arange(6.0).reshape(3, 2)
        lines = report.matrix_csv(x, y, values).splitlines()
        assert lines[0] == "y\\x,0.0,0.5"
        assert lines[1] == "-1.0,0.0,1.0"
        assert lines[3] == "1.0,4.0,5.0"

    def test_matrix_nan_cells(self):
        text = report.matrix_csv([0.0], [0.0], np.array([[np.nan]]))
        assert text.splitlines()[1] == "0.0,nan"

    def test_resonances_layout(self, tiny_grid):
        rows = find_maxima(tiny_grid, k=1)
        text = report.resonances_csv(rows)
        lines = text.splitlines()
        assert lines[0] == ("re_y,im_y,enhancement,dominant_order,"
                            "loss_class,reactive_class")
        assert len(lines) == 1 + len(rows)

    def test_curve_and_pattern(self):
        curve = report.curve_csv([0.0, 10.0], [0.1, 1.0]).splitlines()
        assert curve == ["gain_ratio_db,max_distance_ratio",
                        "0.0,0.1", "10.0,1.0"]

        class Pattern:
            angles = np.array([0.0, 1.0])
            gains = np.array([2.0, 3.0])

        pattern = report.pattern_csv(Pattern()).splitlines()
        assert pattern == ["angle_rad,gain", "0.0,2.0", "1.0,3.0"]

    def test_byte_determinism(self, tiny_grid):
        assert report.sweep_csv(tiny_grid) == report.sweep_csv(tiny_grid)


class TestPGM:
    def test_header_and_scaling(self):
        values = np.array([[-80.0, 0.0], [-40.0, np.nan]])
        lines = report.pgm_text(values).splitlines()
        assert lines[:3] == ["P2", "2 2", "255"]
        # top raster row is the largest-y data row
        assert lines[3].split() == ["128", "0"]
        assert lines[4].split() == ["0", "255"]

    def test_clipping(self):
        lines = report.pgm_text(np.array([[-200.0, 50.0]])).splitlines()
        assert lines[3].split() == ["0", "255"]

    def test_line_length_bound(self):
        text = report.pgm_text(np.zeros((3, 100)) - 10.0)
        assert max(len(line) for line in text.splitlines()) <= 70

    def test_validation(self):
        with pytest.raises(ValueError):
            report.pgm_text(np.zeros(4))
        with pytest.raises(ValueError):
            report.pgm_text(np.zeros((2, 2)), floor=0.0, ceil=0.0)


class TestFiles:
    def test_write_text_newlines(self, tmp_path):
        path = tmp_path / "t.csv"
        report.write_text(path, "a,b\n1,2\n")
        assert path.read_bytes() == b"a,b\n1,2\n"

    def test_write_json_sorted(self, tmp_path):
        path = tmp_path / "t.json"
        report.write_json(path, {"b": 1, "a": [1.5, None]})
        text = path.read_text(encoding="utf-8")
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")
        assert json.loads(text) == {"b": 1, "a": [1.5, None]}


class TestRender:
    def test_images_written(self, tmp_path):
        x = np.linspace(0.0, 1.0, 8)
        y = np.linspace(0.0, 2.0, 6)
        grid = np.outer(np.sin(y) + 1.5, x + 0.5)
        report.render_heatmap(tmp_path / "h.png", x, y, grid, "x", "y", "v")
        report.render_curve(tmp_path / "c.png", x, x + 1.0, "x", "y", logy=True)
        report.render_polar(tmp_path / "p.png",
                            np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False),
                            np.ones(16))
        report.render_bars(tmp_path / "b.png", [0, 1], [1.0, 2.0], "w")
        for name in ("h.png", "c.png", "p.png", "b.png"):
            data = (tmp_path / name).read_bytes()
            assert data[:8] == b"\x89PNG\r\n\x1a\n"
            assert len(data) > 1000
