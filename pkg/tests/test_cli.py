import json
import shutil

import pytest

from ifs_spectra.cli import main

REFERENCE_CONFIG = {
    "R": [[4, 0], [1, 4]],
    "B": [[0, 0], [0, 3], [1, 0], [1, 3]],
    "L": [[0, 0], [2, 0], [0, 2], [2, 2]],
    "horizon": 3,
    "paths": 500,
    "seed": 7,
    "image_width": 64,
    "image_height": 64,
    "image_points": 20000,
}


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(REFERENCE_CONFIG))
    return str(path)


def run(argv):
    return main(argv)


class TestValidateCommand:
    def test_reference_passes(self, config_path, tmp_path):
        assert run(["validate", "--config", config_path, "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "validate.json").read_text())
        assert report["passed"] is True
        assert report["expansive"] is True
        assert report["unitarity_residual"] < 1e-10
        assert report["quadrature_deviation"] < 1e-12

    def test_non_hadamard_exits_1(self, tmp_path):
        cfg = dict(REFERENCE_CONFIG, R=[[3]], B=[[0], [2]], L=[[0], [1]])
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(cfg))
        assert run(["validate", "--config", str(path), "--out", str(tmp_path)]) == 1
        report = json.loads((tmp_path / "validate.json").read_text())
        assert report["hadamard"] is False
        assert report["witness_pair"] is not None

    def test_malformed_json_exits_2(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        assert run(["validate", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_missing_config_exits_2(self, tmp_path):
        missing = str(tmp_path / "nope.json")
        assert run(["validate", "--config", missing, "--out", str(tmp_path)]) == 2

    def test_unknown_key_exits_2(self, tmp_path):
        path = tmp_path / "extra.json"
        path.write_text(json.dumps(dict(REFERENCE_CONFIG, typo_key=1)))
        assert run(["validate", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_effective_config_echoed(self, config_path, tmp_path):
        run(["validate", "--config", config_path, "--out", str(tmp_path)])
        report = json.loads((tmp_path / "validate.json").read_text())
        eff = report["effective_config"]
        assert eff["R"] == REFERENCE_CONFIG["R"]
        assert eff["horizon"] == 3
        assert eff["seed"] == 7


class TestCyclesCommand:
    def test_catalog_artifact(self, config_path, tmp_path):
        assert run(["cycles", "--config", config_path, "--out", str(tmp_path)]) == 0
        catalog = json.loads((tmp_path / "catalog.json").read_text())
        assert len(catalog["cycles"]) == 1
        assert catalog["cycles"][0]["points"] == [["0", "0"]]
        assert len(catalog["line_sets"]) == 1
        assert catalog["line_sets"][0]["offsets"] == [["0", "2/3"]]
        assert len(catalog["rejected"]) == 1
        assert catalog["disjoint"] is True


class TestSpectrumCommand:
    def test_artifacts(self, config_path, tmp_path):
        assert run(["spectrum", "--config", config_path, "--out", str(tmp_path)]) == 0
        spec = json.loads((tmp_path / "spectrum.json").read_text())
        assert spec["count"] == 128
        csv_lines = (tmp_path / "spectrum.csv").read_text().strip().splitlines()
        assert len(csv_lines) == 129
        summary = json.loads((tmp_path / "spectrum_summary.json").read_text())
        assert summary["direct_count"] == 128
        assert summary["product_count"] == 128
        assert summary["spectra_differ"] is True
        assert (tmp_path / "spectrum_product.json").exists()


class TestVerifyCommand:
    def test_passes_and_reports(self, tmp_path):
        cfg = dict(REFERENCE_CONFIG, horizon=5, paths=2000)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert run(["verify", "--config", str(path), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "verify.json").read_text())
        assert report["passed"] is True
        names = {c["name"] for c in report["checks"]}
        assert {"orthogonality[direct]", "parseval[direct]",
                "orthogonality[product]", "parseval[product]",
                "path_partition"} == names

    def test_seed_override(self, config_path, tmp_path):
        run(["verify", "--config", config_path, "--out", str(tmp_path), "--seed", "99"])
        report = json.loads((tmp_path / "verify.json").read_text())
        assert report["seed"] == 99


class TestRenderCommand:
    def test_ppm_header_and_size(self, config_path, tmp_path):
        assert run(["render", "--config", config_path, "--out", str(tmp_path)]) == 0
        data = (tmp_path / "attractor_xb.ppm").read_bytes()
        assert data.startswith(b"P6\n64 64\n255\n")
        assert len(data) == len(b"P6\n64 64\n255\n") + 64 * 64 * 3

    def test_dual_attractor(self, config_path, tmp_path):
        assert run(
            ["render", "--config", config_path, "--out", str(tmp_path), "--which", "XL"]
        ) == 0
        assert (tmp_path / "attractor_xl.ppm").exists()

    def test_image_not_blank(self, config_path, tmp_path):
        run(["render", "--config", config_path, "--out", str(tmp_path)])
        body = (tmp_path / "attractor_xb.ppm").read_bytes()[13:]
        assert len(set(body)) > 1


class TestSimulateCommand:
    def test_partition_artifact(self, config_path, tmp_path):
        assert run(
            ["simulate", "--config", config_path, "--out", str(tmp_path),
             "--start", "0.3", "0.4"]
        ) == 0
        sim = json.loads((tmp_path / "simulate.json").read_text())
        assert sim["start"] == [0.3, 0.4]
        assert sim["components"] == ["cycle_0", "line_0"]
        assert sum(sim["h"]) + sim["unclassified"] == pytest.approx(1.0)

    def test_bad_start_dimension_exits_2(self, config_path, tmp_path):
        assert run(
            ["simulate", "--config", config_path, "--out", str(tmp_path),
             "--start", "0.3"]
        ) == 2


class TestDeterminism:
    def test_same_seed_same_bytes(self, config_path, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            run(["render", "--config", config_path, "--out", str(out)])
            run(["simulate", "--config", config_path, "--out", str(out),
                 "--start", "0.1", "0.2"])
        assert (out1 / "attractor_xb.ppm").read_bytes() == (out2 / "attractor_xb.ppm").read_bytes()
        assert (out1 / "simulate.json").read_bytes() == (out2 / "simulate.json").read_bytes()


class TestShippedConfigs:
    def test_example_configs_validate(self, tmp_path):
        from pathlib import Path

        configs = Path(__file__).resolve().parents[1] / "configs"
        for name in ("example2d.json", "cantor1d.json"):
            dest = tmp_path / name
            shutil.copy(configs / name, dest)
            assert run(["validate", "--config", str(dest), "--out", str(tmp_path)]) == 0
