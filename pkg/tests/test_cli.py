import json

import pytest

from chnls.cli import EXIT_OK, EXIT_USAGE, main
from chnls.presets import get_preset, preset_names


def quick_config(out_dir):
    return {
        "grid": {"half_length": 600.0, "n_points": 1024},
        "model": {"a": 0.5, "sigma": -1, "u0": 1.0},
        "dt": 0.1,
        "t_end": 1.0,
        "cadence": 1.0,
        "experiment": {
            "kind": "SingleSoliton",
            "soliton": {"epsilon": 0.04, "beta": 0.1, "x0": 100.0},
        },
        "envelope": {"l_star": 400.0, "gamma": 34},
        "output_dir": str(out_dir),
    }


class TestRunCommand:
    def test_missing_config_file(self, capsys):
        assert main(["run", "no_such_file.json"]) == EXIT_USAGE
        assert "cannot read config" in capsys.readouterr().err

    def test_config_and_preset_are_exclusive(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(quick_config(tmp_path / "out")))
        assert main(["run", str(cfg), "--preset", "fig1b"]) == EXIT_USAGE
        assert main(["run"]) == EXIT_USAGE

    def test_unknown_preset(self, capsys):
        assert main(["run", "--preset", "nope"]) == EXIT_USAGE

    def test_invalid_json(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text("{not json")
        assert main(["run", str(cfg)]) == EXIT_USAGE
        assert "not valid JSON" in capsys.readouterr().err

    def test_bad_override_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(quick_config(tmp_path / "out")))
        assert main(["run", str(cfg), "--set", "nonsense=1"]) == EXIT_USAGE
        assert main(["run", str(cfg), "--set", "dt"]) == EXIT_USAGE

    def test_dump_config_applies_overrides(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(quick_config(tmp_path / "out")))
        code = main(["run", str(cfg), "--set", "dt=0.05", "--dump-config"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["dt"] == 0.05

    def test_bare_key_override_resolves_unique_path(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(quick_config(tmp_path / "out")))
        code = main(["run", str(cfg), "--set", "epsilon=0.01", "--dump-config"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["experiment"]["soliton"]["epsilon"] == 0.01

    def test_full_run_and_redump_round_trip(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        cfg.write_text(json.dumps(quick_config(out1)))
        assert main(["run", str(cfg), "--quiet"]) == EXIT_OK
        assert (out1 / "manifest.json").exists()

        # Re-run from the manifest's config echo: bit-identical series.csv.
        echoed = json.loads((out1 / "manifest.json").read_text())["config"]
        echoed["output_dir"] = str(out2)
        cfg2 = tmp_path / "c2.json"
        cfg2.write_text(json.dumps(echoed))
        assert main(["run", str(cfg2), "--quiet"]) == EXIT_OK
        assert (out1 / "series.csv").read_bytes() == (out2 / "series.csv").read_bytes()

    def test_prints_manifest_path(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(quick_config(tmp_path / "out")))
        assert main(["run", str(cfg)]) == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("manifest.json")


class TestInfoCommand:
    def test_antidark_summary(self, capsys):
        assert main(["info", "--a", "0.5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "C = 2" in out
        assert "q = -1" in out
        assert "antidark" in out

    def test_dark_summary(self, capsys):
        assert main(["info", "--a", "0.8"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "7.35714" in out
        assert "dark" in out

    def test_singular_point_reported(self, capsys):
        a = (2.0**0.5) / 2.0  # p = a^2 C^2 = 2 exactly at u0 = 1
        assert main(["info", "--a", repr(a)]) == EXIT_OK
        assert "singular" in capsys.readouterr().out

    def test_velocity_block(self, capsys):
        assert main(["info", "--a", "0.5", "--epsilon", "0.04", "--beta", "0.1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "predicted velocity = 1.999" in out
        assert "density deviation = +0.001" in out

    def test_focusing_prints_mi_band(self, capsys):
        assert main(["info", "--a", "0.5", "--sigma", "1"]) == EXIT_OK
        assert "MI band: 0 < k < 2" in capsys.readouterr().out


class TestListPresets:
    def test_all_presets_listed(self, capsys):
        assert main(["list-presets"]) == EXIT_OK
        out = capsys.readouterr().out
        assert len(preset_names()) >= 10
        for name in preset_names():
            assert name in out

    def test_porcelain_is_tab_separated(self, capsys):
        assert main(["list-presets", "--porcelain"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == len(preset_names())
        assert all("\t" in line for line in lines)


def test_every_preset_config_validates():
    for name in preset_names():
        cfg = get_preset(name)
        assert cfg.experiment["kind"] in (
            "SingleSoliton", "ErrorScan", "Collision", "MiTest", "KdvBenchmark"
        ), name
