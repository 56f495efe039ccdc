import json

import numpy as np
import pytest

from chnls.etdrk4 import Trajectory
from chnls.grid import make_grid
from chnls.harness import (
    SERIES_COLUMNS,
    ConfigError,
    RunConfig,
    fit_mi_rate,
    l2_spacetime_error,
    run_experiment,
    track_extremum,
    write_series,
)


def small_single_config(out_dir, **overrides):
    doc = {
        "grid": {"half_length": 600.0, "n_points": 2048},
        "model": {"a": 0.5, "sigma": -1, "u0": 1.0},
        "dt": 0.05,
        "t_end": 2.0,
        "cadence": 1.0,
        "experiment": {
            "kind": "SingleSoliton",
            "soliton": {"epsilon": 0.04, "beta": 0.1, "x0": 100.0},
        },
        "envelope": {"l_star": 360.0, "gamma": 34},
        "output_dir": str(out_dir),
    }
    doc.update(overrides)
    return doc


class TestRunConfig:
    def test_round_trip(self, tmp_path):
        doc = small_single_config(tmp_path / "run")
        cfg = RunConfig.from_dict(doc)
        assert cfg.to_dict() == {**doc, "dealias": True}

    def test_unknown_key_rejected(self, tmp_path):
        doc = small_single_config(tmp_path / "run")
        doc["bogus"] = 1
        with pytest.raises(ConfigError, match="unknown config keys"):
            RunConfig.from_dict(doc)

    def test_missing_key_rejected(self, tmp_path):
        doc = small_single_config(tmp_path / "run")
        del doc["dt"]
        with pytest.raises(ConfigError, match="missing config keys"):
            RunConfig.from_dict(doc)

    def test_cadence_must_be_multiple_of_dt(self, tmp_path):
        doc = small_single_config(tmp_path / "run", dt=0.3)
        with pytest.raises(ConfigError, match="cadence"):
            RunConfig.from_dict(doc)

    def test_unknown_experiment_kind(self, tmp_path):
        doc = small_single_config(tmp_path / "run")
        doc["experiment"] = {"kind": "Nope"}
        with pytest.raises(ConfigError, match="experiment kind"):
            RunConfig.from_dict(doc)

    def test_bad_soliton_rejected_eagerly(self, tmp_path):
        doc = small_single_config(tmp_path / "run")
        doc["experiment"]["soliton"]["epsilon"] = -1.0
        with pytest.raises(ConfigError, match="soliton"):
            RunConfig.from_dict(doc)

    def test_envelope_must_fit_inside_grid(self, tmp_path):
        doc = small_single_config(tmp_path / "run")
        doc["envelope"]["l_star"] = 600.0
        with pytest.raises(ConfigError, match="l_star"):
            RunConfig.from_dict(doc)

    def test_json_loading(self, tmp_path):
        doc = small_single_config(tmp_path / "run")
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(doc))
        cfg = RunConfig.from_json(path)
        assert cfg.t_end == 2.0


class TestTrackExtremum:
    def test_parabolic_max_subgrid_position(self):
        grid = make_grid(50.0, 512)
        true_pos = 10.03
        density = 1.0 + np.exp(-((grid.x - true_pos) ** 2) / 8.0)
        pos, amp = track_extremum(density, grid, "max", 10.0, 5.0)
        assert pos == pytest.approx(true_pos, abs=1e-3)
        assert amp == pytest.approx(density.max(), abs=1e-6)

    def test_min_tracking(self):
        grid = make_grid(50.0, 512)
        density = 1.0 - 0.5 * np.exp(-((grid.x + 7.0) ** 2) / 4.0)
        pos, _ = track_extremum(density, grid, "min", -7.0, 5.0)
        assert pos == pytest.approx(-7.0, abs=1e-3)

    def test_periodic_window_wraps(self):
        grid = make_grid(50.0, 512)
        density = 1.0 + np.exp(-((np.abs(grid.x) - 50.0) ** 2))
        pos, _ = track_extremum(density, grid, "max", 50.0, 3.0)
        assert abs(abs(pos) - 50.0) < 0.5


class TestL2Error:
    def _flat_trajectory(self, value, times):
        grid = make_grid(400.0, 1024)
        traj = Trajectory(grid=grid)
        for t in times:
            traj.append(t, np.full(1024, value, dtype=complex))
        return grid, traj

    def test_zero_when_reference_matches(self):
        _, traj = self._flat_trajectory(1.0, [0.0, 1.0, 2.0])
        err = l2_spacetime_error(
            traj, lambda x, t: np.ones_like(x, dtype=complex),
            x_window=(-300, 300), t_window=(0, 2),
        )
        assert err == 0.0

    def test_constant_offset_comes_back_exactly(self):
        # RMS of a uniform offset is the offset itself.
        delta = 1e-3
        _, traj = self._flat_trajectory(1.0 + delta, [0.0, 1.0, 2.0, 3.0])
        err = l2_spacetime_error(
            traj, lambda x, t: np.ones_like(x, dtype=complex),
            x_window=(-300, 300), t_window=(0, 3),
        )
        assert err == pytest.approx(delta, rel=1e-12)

    def test_window_validation(self):
        _, traj = self._flat_trajectory(1.0, [0.0, 1.0])
        with pytest.raises(ValueError):
            l2_spacetime_error(traj, lambda x, t: x, x_window=(-900, 900))
        with pytest.raises(ValueError):
            l2_spacetime_error(traj, lambda x, t: x, t_window=(0.0, 50.0))


class TestFitMiRate:
    def test_recovers_pure_exponential(self):
        t = np.linspace(0, 20, 201)
        amps = 1e-9 * np.exp(1.3 * t)
        assert fit_mi_rate(t, amps) == pytest.approx(1.3, rel=1e-9)

    def test_stable_mode_returns_zero(self):
        t = np.linspace(0, 20, 201)
        amps = np.full_like(t, 1e-12)
        assert fit_mi_rate(t, amps) == 0.0


class TestWriteSeries:
    def test_header_and_nan_fill(self, tmp_path):
        write_series(tmp_path, [{"t": 1.0, "peak_amp_1": 2.0}])
        lines = (tmp_path / "series.csv").read_text().strip().split("\n")
        assert lines[0] == ",".join(SERIES_COLUMNS)
        cells = lines[1].split(",")
        assert cells[0] == "1"
        assert cells[2] == "2"
        assert cells[1] == "nan"


class TestRunSingleSoliton:
    def test_output_layout_and_series(self, tmp_path):
        out = tmp_path / "run"
        cfg = RunConfig.from_dict(small_single_config(out))
        manifest = run_experiment(cfg)
        assert (out / "manifest.json").exists()
        assert (out / "series.csv").exists()
        snaps = sorted((out / "snapshots").glob("t_*.csv"))
        diffs = sorted((out / "difference").glob("t_*.csv"))
        assert len(snaps) == 3  # t = 0, 1, 2
        assert len(diffs) == 3
        assert snaps[0].name == "t_000000.000.csv"
        assert manifest.status == "completed"
        doc = json.loads((out / "manifest.json").read_text())
        assert doc["status"] == "completed"
        assert doc["derived"]["soliton_class"] == "antidark"
        assert doc["derived"]["q"] == pytest.approx(-1.0)
        assert "series.csv" in doc["files"]
        header = (out / "snapshots" / snaps[0].name).read_text().split("\n")[0]
        assert header == "x,re_psi,im_psi,density"

    def test_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run_experiment(RunConfig.from_dict(small_single_config(out1)))
        run_experiment(RunConfig.from_dict(small_single_config(out2)))
        assert (out1 / "series.csv").read_bytes() == (out2 / "series.csv").read_bytes()


class TestRunMiTest:
    def test_measured_rate_recorded(self, tmp_path):
        out = tmp_path / "mi"
        cfg = RunConfig.from_dict({
            "grid": {"half_length": 8 * np.pi, "n_points": 256},
            "model": {"a": 0.5, "sigma": 1, "u0": 1.0},
            "dt": 0.005,
            "t_end": 8.0,
            "cadence": 0.25,
            "experiment": {"kind": "MiTest", "mode_k": 1.0, "seed_amplitude": 1e-8},
            "output_dir": str(out),
        })
        manifest = run_experiment(cfg)
        doc = json.loads((out / "manifest.json").read_text())
        assert (out / "mi.csv").exists()
        predicted = doc["derived"]["predicted_rate"]
        measured = doc["derived"]["measured_rate"]
        assert predicted == pytest.approx(np.sqrt(3.0) / 1.25, rel=1e-12)
        assert measured == pytest.approx(predicted, rel=0.05)

    def test_off_lattice_mode_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="lattice"):
            cfg = RunConfig.from_dict({
                "grid": {"half_length": 8 * np.pi, "n_points": 256},
                "model": {"a": 0.5, "sigma": 1, "u0": 1.0},
                "dt": 0.005,
                "t_end": 1.0,
                "cadence": 0.25,
                "experiment": {"kind": "MiTest", "mode_k": 1.05},
                "output_dir": str(tmp_path / "x"),
            })
            run_experiment(cfg)

    def test_large_seed_rejected(self, tmp_path):
        cfg = RunConfig.from_dict({
            "grid": {"half_length": 8 * np.pi, "n_points": 256},
            "model": {"a": 0.5, "sigma": 1, "u0": 1.0},
            "dt": 0.005,
            "t_end": 1.0,
            "cadence": 0.25,
            "experiment": {"kind": "MiTest", "mode_k": 1.0, "seed_amplitude": 1e-3},
            "output_dir": str(tmp_path / "x"),
        })
        with pytest.raises(ConfigError, match="seed_amplitude"):
            run_experiment(cfg)


class TestRunKdvBenchmark:
    def test_error_and_mass_in_manifest(self, tmp_path):
        out = tmp_path / "kdv"
        cfg = RunConfig.from_dict({
            "grid": {"half_length": 64.0, "n_points": 512},
            "model": {"a": 0.5, "sigma": -1, "u0": 1.0},
            "dt": 0.05,
            "t_end": 10.0,
            "cadence": 5.0,
            "experiment": {"kind": "KdvBenchmark", "beta": 0.1, "chi0": 16.0},
            "output_dir": str(out),
        })
        run_experiment(cfg)
        doc = json.loads((out / "manifest.json").read_text())
        assert doc["derived"]["max_norm_error"] < 1e-7
        assert doc["derived"]["mass_drift"] < 1e-12


class TestRunErrorScan:
    def test_scan_rows_and_ordering(self, tmp_path):
        out = tmp_path / "scan"
        doc = small_single_config(out, t_end=10.0, cadence=2.0)
        doc["envelope"] = {"l_star": 480.0, "gamma": 34}
        doc["experiment"] = {
            "kind": "ErrorScan",
            "soliton": {"epsilon": 0.04, "beta": 0.1, "x0": 100.0},
            "epsilons": [0.01, 0.04],
        }
        run_experiment(RunConfig.from_dict(doc))
        lines = (out / "errorscan.csv").read_text().strip().split("\n")
        assert lines[0] == "epsilon,l2_error"
        values = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
        assert [v[0] for v in values] == [0.01, 0.04]
        assert values[0][1] < values[1][1]

    def test_unsorted_epsilons_rejected(self, tmp_path):
        doc = small_single_config(tmp_path / "scan")
        doc["experiment"] = {
            "kind": "ErrorScan",
            "soliton": {"epsilon": 0.04, "beta": 0.1},
            "epsilons": [0.04, 0.01],
        }
        with pytest.raises(ConfigError, match="ascending"):
            run_experiment(RunConfig.from_dict(doc))
