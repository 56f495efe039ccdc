"""Built-in run recipes with the published caption parameters.

Presets are compiled-in data so the parameter sets are version-controlled with
the code.  Grid resolution and dt are documented engineering defaults, not
published values.
"""

from __future__ import annotations

import copy

from .harness import RunConfig

_GRID = {"half_length": 2500.0, "n_points": 16384}
_ENV = {"l_star": 1500.0, "gamma": 34}
_MODEL = {"a": 0.5, "sigma": -1, "u0": 1.0}


def _single(name, a, epsilon, t_end=100.0):
    return {
        "grid": dict(_GRID),
        "model": {**_MODEL, "a": a},
        "dt": 0.01,
        "t_end": t_end,
        "cadence": 1.0,
        "envelope": dict(_ENV),
        "experiment": {
            "kind": "SingleSoliton",
            "soliton": {"epsilon": epsilon, "beta": 0.1, "x0": 100.0, "direction": 1},
        },
        "output_dir": f"runs/{name}",
    }


def _collision(name, a, a1, a2, epsilon, x0_right=200.0, x0_left=-200.0,
               boost_nu=None, t_end=200.0):
    exp = {
        "kind": "Collision",
        "soliton1": {"epsilon": epsilon, "beta": 0.1, "x0": x0_right,
                     "direction": 1, "a_eff": a1},
        "soliton2": {"epsilon": epsilon, "beta": 0.1, "x0": x0_left,
                     "direction": -1, "a_eff": a2},
    }
    if boost_nu is not None:
        exp["boost_nu"] = boost_nu
    return {
        "grid": dict(_GRID),
        "model": {**_MODEL, "a": a},
        "dt": 0.01,
        "t_end": t_end,
        "cadence": 1.0,
        "envelope": dict(_ENV),
        "experiment": exp,
        "output_dir": f"runs/{name}",
    }


PRESETS: dict[str, dict] = {
    # single-soliton evolutions
    "fig1b": _single("fig1b", a=0.5, epsilon=0.04),      # antidark, p = 1
    "fig2": _single("fig2", a=0.8, epsilon=0.04),        # dark, p = 2.56
    "fig3a": _single("fig3a", a=0.5, epsilon=1.0),       # large-amplitude antidark
    "fig3b": _single("fig3b", a=0.8, epsilon=1.0),       # large-amplitude dark: splits
    # head-on collisions
    "fig4a": _collision("fig4a", a=0.75, a1=0.75, a2=0.75, epsilon=0.1),
    "fig4b": _collision("fig4b", a=0.65, a1=0.65, a2=0.65, epsilon=0.1),
    "fig4c": _collision("fig4c", a=0.62, a1=0.62, a2=0.62, epsilon=1.0),
    "fig4d": _collision("fig4d", a=0.75, a1=0.67, a2=0.75, epsilon=0.1),
    # boosted asymmetric collision: centres at x = -250 (right-going) and +290
    "fig4e": _collision("fig4e", a=0.62, a1=0.62, a2=0.62, epsilon=0.1,
                        x0_right=250.0, x0_left=-290.0, boost_nu=-0.7),
    "errorscan-fig1a": {
        "grid": dict(_GRID),
        "model": dict(_MODEL),
        "dt": 0.01,
        "t_end": 100.0,
        "cadence": 1.0,
        "envelope": dict(_ENV),
        "experiment": {
            "kind": "ErrorScan",
            "soliton": {"beta": 0.1, "x0": 100.0, "direction": 1, "epsilon": 0.04},
            "epsilons": [0.001, 0.01, 0.02, 0.04, 0.08, 0.16],
        },
        "output_dir": "runs/errorscan-fig1a",
    },
    "mi-demo": {
        "grid": {"half_length": 50.26548245743669, "n_points": 512},  # 16*pi
        "model": {"a": 0.5, "sigma": 1, "u0": 1.0},
        "dt": 0.005,
        "t_end": 8.0,
        "cadence": 0.25,
        "envelope": dict(_ENV),
        "experiment": {"kind": "MiTest", "mode_k": 1.0, "seed_amplitude": 1e-8},
        "output_dir": "runs/mi-demo",
    },
    "kdv-benchmark": {
        "grid": {"half_length": 128.0, "n_points": 1024},
        "model": dict(_MODEL),
        "dt": 0.025,
        "t_end": 50.0,
        "cadence": 5.0,
        "envelope": dict(_ENV),
        "experiment": {"kind": "KdvBenchmark", "beta": 0.1, "chi0": 32.0},
        "output_dir": "runs/kdv-benchmark",
    },
}

PRESET_NOTES = {
    "fig1b": "antidark soliton evolution (a=0.5, eps=0.04)",
    "fig2": "dark soliton evolution (a=0.8, eps=0.04)",
    "fig3a": "large-amplitude antidark (a=0.5, eps=1)",
    "fig3b": "large-amplitude dark, splits (a=0.8, eps=1)",
    "fig4a": "dark-dark collision (a=0.75, eps=0.1)",
    "fig4b": "antidark-antidark collision (a=0.65, eps=0.1)",
    "fig4c": "antidark collision at eps=1 (a=0.62)",
    "fig4d": "mixed antidark-dark collision (a=0.75, a1=0.67)",
    "fig4e": "boosted unequal-speed collision (a=0.62, nu=-0.7)",
    "errorscan-fig1a": "L2 error vs epsilon scan",
    "mi-demo": "modulational-instability growth-rate check (sigma=+1)",
    "kdv-benchmark": "KdV soliton transport against the exact solution",
}


def get_preset(name: str) -> RunConfig:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; try: {', '.join(sorted(PRESETS))}")
    return RunConfig.from_dict(copy.deepcopy(PRESETS[name]))


def preset_names() -> list[str]:
    return sorted(PRESETS)
