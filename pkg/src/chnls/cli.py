"""Command-line entry point: run experiments, list presets, query analytics.

Exit codes: 0 success, 2 usage error, 3 divergence, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .etdrk4 import DivergenceError
from .harness import ConfigError, RunConfig, run_experiment
from .model import ModelParams, SingularParameterError, classify_soliton
from .presets import PRESET_NOTES, get_preset, preset_names
from .solitons import SolitonSpec, predicted_velocity

EXIT_OK, EXIT_USAGE, EXIT_DIVERGED, EXIT_IO = 0, 2, 3, 4


def _set_dotted(doc: dict, dotted: str, raw: str):
    """Apply one key=value override; dotted paths index into the config doc."""
    keys = dotted.split(".")
    node = doc
    for key in keys[:-1]:
        if key not in node or not isinstance(node[key], dict):
            raise ConfigError(f"unknown config path {dotted!r} (at {key!r})")
        node = node[key]
    leaf = keys[-1]
    if leaf not in node:
        raise ConfigError(f"unknown config key {dotted!r}")
    try:
        node[leaf] = json.loads(raw)
    except json.JSONDecodeError:
        node[leaf] = raw


def _find_key(doc: dict, key: str) -> list[str]:
    """All dotted paths ending in `key`, for bare --set shorthand."""
    hits = []

    def walk(node, prefix):
        for k, v in node.items():
            path = f"{prefix}.{k}" if prefix else k
            if k == key:
                hits.append(path)
            if isinstance(v, dict):
                walk(v, path)

    walk(doc, "")
    return hits


def cmd_run(args) -> int:
    if (args.config is None) == (args.preset is None):
        print("run: give exactly one of a config file or --preset", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.preset:
            doc = get_preset(args.preset).to_dict()
        else:
            with open(args.config) as fh:
                doc = json.load(fh)
    except KeyError as exc:
        print(f"run: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"run: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"run: config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        for override in args.set or []:
            if "=" not in override:
                raise ConfigError(f"--set expects key=value, got {override!r}")
            key, _, value = override.partition("=")
            if "." not in key:
                paths = _find_key(doc, key)
                if len(paths) != 1:
                    raise ConfigError(
                        f"--set {key!r} is ambiguous or unknown (matches {paths}); "
                        "use a dotted path"
                    )
                key = paths[0]
            _set_dotted(doc, key, value)
        if args.output_dir:
            doc["output_dir"] = args.output_dir
        if args.dt:
            doc["dt"] = args.dt
        if args.grid_n:
            doc.setdefault("grid", {})["n_points"] = args.grid_n
        config = RunConfig.from_dict(doc)
    except ConfigError as exc:
        print(f"run: invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.dump_config:
        print(json.dumps(config.to_dict(), indent=2, sort_keys=True))
        return EXIT_OK

    try:
        manifest = run_experiment(config)
        if args.figures:
            from .plots import render_run_figures

            render_run_figures(config.output_dir)
            manifest.finalize(manifest.path.parent, manifest.status,
                              manifest.wall_clock_seconds)
    except DivergenceError as exc:
        print(f"run: diverged at t = {exc.t:g}; partial outputs retained", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as exc:
        print(f"run: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        print(manifest.path)
    return EXIT_OK


def cmd_info(args) -> int:
    try:
        params = ModelParams(a=args.a, sigma=args.sigma, u0=args.u0)
    except ValueError as exc:
        print(f"info: {exc}", file=sys.stderr)
        return EXIT_USAGE
    C = params.sound_speed
    print(f"C = {C:g}")
    print(f"p = a^2 C^2 = {params.p:g}")
    if params.sigma == 1:
        print(f"MI band: 0 < k < {2 * params.u0:g}")
        return EXIT_OK
    try:
        q = params.q
        print(f"q = {q:g}")
        print(f"class = {classify_soliton(params).value}")
    except SingularParameterError:
        print("q = singular (p = 2): degenerate, no soliton of either type")
        return EXIT_OK
    if args.epsilon is not None and args.beta is not None:
        spec = SolitonSpec(epsilon=args.epsilon, beta=args.beta)
        v = predicted_velocity(spec, params)
        print(f"predicted velocity = {v:g}")
        print(f"density deviation = {-args.epsilon * args.beta * q / C**2:+g}")
    return EXIT_OK


def cmd_list_presets(args) -> int:
    if args.porcelain:
        for name in preset_names():
            print(f"{name}\t{PRESET_NOTES[name]}")
        return EXIT_OK
    width = max(len(n) for n in preset_names())
    print(f"{'preset':<{width}}  description")
    for name in preset_names():
        print(f"{name:<{width}}  {PRESET_NOTES[name]}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chnls",
        description="Pseudospectral CH-NLS soliton laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment")
    p_run.add_argument("config", nargs="?", help="JSON config file")
    p_run.add_argument("--preset", help="built-in preset name")
    p_run.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config entry (dotted path or unique key)")
    p_run.add_argument("--dump-config", action="store_true",
                       help="print the resolved config instead of running")
    p_run.add_argument("--figures", action="store_true",
                       help="also render matplotlib figures into the run directory")
    p_run.add_argument("--output-dir")
    p_run.add_argument("--dt", type=float)
    p_run.add_argument("--grid-n", type=int)
    p_run.add_argument("--quiet", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_info = sub.add_parser("info", help="print derived analytic quantities")
    p_info.add_argument("--a", type=float, required=True)
    p_info.add_argument("--sigma", type=int, default=-1)
    p_info.add_argument("--u0", type=float, default=1.0)
    p_info.add_argument("--epsilon", type=float)
    p_info.add_argument("--beta", type=float)
    p_info.set_defaults(func=cmd_info)

    p_list = sub.add_parser("list-presets", help="list built-in run recipes")
    p_list.add_argument("--porcelain", action="store_true",
                        help="tab-separated machine-readable output")
    p_list.set_defaults(func=cmd_list_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
