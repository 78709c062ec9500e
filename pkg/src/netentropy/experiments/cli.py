"""Command-line entry point: ``netentropy <experiment> [options]``.

Option precedence is built-in defaults, then ``--config``, then flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .._random import derive_seed
from ..errors import InvalidConfigError, NetEntropyError
from ..network import build_connectivity, generate_sites, save_graph
from .config import EXPERIMENTS, ExperimentConfig
from .runners import STREAM_CONNECTIVITY, STREAM_SITES, config_from_manifest, execute


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed {text} is not an unsigned 64-bit integer")
    return value


# flag -> (config field, parser, help)
OVERRIDES = {
    "--seed": ("master_seed", _u64, "master seed (unsigned 64-bit)"),
    "--n": ("n", int, "number of sites"),
    "--n-init": ("n_init", int, "confined sites in the initial state"),
    "--passes": ("passes", int, "connection passes"),
    "--pool-size": ("pool_size", int, "nearest-neighbour pool size"),
    "--t-max": ("t_max", float, "time horizon in units of tau"),
    "--t-step": ("t_step", float, "time step in units of tau"),
    "--n-configs": ("n_configs", int, "random configurations (multiconfig)"),
    "--n-samples": ("n_samples", int, "samples per group (rasee-stats)"),
    "--n-e": ("n_e", int, "eigenstates in RaSEE states (dynamics, blip)"),
    "--reversal-time": ("reversal_time", float, "blip reversal time in units of tau"),
    "--delta-grid": ("delta_grid", _floats, "comma-separated admixture weights (blip)"),
    "--temperature-grid": ("temperature_grid", _floats, "comma-separated temperatures (thermal)"),
    "--n-init-grid": ("n_init_grid", _ints, "comma-separated confinements (ninit-sweep)"),
    "--n-e-grid": ("n_e_grid", _ints, "comma-separated n_e values (rasee-stats)"),
    "--n-trajectories": ("n_trajectories", int, "RaSEE trajectories (rasee-dynamics)"),
    "--snapshot-times": ("snapshot_times", _floats, "comma-separated snapshot times (expand)"),
    "--boltzmann-temperature": ("boltzmann_temperature", float,
                                "temperature of the comparison Boltzmann distribution (expand)"),
    "--e0": ("e0", float, "on-site energy"),
    "--gamma0": ("gamma0", float, "coupling strength"),
}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--out", help="output directory")
    p.add_argument("--cache-dir", help="directory for cached spectra")
    for flag, (field_name, conv, text) in OVERRIDES.items():
        p.add_argument(flag, dest=field_name, type=conv, default=None, help=text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netentropy",
        description="Operator entropies of quantum states on disordered site networks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name.replace("_", "-"), help=f"run the {name} experiment")
        p.set_defaults(experiment=name)
        _add_common(p)

    p = sub.add_parser("rerun", help="re-run an experiment from its manifest.json")
    p.add_argument("manifest")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--cache-dir", help="directory for cached spectra")

    p = sub.add_parser("graph", help="generate a configuration and write its graph JSON")
    p.set_defaults(experiment="expand")
    _add_common(p)
    p.add_argument("--index", type=int, default=0, help="configuration index")
    return parser


def config_from_args(args) -> ExperimentConfig:
    doc = {}
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(doc, dict):
            raise InvalidConfigError(f"{args.config}: top level must be an object")
        named = doc.get("experiment", args.experiment)
        if args.command != "graph" and named != args.experiment:
            raise InvalidConfigError(f"config names experiment {named!r} "
                                     f"but subcommand is {args.command!r}")
    doc = {**doc, "experiment": args.experiment}
    for field_name, _, _ in OVERRIDES.values():
        value = getattr(args, field_name)
        if value is not None:
            doc[field_name] = value
    if args.out:
        doc["output_dir"] = args.out
    return ExperimentConfig.from_dict(doc)


def _write_graph(cfg: ExperimentConfig, index: int) -> Path:
    sites = generate_sites(cfg.n, derive_seed(cfg.master_seed, STREAM_SITES, index))
    graph = build_connectivity(sites, cfg.passes, cfg.pool_size,
                               derive_seed(cfg.master_seed, STREAM_CONNECTIVITY, index))
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return save_graph(out / f"graph_config{index:02d}.json", sites, graph)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "rerun":
            cfg = config_from_manifest(args.manifest)
            _, manifest = execute(cfg, args.out, args.cache_dir)
        elif args.command == "graph":
            manifest = _write_graph(config_from_args(args), args.index)
        else:
            _, manifest = execute(config_from_args(args), cache_dir=args.cache_dir)
    except (NetEntropyError, OSError, KeyError, ValueError) as exc:
        print(f"netentropy: error: {exc}", file=sys.stderr)
        return 2
    print(manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
