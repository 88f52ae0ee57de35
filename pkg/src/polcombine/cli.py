"""Command-line entry point: ``polcombine <subcommand> [options]``.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical-domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ScenarioConfig, example_config_dict, load_config
from .errors import ConfigError, DomainError, NumericalDomainError
from .export import export_branches, export_channels, export_field, write_taps_csv
from .harness import build_scheme_set, emit_results, equalizer_for, run_ber, scenario_field
from .modem import build_16apsk, ebn0_to_n0

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "workers", None) is not None:
        changes["workers"] = args.workers
    if getattr(args, "schemes", None) is not None:
        changes["schemes"] = [s for s in args.schemes.split(",") if s]
    return cfg.replace(**changes) if changes else cfg


def cmd_scenario(args) -> int:
    cfg = _config(args)
    geom, _ = scenario_field(cfg)
    text = json.dumps(geom.summary(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_channel(args) -> int:
    cfg = _config(args)
    ss = build_scheme_set(cfg)
    for path in export_field(ss.field, args.out_dir) + export_branches(ss.branches, args.out_dir):
        print(path)
    return EXIT_OK


def cmd_fom(args) -> int:
    cfg = _config(args)
    ss = build_scheme_set(cfg)
    for path in export_channels(ss.channels, args.out_dir):
        print(path)
    if args.equalizer_ebn0 is not None:
        const = build_16apsk(cfg.gamma, cfg.phi)
        n0 = ebn0_to_n0(args.equalizer_ebn0, const, 1.0)
        for name, ch in ss.channels.items():
            eq = equalizer_for(ch, n0, cfg, const)
            print(write_taps_csv(Path(args.out_dir) / f"mmse_{name}.csv", eq.c))
    return EXIT_OK


def cmd_ber(args) -> int:
    cfg = _config(args)
    points = run_ber(cfg)
    for path in emit_results(points, cfg, args.out):
        print(path)
    return EXIT_OK


def cmd_example_config(args) -> int:
    text = json.dumps(example_config_dict(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polcombine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--config", help="scenario JSON (defaults to the built-in scenario)")
        p.add_argument("--schemes", help="comma-separated subset of ML_VH,ML_RL,RHCP,LHCP,EGC")
        if seed:
            p.add_argument("--seed", type=int)
            p.add_argument("--workers", type=int)

    p = sub.add_parser("scenario", help="print link geometry and elevation angle")
    common(p)
    p.add_argument("--out", help="also write the JSON summary here")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("channel", help="write receiver field and branch channel CSVs")
    common(p)
    p.add_argument("--out-dir", default="channel_out")
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("fom", help="write the equivalent discrete-time channel taps per scheme")
    common(p)
    p.add_argument("--out-dir", default="fom_out")
    p.add_argument("--equalizer-ebn0", type=float, help="also write MMSE coefficients at this Eb/N0 [dB]")
    p.set_defaults(func=cmd_fom)

    p = sub.add_parser("ber", help="run the Monte-Carlo BER sweep")
    common(p, seed=True)
    p.add_argument("--out", default="ber_results", help="output prefix for .csv and .json")
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("example-config", help="write the annotated default config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_example_config)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDomainError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
