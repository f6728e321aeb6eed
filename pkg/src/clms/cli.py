"""Command-line front end for the experiment runners.

Subcommands: fig1, fig2, fig3, custom, validate. Every subcommand accepts a
config file plus per-key override flags; flags win. Exit codes: 0 success,
1 configuration error, 2 instability refusal, 3 ensemble failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ArgumentError, ConfigError, EnsembleError, InstabilityError, SpecValidationError
from .experiments import parse_config, run_custom, run_fig1, run_fig2, run_fig3, run_validate

_OVERRIDE_FLAGS = ("seed", "L", "K", "eta", "mu", "runs", "iters", "ss_window", "outdir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clms-experiments",
        description="Constrained-LMS theory/simulation experiments; emits CSV files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("fig1", "transient MSD versus iteration, one CSV per step-size"),
        ("fig2", "steady-state MSD versus noise variance"),
        ("fig3", "steady-state misadjustment versus step-size"),
        ("custom", "full eta x mu steady-state grid"),
        ("validate", "print derived-model diagnostics"),
    ):
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", metavar="FILE", help="flat key = value config file")
        p.add_argument("--seed", metavar="INT")
        p.add_argument("--L", metavar="INT")
        p.add_argument("--K", metavar="INT")
        p.add_argument("--eta", metavar="LIST", help="comma-separated noise variances")
        p.add_argument("--mu", metavar="LIST",
                       help="comma-separated step-sizes, absolute or '<c>*mu_max'")
        p.add_argument("--runs", metavar="INT")
        p.add_argument("--iters", metavar="N|auto")
        p.add_argument("--ss-window", dest="ss_window", metavar="INT")
        p.add_argument("--outdir", metavar="DIR")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, key)
        for key in _OVERRIDE_FLAGS
        if getattr(args, key) is not None
    }
    try:
        config = parse_config(args.config, overrides)
        if args.command == "fig1":
            paths = run_fig1(config)
            for path in paths:
                print(path)
        elif args.command == "fig2":
            print(run_fig2(config))
        elif args.command == "fig3":
            print(run_fig3(config))
        elif args.command == "custom":
            print(run_custom(config))
        else:
            run_validate(config)
    except (ConfigError, SpecValidationError, ArgumentError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except InstabilityError as exc:
        print(f"instability refusal: {exc}", file=sys.stderr)
        return 2
    except EnsembleError as exc:
        print(f"ensemble failure: {exc}", file=sys.stderr)
        return 3
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
