"""Command-line interface: one flag per figure kind, an input glob, an output path."""

from __future__ import annotations

import argparse
import sys

from .render import PlotgenError, job_from_glob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotgen",
        description="Render clms experiment CSVs into figures (headless).",
    )
    kind = parser.add_mutually_exclusive_group(required=True)
    kind.add_argument("--msd-vs-iter", metavar="GLOB",
                      help="MSD learning-curve CSVs (one per step-size)")
    kind.add_argument("--ssmsd-vs-eta", metavar="GLOB",
                      help="steady-state MSD vs noise-variance CSV")
    kind.add_argument("--zeta-vs-mu", metavar="GLOB",
                      help="misadjustment vs step-size CSV")
    parser.add_argument("--output", required=True, metavar="PATH",
                        help="image file to write (format from extension)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.msd_vs_iter:
        pattern, kind = args.msd_vs_iter, "msd-vs-iter"
    elif args.ssmsd_vs_eta:
        pattern, kind = args.ssmsd_vs_eta, "ssmsd-vs-eta"
    else:
        pattern, kind = args.zeta_vs_mu, "zeta-vs-mu"
    try:
        report = render(job_from_glob(pattern, kind, args.output))
    except PlotgenError as exc:
        print(f"plotgen error: {exc}", file=sys.stderr)
        return 1
    print(report.output)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
