#!/usr/bin/env python3
"""Drive the experiment runners end-to-end and emit the CSV artifacts.

Uses a scaled-down run count so the full battery finishes quickly; pass
--full to reproduce the publication-scale settings (10^4 runs, automatic
iteration budgets; takes several minutes).

Equivalent shell commands:

    clms-experiments fig1 --runs 500
    clms-experiments fig2 --runs 500
    clms-experiments fig3 --runs 500
    clms-experiments validate

The emitted CSVs are what the plotgen package (sibling directory) renders
into figures:

    plotgen --msd-vs-iter "demo_out/fig1_mu_*.csv" --output fig1.png
    plotgen --ssmsd-vs-eta demo_out/fig2.csv --output fig2.png
    plotgen --zeta-vs-mu demo_out/fig3.csv --output fig3.png
"""
import sys

from clms.experiments import parse_config, run_fig1, run_fig2, run_fig3, run_validate

full = "--full" in sys.argv
overrides = {"outdir": "demo_out"}
if not full:
    overrides.update({"runs": "500", "iters": "1500", "ss_window": "500"})

config = parse_config(None, overrides)

print("== scenario diagnostics ==")
run_validate(config)

print("\n== transient MSD sweep (fig1) ==")
for path in run_fig1(config):
    print(" wrote", path)

print("\n== steady-state MSD grid (fig2) ==")
print(" wrote", run_fig2(config))

print("\n== misadjustment sweep (fig3) ==")
print(" wrote", run_fig3(config))

print("\ndone; CSVs in demo_out/")
