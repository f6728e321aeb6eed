#!/usr/bin/env python3
"""Transient mean-square deviation: closed-form curve against a small ensemble.

The exact theory curve needs no simulation; the Monte Carlo ensemble here is
deliberately small (500 runs) so the script finishes in seconds. The full
10^4-run comparison lives in the acceptance suite.
"""
import numpy as np

from clms import (
    RunConfig,
    derive_model,
    ensemble_msd_curve,
    iterations_to_steady_state,
    random_scenario,
    stability_max_step,
    steady_state_msd,
    transient_msd_curve,
)

spec = random_scenario(seed=42, L=7, K=3, eta=1e-2)
model = derive_model(spec)
mu = 0.1 * stability_max_step(model)
print(f"step-size mu = {mu:.6f} (0.1 * mu_max)")

n_conv = iterations_to_steady_state(model, mu)
iters = 2 * n_conv
print(f"theory reaches steady state (0.1%) at n = {n_conv}; simulating {iters} iterations")

theory = transient_msd_curve(model, model.d0, mu, iters)
stats = ensemble_msd_curve(spec, model, mu,
                           RunConfig(runs=500, iters=iters, ss_window=500, seed=42))

print(f"\n{'n':>6} {'theory dB':>12} {'ensemble dB':>12} {'gap dB':>8}")
for n in [0, 1, 2, 5, 10, 20, 50, 100, 200, 400, 700, iters // 2, iters]:
    t, e = theory[n], stats.msd[n]
    print(f"{n:6d} {10*np.log10(t):12.3f} {10*np.log10(e):12.3f} {10*np.log10(t/e):8.3f}")

ss = steady_state_msd(model, mu)
print(f"\nsteady-state MSD: theory {10*np.log10(ss):.3f} dB, "
      f"ensemble tail {10*np.log10(stats.msd_ss):.3f} dB "
      f"({stats.valid_runs} runs, {stats.diverged} diverged)")
print(f"worst constraint violation across the whole ensemble: "
      f"{stats.max_constraint_violation:.2e}")
