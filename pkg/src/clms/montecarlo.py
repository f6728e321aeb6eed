"""Seeded Monte Carlo ensembles for the constrained LMS filter.

Data generation follows the analysis assumptions exactly: inputs are
temporally independent zero-mean Gaussian vectors with covariance R
(sampled as G z with G the Cholesky factor of R), noise is independent
zero-mean Gaussian with variance eta, and outputs are y = x^T h + v.

Every run gets its own pair of RNG substreams derived deterministically
from (master seed, run index, stream role), so ensembles are replayable
run-by-run under any execution order. The ensemble engine simulates runs
in fixed-size blocks with the iteration loop vectorized across the block;
with the block layout fixed by the configuration, reduction order is fixed
and results are bitwise reproducible.

Diverged runs (any weight magnitude beyond the divergence limit) are
counted and excluded from all averages; one Inf would otherwise poison the
ensemble mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, EnsembleError
from .filtering import DIVERGENCE_LIMIT
from .linalg import spd_sqrt
from .scenario import DerivedModel, SystemSpec
from .theory import minimum_mse

#: substream roles in the per-run seed derivation
INPUT_STREAM = 0
NOISE_STREAM = 1


def run_streams(seed: int, run_index: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Deterministic (input, noise) generator pair for one run of an ensemble."""
    gen_in = np.random.default_rng(np.random.SeedSequence([seed, run_index, INPUT_STREAM]))
    gen_noise = np.random.default_rng(np.random.SeedSequence([seed, run_index, NOISE_STREAM]))
    return gen_in, gen_noise


def sample_input(R_factor: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw one input vector x = G z with z standard normal, G = spd_sqrt(R)."""
    return R_factor @ rng.standard_normal(R_factor.shape[0])


@dataclass(frozen=True)
class RunConfig:
    """Ensemble size, per-run iteration count, steady-state window, master seed."""

    runs: int
    iters: int
    ss_window: int
    seed: int

    def __post_init__(self):
        if self.runs < 1:
            raise ArgumentError(f"runs must be >= 1, got {self.runs}")
        if self.iters < 0:
            raise ArgumentError(f"iters must be >= 0, got {self.iters}")
        if not 0 <= self.ss_window <= self.iters:
            raise ArgumentError(
                f"ss_window must lie in [0, iters], got {self.ss_window} with iter={self.iters}")
        if self.seed < 0:
            raise ArgumentError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class RunResult:
    """Per-iteration squared deviations of a single run, including n = 0."""

    msd: np.ndarray
    diverged: bool = False
    diverged_at: int | None = None
    apriori_sq_mean: float | None = None


@dataclass(frozen=True)
class EnsembleStats:
    """Ensemble averages over the non-diverged runs.

    ``msd[n]`` is the mean of ||w_n - g||^2 across runs (n = 0 included),
    ``se`` its per-iteration standard error, ``msd_ss`` the mean of ``msd``
    over the trailing ``ss_window`` iterations and ``zeta_emp`` the empirical
    misadjustment computed from a priori errors in that window against the
    analytic minimum MSE. ``max_constraint_violation`` and
    ``max_projection_residual`` are worst-case structural residuals observed
    anywhere in the ensemble.
    """

    msd: np.ndarray
    se: np.ndarray
    msd_ss: float
    zeta_emp: float | None
    diverged: int
    valid_runs: int
    max_constraint_violation: float
    max_projection_residual: float


def _simulate_block(spec: SystemSpec, model: DerivedModel, mu: float, iters: int,
                    gen_pairs, ss_window: int, iter_chunk: int,
                    track_invariants: bool):
    """Simulate a block of runs with the iteration loop vectorized across runs.

    Returns per-run trajectories of ||d_n||^2 (shape (B, iters+1)), per-run
    sums of squared a priori errors over the trailing window, per-run
    divergence iteration (-1 if none), and per-run worst-case constraint and
    projection residuals.
    """
    B = len(gen_pairs)
    L = spec.L
    G = spd_sqrt(spec.R)
    P, q, g, h, C, f = model.P, model.q, model.g, spec.h, spec.C, spec.f
    noise_scale = float(np.sqrt(spec.eta))

    W = np.tile(q, (B, 1))
    traj = np.empty((B, iters + 1))
    d = W - g
    traj[:, 0] = np.einsum("ij,ij->i", d, d)

    eps_acc = np.zeros(B)
    cv_run = np.zeros(B)
    pr_run = np.zeros(B)
    diverged_at = np.full(B, -1, dtype=np.int64)
    w_start = iters - ss_window

    with np.errstate(over="ignore", invalid="ignore"):
        t = 0
        while t < iters:
            cn = min(iter_chunk, iters - t)
            Xc = np.empty((B, cn, L))
            Vc = np.empty((B, cn))
            for i, (gen_in, gen_noise) in enumerate(gen_pairs):
                Xc[i] = gen_in.standard_normal((cn, L))
                Vc[i] = noise_scale * gen_noise.standard_normal(cn)
            Xc = Xc @ G.T
            Yc = Xc @ h + Vc
            for s in range(cn):
                x = Xc[:, s, :]
                err = Yc[:, s] - np.einsum("ij,ij->i", W, x)
                if t + s >= w_start:
                    eps_acc += err * err
                W = (W + mu * err[:, None] * x) @ P + q
                d = W - g
                traj[:, t + s + 1] = np.einsum("ij,ij->i", d, d)
                wmax = np.abs(W).max(axis=1)
                fresh = (diverged_at < 0) & ~(wmax <= DIVERGENCE_LIMIT)
                if fresh.any():
                    diverged_at[fresh] = t + s + 1
                if track_invariants:
                    np.maximum(cv_run, np.abs(W @ C - f).max(axis=1), out=cv_run)
                    np.maximum(pr_run, np.abs(P @ d.T - d.T).max(axis=0), out=pr_run)
            t += cn
    return traj, eps_acc, diverged_at, cv_run, pr_run


def simulate_run(spec: SystemSpec, model: DerivedModel, mu: float, iters: int,
                 streams: tuple[np.random.Generator, np.random.Generator],
                 ss_window: int = 0) -> RunResult:
    """One run of the filter on freshly generated data.

    Returns the squared deviations including the deterministic n = 0 value;
    a diverged run yields the truncated prefix with the divergence iteration.
    """
    traj, eps_acc, diverged_at, _, _ = _simulate_block(
        spec, model, mu, iters, [streams], ss_window, iter_chunk=2048,
        track_invariants=False)
    da = int(diverged_at[0])
    if da >= 0:
        return RunResult(msd=traj[0, :da].copy(), diverged=True, diverged_at=da)
    apriori = float(eps_acc[0] / ss_window) if ss_window > 0 else None
    return RunResult(msd=traj[0].copy(), apriori_sq_mean=apriori)


def ensemble_msd_curve(spec: SystemSpec, model: DerivedModel, mu: float,
                       config: RunConfig, *, block_size: int = 512,
                       iter_chunk: int = 2048,
                       track_invariants: bool = True) -> EnsembleStats:
    """Average an ensemble of independent runs.

    Runs are simulated in blocks of ``block_size`` (shrunk automatically for
    very long runs to bound the trajectory buffer) and reduced in run-index
    order, so identical configurations produce bitwise-identical statistics.
    """
    iters, runs, window = config.iters, config.runs, config.ss_window
    # keep the per-block trajectory buffer near 64 MB
    block = max(1, min(block_size, int(8e6 // (iters + 1)) or 1))

    sum1 = np.zeros(iters + 1)
    sum2 = np.zeros(iters + 1)
    eps_total = 0.0
    n_valid = 0
    n_diverged = 0
    cv_max = 0.0
    pr_max = 0.0

    for b0 in range(0, runs, block):
        b1 = min(b0 + block, runs)
        gen_pairs = [run_streams(config.seed, r) for r in range(b0, b1)]
        traj, eps_acc, diverged_at, cv_run, pr_run = _simulate_block(
            spec, model, mu, iters, gen_pairs, window, iter_chunk, track_invariants)
        valid = (diverged_at < 0) & np.isfinite(traj).all(axis=1)
        n_diverged += int((~valid).sum())
        n_valid += int(valid.sum())
        if valid.any():
            sum1 += traj[valid].sum(axis=0)
            sum2 += (traj[valid] ** 2).sum(axis=0)
            eps_total += float(eps_acc[valid].sum())
            cv_max = max(cv_max, float(cv_run[valid].max()))
            pr_max = max(pr_max, float(pr_run[valid].max()))

    if n_valid == 0:
        raise EnsembleError(f"all {runs} runs diverged at mu={mu:.6g}")

    msd = sum1 / n_valid
    var = np.maximum(sum2 / n_valid - msd * msd, 0.0)
    se = np.sqrt(var / n_valid)
    msd_ss = float(msd[-window:].mean()) if window > 0 else float(msd[-1])
    if window > 0:
        sigma2_min = minimum_mse(model)
        zeta_emp = (eps_total / (n_valid * window) - sigma2_min) / sigma2_min
    else:
        zeta_emp = None
    return EnsembleStats(
        msd=msd,
        se=se,
        msd_ss=msd_ss,
        zeta_emp=zeta_emp,
        diverged=n_diverged,
        valid_runs=n_valid,
        max_constraint_violation=cv_max,
        max_projection_residual=pr_max,
    )
