"""Experiment orchestration: scenario setup, sweeps, and CSV emission.

Three canned experiments cover the standard validation battery:

* ``fig1``: transient MSD versus iteration for several step-sizes, theory
  against a Monte Carlo ensemble; one CSV per step-size.
* ``fig2``: steady-state MSD versus noise variance for several step-sizes.
* ``fig3``: steady-state misadjustment versus step-size, both closed forms
  plus classical bounds and the empirical estimate.

``custom`` runs the full noise-variance/step-size grid with every
steady-state column, and ``validate`` prints derived-model diagnostics.

Configuration is a flat ``key = value`` text file with CLI flag overrides;
step-sizes may be absolute ("0.01") or relative to the stability bound
("0.1*mu_max"). CSV output is comma-separated with a header row, 17
significant digits, LF line endings; identical configurations produce
byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError, InstabilityError, ValidityDomainError
from .montecarlo import RunConfig, ensemble_msd_curve
from .scenario import derive_model, random_scenario
from .theory import (
    iterations_to_steady_state,
    minimum_mse,
    misadjustment_bounds,
    misadjustment_direct,
    misadjustment_eigen,
    stability_max_step,
    steady_state_msd,
    transient_msd_curve,
)

DEFAULT_SEED = 42
DEFAULT_L = 7
DEFAULT_K = 3
DEFAULT_ETA = 1e-2
DEFAULT_RUNS = 10_000
DEFAULT_SS_WINDOW = 1_000
DEFAULT_OUTDIR = "out"

FIG1_DEFAULT_MU = ((0.2, True), (0.1, True), (0.05, True), (0.02, True))
FIG2_DEFAULT_MU = ((0.05, True), (0.1, True))
FIG2_DEFAULT_ETA = (1e-4, 1e-3, 1e-2, 1e-1)
FIG3_DEFAULT_MU = tuple((c, True) for c in (0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4))

#: hard ceiling on automatically chosen per-run iteration budgets
AUTO_ITER_CAP = 50_000

#: widen the misadjustment averaging window at small step-sizes, where the
#: excess error being estimated shrinks proportionally to mu
FIG3_WINDOW_SCALE_REFERENCE = 0.1
FIG3_WINDOW_MAX_FACTOR = 5

CONFIG_KEYS = ("seed", "L", "K", "eta", "mu", "runs", "iters", "ss_window", "outdir")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed experiment configuration.

    ``mu`` entries are (coefficient, relative) pairs; relative entries are
    multiplied by the computed stability bound once the scenario is derived.
    ``iters=None`` means automatic sizing from the theory curve. ``provided``
    records which keys were given explicitly, so figure runners can apply
    their own documented sweep defaults to untouched fields.
    """

    seed: int = DEFAULT_SEED
    L: int = DEFAULT_L
    K: int = DEFAULT_K
    eta: tuple[float, ...] = (DEFAULT_ETA,)
    mu: tuple[tuple[float, bool], ...] | None = None
    runs: int = DEFAULT_RUNS
    iters: int | None = None
    ss_window: int = DEFAULT_SS_WINDOW
    outdir: str = DEFAULT_OUTDIR
    provided: frozenset[str] = field(default_factory=frozenset)


def _parse_int(key: str, raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} {where}: not an integer: {raw!r}") from exc


def _parse_float(key: str, raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} {where}: not a number: {raw!r}") from exc


def _parse_mu_entry(tok: str, where: str) -> tuple[float, bool]:
    tok = tok.strip()
    if "*" in tok:
        left, _, right = tok.partition("*")
        if right.strip() != "mu_max":
            raise ConfigError(f"mu {where}: expected '<number>*mu_max', got {tok!r}")
        coeff = _parse_float("mu", left.strip(), where)
        relative = True
    else:
        coeff = _parse_float("mu", tok, where)
        relative = False
    if not coeff > 0 or not math.isfinite(coeff):
        raise ConfigError(f"mu {where}: step-size must be positive and finite, got {tok!r}")
    return coeff, relative


def _set_key(values: dict, key: str, raw: str, where: str) -> None:
    if key not in CONFIG_KEYS:
        raise ConfigError(f"unknown configuration key {key!r} {where}")
    raw = raw.strip()
    if key in ("seed", "L", "K", "runs", "ss_window"):
        values[key] = _parse_int(key, raw, where)
    elif key == "eta":
        values[key] = tuple(_parse_float("eta", tok.strip(), where) for tok in raw.split(","))
    elif key == "mu":
        values[key] = tuple(_parse_mu_entry(tok, where) for tok in raw.split(","))
    elif key == "iters":
        values[key] = None if raw == "auto" else _parse_int("iters", raw, where)
    else:
        values[key] = raw


def _validated(values: dict, provided: frozenset[str]) -> ExperimentConfig:
    cfg = ExperimentConfig(provided=provided, **values)
    if cfg.seed < 0:
        raise ConfigError(f"seed must be >= 0, got {cfg.seed}")
    if cfg.L < 2:
        raise ConfigError(f"L must be >= 2, got {cfg.L}")
    if not 1 <= cfg.K < cfg.L:
        raise ConfigError(f"violated invariant K < L (and K >= 1): K={cfg.K}, L={cfg.L}")
    if cfg.runs < 1:
        raise ConfigError(f"runs must be >= 1, got {cfg.runs}")
    if cfg.iters is not None and cfg.iters < 0:
        raise ConfigError(f"iters must be >= 0 or 'auto', got {cfg.iters}")
    if cfg.ss_window < 0:
        raise ConfigError(f"ss_window must be >= 0, got {cfg.ss_window}")
    for value in cfg.eta:
        if value < 0 or not math.isfinite(value):
            raise ConfigError(f"eta entries must be finite and >= 0, got {value}")
    return cfg


def parse_config(path: str | Path | None = None,
                 overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Build a configuration from an optional file plus flag overrides.

    File syntax: one ``key = value`` per line, blank lines and ``#`` comments
    ignored. Empty input yields the full default configuration. Overrides
    (flag strings, pre-split by the CLI) win over file values.
    """
    values: dict = {}
    provided: set[str] = set()
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
            key, _, raw = stripped.partition("=")
            key = key.strip()
            _set_key(values, key, raw, f"(line {lineno})")
            provided.add(key)
    for key, raw in (overrides or {}).items():
        _set_key(values, key, raw, "(flag)")
        provided.add(key)
    return _validated(values, frozenset(provided))


def resolve_mus(entries, mu_max: float) -> list[float]:
    """Turn (coefficient, relative) pairs into absolute step-sizes."""
    return [coeff * mu_max if relative else coeff for coeff, relative in entries]


def _fmt(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def db10(x: float) -> float:
    """Power decibels, 10 log10(x); zero maps to -inf."""
    return 10.0 * math.log10(x) if x > 0 else float("-inf")


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _auto_iters(model, mu: float, window: int) -> int:
    """Iteration budget: twice the theory convergence point, window appended.

    Guarantees the trailing window sits entirely in the converged region.
    Capped at AUTO_ITER_CAP as a sanity bound.
    """
    n_conv = iterations_to_steady_state(model, mu)
    return min(max(2 * n_conv, n_conv + window, window), AUTO_ITER_CAP)


def _scenario_model(config: ExperimentConfig, eta: float):
    spec = random_scenario(config.seed, config.L, config.K, eta=eta)
    return spec, derive_model(spec)


def run_fig1(config: ExperimentConfig) -> list[Path]:
    """Transient MSD curves, one CSV per step-size.

    Columns: iter, msd_theory, msd_empirical, msd_theory_db, msd_empirical_db.
    All step-sizes share one iteration horizon (the slowest one dictates it)
    so the files plot on a common axis.
    """
    spec, model = _scenario_model(config, config.eta[0])
    mu_max = stability_max_step(model)
    entries = config.mu if "mu" in config.provided else FIG1_DEFAULT_MU
    mus = resolve_mus(entries, mu_max)
    for mu in mus:
        steady_state_msd(model, mu)  # refuses unstable step-sizes up front

    window = min(config.ss_window, config.iters) if config.iters is not None else config.ss_window
    if config.iters is not None:
        iters = config.iters
        window = min(window, iters)
    else:
        iters = max(_auto_iters(model, mu, window) for mu in mus)

    outdir = Path(config.outdir)
    paths = []
    for mu in mus:
        theory = transient_msd_curve(model, model.d0, mu, iters)
        stats = ensemble_msd_curve(
            spec, model, mu,
            RunConfig(runs=config.runs, iters=iters, ss_window=min(window, iters),
                      seed=config.seed))
        rows = [
            (n, theory[n], stats.msd[n], db10(theory[n]), db10(stats.msd[n]))
            for n in range(iters + 1)
        ]
        path = outdir / f"fig1_mu_{mu:.6g}.csv"
        _write_csv(path, ["iter", "msd_theory", "msd_empirical", "msd_theory_db",
                          "msd_empirical_db"], rows)
        paths.append(path)
    return paths


def run_fig2(config: ExperimentConfig) -> Path:
    """Steady-state MSD over a noise-variance sweep.

    Columns: eta, mu, ssmsd_theory, ssmsd_empirical, ssmsd_theory_db,
    ssmsd_empirical_db.
    """
    etas = config.eta if "eta" in config.provided else FIG2_DEFAULT_ETA
    mu_entries = config.mu if "mu" in config.provided else FIG2_DEFAULT_MU

    rows = []
    for eta in etas:
        spec, model = _scenario_model(config, eta)
        mu_max = stability_max_step(model)
        for mu in resolve_mus(mu_entries, mu_max):
            theory = steady_state_msd(model, mu)
            if config.iters is not None:
                iters = config.iters
            else:
                iters = _auto_iters(model, mu, config.ss_window)
            window = min(config.ss_window, iters)
            stats = ensemble_msd_curve(
                spec, model, mu,
                RunConfig(runs=config.runs, iters=iters, ss_window=window, seed=config.seed))
            rows.append((eta, mu, theory, stats.msd_ss, db10(theory), db10(stats.msd_ss)))

    path = Path(config.outdir) / "fig2.csv"
    _write_csv(path, ["eta", "mu", "ssmsd_theory", "ssmsd_empirical",
                      "ssmsd_theory_db", "ssmsd_empirical_db"], rows)
    return path


def _fig3_window(config: ExperimentConfig, mu: float, mu_max: float) -> int:
    """Trailing window for misadjustment cells, widened at small step-sizes.

    The excess error being estimated scales with mu while its estimator
    noise does not, so the window grows as mu shrinks (up to a fixed factor).
    """
    base = config.ss_window
    if base == 0 or mu <= 0:
        return base
    scaled = int(round(base * FIG3_WINDOW_SCALE_REFERENCE * mu_max / mu))
    return min(max(base, scaled), FIG3_WINDOW_MAX_FACTOR * base)


def run_fig3(config: ExperimentConfig) -> Path:
    """Steady-state misadjustment over a step-size sweep.

    Columns: mu, zeta_direct, zeta_eigen, zeta_min, zeta_max, zeta_empirical,
    valid. Rows where a closed form leaves its validity domain carry valid=0
    and nan in the affected cells.
    """
    spec, model = _scenario_model(config, config.eta[0])
    mu_max = stability_max_step(model)
    entries = config.mu if "mu" in config.provided else FIG3_DEFAULT_MU
    mus = resolve_mus(entries, mu_max)

    rows = []
    for mu in mus:
        zeta_direct = misadjustment_direct(model, mu)  # refuses unstable mu
        valid = 1
        try:
            zeta_eigen = misadjustment_eigen(model, mu)
        except ValidityDomainError:
            zeta_eigen, valid = float("nan"), 0
        try:
            zeta_lo, zeta_hi = misadjustment_bounds(model, mu)
        except ValidityDomainError:
            zeta_lo, zeta_hi, valid = float("nan"), float("nan"), 0

        window = _fig3_window(config, mu, mu_max)
        if config.iters is not None:
            iters = config.iters
            window = min(window, iters)
        else:
            iters = _auto_iters(model, mu, window)
        stats = ensemble_msd_curve(
            spec, model, mu,
            RunConfig(runs=config.runs, iters=iters, ss_window=window, seed=config.seed))
        zeta_emp = stats.zeta_emp if stats.zeta_emp is not None else float("nan")
        rows.append((mu, zeta_direct, zeta_eigen, zeta_lo, zeta_hi, zeta_emp, valid))

    path = Path(config.outdir) / "fig3.csv"
    _write_csv(path, ["mu", "zeta_direct", "zeta_eigen", "zeta_min", "zeta_max",
                      "zeta_empirical", "valid"], rows)
    return path


def run_custom(config: ExperimentConfig) -> Path:
    """Full eta x mu grid with every steady-state column in one CSV."""
    etas = config.eta
    rows = []
    for eta in etas:
        spec, model = _scenario_model(config, eta)
        mu_max = stability_max_step(model)
        entries = config.mu if "mu" in config.provided else FIG2_DEFAULT_MU
        for mu in resolve_mus(entries, mu_max):
            theory = steady_state_msd(model, mu)
            zeta_direct = misadjustment_direct(model, mu)
            valid = 1
            try:
                zeta_eigen = misadjustment_eigen(model, mu)
            except ValidityDomainError:
                zeta_eigen, valid = float("nan"), 0
            try:
                zeta_lo, zeta_hi = misadjustment_bounds(model, mu)
            except ValidityDomainError:
                zeta_lo, zeta_hi, valid = float("nan"), float("nan"), 0
            window = _fig3_window(config, mu, mu_max)
            if config.iters is not None:
                iters = config.iters
                window = min(window, iters)
            else:
                iters = _auto_iters(model, mu, window)
            stats = ensemble_msd_curve(
                spec, model, mu,
                RunConfig(runs=config.runs, iters=iters, ss_window=window, seed=config.seed))
            zeta_emp = stats.zeta_emp if stats.zeta_emp is not None else float("nan")
            rows.append((eta, mu, theory, stats.msd_ss, db10(theory), db10(stats.msd_ss),
                         zeta_direct, zeta_eigen, zeta_lo, zeta_hi, zeta_emp, valid))

    path = Path(config.outdir) / "custom.csv"
    _write_csv(path, ["eta", "mu", "ssmsd_theory", "ssmsd_empirical", "ssmsd_theory_db",
                      "ssmsd_empirical_db", "zeta_direct", "zeta_eigen", "zeta_min",
                      "zeta_max", "zeta_empirical", "valid"], rows)
    return path


def run_validate(config: ExperimentConfig, out=print) -> dict:
    """Print derived-model diagnostics for the configured scenario."""
    spec, model = _scenario_model(config, config.eta[0])
    mu_max = stability_max_step(model)
    d0 = model.d0
    info = {
        "L": spec.L,
        "K": spec.K,
        "seed": config.seed,
        "eta": spec.eta,
        "mu_max": mu_max,
        "lambdas": list(map(float, model.lambdas)),
        "trace_Z": float(model.Z.trace()),
        "bias_power": float(model.e @ spec.R @ model.e),
        "minimum_mse": minimum_mse(model),
        "initial_msd": float(d0 @ d0),
    }
    out(f"scenario: L={info['L']} K={info['K']} seed={info['seed']} eta={info['eta']:g}")
    out(f"mu_max               = {info['mu_max']:.10g}")
    out("nonzero eigenvalues  = " + ", ".join(f"{v:.10g}" for v in info["lambdas"]))
    out(f"trace of Z           = {info['trace_Z']:.10g}")
    out(f"bias power e'Re      = {info['bias_power']:.10g}")
    out(f"minimum MSE          = {info['minimum_mse']:.10g}")
    out(f"initial MSD ||q-g||^2 = {info['initial_msd']:.10g}")
    return info
