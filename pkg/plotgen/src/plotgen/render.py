"""Render experiment CSVs into figures, headlessly and deterministically.

Three figure kinds, one per CSV schema emitted by the clms experiment
runner:

* ``msd-vs-iter``: MSD learning curves, theory as lines and ensemble
  estimates as markers, dB versus iteration; one curve pair per input file.
* ``ssmsd-vs-eta``: steady-state MSD versus noise variance, log-scaled
  abscissa, dB ordinate, one curve pair per step-size found in the file.
* ``zeta-vs-mu``: steady-state misadjustment versus step-size with both
  closed forms, the classical bounds, and the empirical estimate overlaid
  on linear axes.

The renderer is read-only with respect to its inputs and draws only
declared CSV columns; rendering the same job twice produces byte-identical
images on a pinned Agg backend.
"""

from __future__ import annotations

import csv
import glob
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

KINDS = ("msd-vs-iter", "ssmsd-vs-eta", "zeta-vs-mu")

_SCHEMAS = {
    "msd-vs-iter": ["iter", "msd_theory", "msd_empirical", "msd_theory_db",
                    "msd_empirical_db"],
    "ssmsd-vs-eta": ["eta", "mu", "ssmsd_theory", "ssmsd_empirical",
                     "ssmsd_theory_db", "ssmsd_empirical_db"],
    "zeta-vs-mu": ["mu", "zeta_direct", "zeta_eigen", "zeta_min", "zeta_max",
                   "zeta_empirical", "valid"],
}

_DPI = 130
_METADATA = {"Software": "plotgen"}


class PlotgenError(Exception):
    """Base class for renderer errors."""


class SchemaError(PlotgenError):
    """Input CSV is missing a required column."""


class DataError(PlotgenError):
    """Input CSV has no usable rows, or no input matched at all."""


@dataclass(frozen=True)
class FigureJob:
    """One rendering task: input CSVs, figure kind, output image path."""

    inputs: tuple[Path, ...]
    kind: str
    output: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotgenError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))


@dataclass
class RenderReport:
    """What a render actually drew, for verification."""

    output: Path
    columns_drawn: dict[str, list[str]] = field(default_factory=dict)


def job_from_glob(pattern: str, kind: str, output) -> FigureJob:
    """Build a job from a shell glob (or a literal path), sorted for determinism."""
    matches = sorted(glob.glob(pattern))
    if not matches:
        raise DataError(f"no input files match {pattern!r}")
    return FigureJob(inputs=tuple(Path(m) for m in matches), kind=kind, output=output)


def _read_table(path: Path, kind: str) -> dict[str, list[float]]:
    required = _SCHEMAS[kind]
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for column in required:
                if column not in header:
                    raise SchemaError(f"{path}: missing required column {column!r}")
            rows = list(reader)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: no data rows")
    table: dict[str, list[float]] = {c: [] for c in required}
    for row in rows:
        for column in required:
            table[column].append(float(row[column]))
    return table


def _mu_label(path: Path) -> str:
    match = re.search(r"mu_([0-9eE.+-]+?)(?:\.csv)?$", path.name)
    return f"mu = {match.group(1)}" if match else path.stem


def _finite_mask(*cols):
    return [all(math.isfinite(c[i]) for c in cols) for i in range(len(cols[0]))]


def _masked(col, mask):
    return [v for v, keep in zip(col, mask) if keep]


def _render_msd_vs_iter(job: FigureJob, ax, report: RenderReport) -> None:
    for path in job.inputs:
        table = _read_table(path, job.kind)
        label = _mu_label(path)
        # markers thinned so long runs stay readable; every point for short ones
        step = max(1, len(table["iter"]) // 60)
        ax.plot(table["iter"], table["msd_theory_db"], lw=1.4, label=f"theory, {label}")
        ax.plot(table["iter"][::step], table["msd_empirical_db"][::step],
                linestyle="none", marker="o", ms=3.2, mfc="none", label=f"ensemble, {label}")
        report.columns_drawn[str(path)] = ["iter", "msd_theory_db", "msd_empirical_db",
                                           "msd_theory", "msd_empirical"]
    ax.set_xlabel("iteration")
    ax.set_ylabel("MSD (dB)")
    ax.set_title("MSD learning curves: theory vs ensemble")


def _render_ssmsd_vs_eta(job: FigureJob, ax, report: RenderReport) -> None:
    for path in job.inputs:
        table = _read_table(path, job.kind)
        mus = sorted(set(table["mu"]))
        for mu in mus:
            idx = [i for i, v in enumerate(table["mu"]) if v == mu]
            etas = [table["eta"][i] for i in idx]
            theory = [table["ssmsd_theory_db"][i] for i in idx]
            empirical = [table["ssmsd_empirical_db"][i] for i in idx]
            order = sorted(range(len(etas)), key=lambda i: etas[i])
            ax.plot([etas[i] for i in order], [theory[i] for i in order],
                    lw=1.4, label=f"theory, mu = {mu:.4g}")
            ax.plot([etas[i] for i in order], [empirical[i] for i in order],
                    linestyle="none", marker="s", ms=4.5, mfc="none",
                    label=f"ensemble, mu = {mu:.4g}")
        report.columns_drawn[str(path)] = ["eta", "mu", "ssmsd_theory_db",
                                           "ssmsd_empirical_db", "ssmsd_theory",
                                           "ssmsd_empirical"]
    ax.set_xscale("log")
    ax.set_xlabel("noise variance")
    ax.set_ylabel("steady-state MSD (dB)")
    ax.set_title("Steady-state MSD vs noise variance")


def _render_zeta_vs_mu(job: FigureJob, ax, report: RenderReport) -> None:
    for path in job.inputs:
        table = _read_table(path, job.kind)
        mu = table["mu"]
        valid = [v >= 0.5 for v in table["valid"]]
        series = [
            ("zeta_direct", dict(lw=1.6, label="propagator form")),
            ("zeta_eigen", dict(lw=1.2, linestyle="--", label="spectral form")),
            ("zeta_min", dict(lw=1.0, linestyle=":", label="lower bound")),
            ("zeta_max", dict(lw=1.0, linestyle=":", label="upper bound")),
        ]
        for column, style in series:
            mask = [ok and math.isfinite(v) for ok, v in zip(valid, table[column])]
            ax.plot(_masked(mu, mask), _masked(table[column], mask), **style)
        emp_mask = _finite_mask(table["zeta_empirical"])
        ax.plot(_masked(mu, emp_mask), _masked(table["zeta_empirical"], emp_mask),
                linestyle="none", marker="o", ms=4.5, mfc="none", label="ensemble")
        report.columns_drawn[str(path)] = ["mu", "zeta_direct", "zeta_eigen", "zeta_min",
                                           "zeta_max", "zeta_empirical", "valid"]
    ax.set_xlabel("step-size")
    ax.set_ylabel("misadjustment")
    ax.set_title("Steady-state misadjustment vs step-size")


def render(job: FigureJob) -> RenderReport:
    """Render one job to its output path; returns what was drawn."""
    for path in job.inputs:
        if not path.exists():
            raise DataError(f"input file does not exist: {path}")
    report = RenderReport(output=job.output)
    fig = Figure(figsize=(7.2, 4.8))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    if job.kind == "msd-vs-iter":
        _render_msd_vs_iter(job, ax, report)
    elif job.kind == "ssmsd-vs-eta":
        _render_ssmsd_vs_eta(job, ax, report)
    else:
        _render_zeta_vs_mu(job, ax, report)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7, ncols=2)
    job.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(job.output, dpi=_DPI, metadata=_METADATA)
    return report
