"""Acceptance: render all three figure kinds from CSVs produced by the
experiment CLI itself, drawing every declared column."""

import subprocess
import sys

import pytest

from plotgen import job_from_glob, render

EXPECTED_COLUMNS = {
    "msd-vs-iter": {"iter", "msd_theory", "msd_empirical", "msd_theory_db",
                    "msd_empirical_db"},
    "ssmsd-vs-eta": {"eta", "mu", "ssmsd_theory", "ssmsd_empirical",
                     "ssmsd_theory_db", "ssmsd_empirical_db"},
    "zeta-vs-mu": {"mu", "zeta_direct", "zeta_eigen", "zeta_min", "zeta_max",
                   "zeta_empirical", "valid"},
}


@pytest.fixture(scope="module")
def experiment_csvs(tmp_path_factory):
    """Small but real experiment run through the upstream CLI."""
    outdir = tmp_path_factory.mktemp("csv")
    base = ["--runs", "30", "--iters", "80", "--ss-window", "40",
            "--outdir", str(outdir)]
    for figure in ("fig1", "fig2", "fig3"):
        proc = subprocess.run(
            [sys.executable, "-m", "clms.cli", figure, *base],
            capture_output=True, text=True)
        assert proc.returncode == 0, f"{figure}: {proc.stderr}"
    return outdir


def test_criterion_10_renders_every_kind(experiment_csvs, tmp_path):
    jobs = [
        ("msd-vs-iter", "fig1_mu_*.csv", "fig1.png"),
        ("ssmsd-vs-eta", "fig2.csv", "fig2.png"),
        ("zeta-vs-mu", "fig3.csv", "fig3.png"),
    ]
    for kind, pattern, image in jobs:
        job = job_from_glob(str(experiment_csvs / pattern), kind, tmp_path / image)
        report = render(job)
        assert (tmp_path / image).stat().st_size > 0
        for path, drawn in report.columns_drawn.items():
            missing = EXPECTED_COLUMNS[kind] - set(drawn)
            assert not missing, f"{kind}: {path} did not draw {missing}"
    print("[criterion 10] PASS - all three figure kinds rendered from CLI-emitted CSVs")
