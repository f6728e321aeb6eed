"""The constrained LMS adaptive filter.

One iteration takes a gradient step on the instantaneous squared error and
re-projects onto the constraint set:

    w_new = P (w + mu * (y - w^T x) x) + q

so every visited weight vector satisfies C^T w = f up to rounding. The filter
is initialized at the minimum-norm feasible point q, which makes the initial
deviation from the optimum, q - g, available in closed form to the theory
module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DataError
from .scenario import DerivedModel

#: any weight magnitude beyond this marks a run as diverged
DIVERGENCE_LIMIT = 1e100


@dataclass(frozen=True)
class Sample:
    """One input/output observation; ``v`` is the noise actually drawn, kept for diagnostics."""

    x: np.ndarray
    y: float
    v: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float).reshape(-1))
        object.__setattr__(self, "y", float(self.y))


@dataclass(frozen=True)
class FilterState:
    """Adaptive weight vector and iteration counter."""

    w: np.ndarray
    n: int = 0

    def __post_init__(self):
        w = np.array(self.w, dtype=float).reshape(-1)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class FilterRun:
    """Squared deviations ||w_n - g||^2 of one run, truncated if it diverged."""

    deviations: np.ndarray
    diverged: bool = False
    diverged_at: int | None = None


def init_state(model: DerivedModel) -> FilterState:
    """Start at the minimum-norm feasible point q (deterministic and feasible)."""
    return FilterState(w=model.q, n=0)


def clms_step(state: FilterState, sample: Sample, mu: float, model: DerivedModel) -> FilterState:
    """Advance the filter by one observation.

    Computes the update exactly in the project-after-gradient-step form; the
    algebraically equivalent deviation-space form lives in
    :func:`deviation_step` and is only used to cross-check this one.
    """
    if mu < 0:
        raise ArgumentError(f"step-size must be >= 0, got {mu}")
    x, y = sample.x, sample.y
    if x.size != state.w.size:
        raise ArgumentError(f"input length {x.size} does not match filter order {state.w.size}")
    if not (np.all(np.isfinite(x)) and np.isfinite(y)):
        raise DataError("sample contains non-finite values")
    err = y - state.w @ x
    w_new = model.P @ (state.w + mu * err * x) + model.q
    return FilterState(w=w_new, n=state.n + 1)


def deviation_step(d: np.ndarray, x: np.ndarray, v: float, mu: float, model: DerivedModel) -> np.ndarray:
    """One update expressed directly on the deviation d = w - g.

        d_new = (I - mu P x x^T P) d + mu P x x^T e + mu v P x

    Equivalent to :func:`clms_step` for feasible w; kept as an independent
    evaluation path for the step-equivalence check.
    """
    px = model.P @ x
    return d - mu * px * (px @ d) + mu * px * (x @ model.e) + mu * v * px


def run_filter(model: DerivedModel, samples, mu: float) -> FilterRun:
    """Run the filter over a sample sequence, recording ||w_n - g||^2 after each step.

    Divergence (any non-finite or absurdly large weight) truncates the
    sequence and flags the run instead of propagating NaNs.
    """
    state = init_state(model)
    out = []
    for i, sample in enumerate(samples, start=1):
        state = clms_step(state, sample, mu, model)
        w = state.w
        if not np.all(np.isfinite(w)) or np.abs(w).max() > DIVERGENCE_LIMIT:
            return FilterRun(np.array(out), diverged=True, diverged_at=i)
        d = w - model.g
        out.append(float(d @ d))
    return FilterRun(np.array(out))
