import numpy as np
import pytest

from clms import (
    FilterState,
    Sample,
    SystemSpec,
    clms_step,
    derive_model,
    deviation_step,
    init_state,
    run_filter,
    stability_max_step,
    transient_msd_curve,
)
from clms.errors import DataError

from conftest import make_spec


def hand_model():
    """L=2, one constraint pinning w[0] = 1."""
    spec = SystemSpec(L=2, K=1, h=np.array([1.0, 1.0]), R=np.eye(2), eta=0.0,
                      C=np.array([[1.0], [0.0]]), f=np.array([1.0]))
    return spec, derive_model(spec)


class TestInitState:
    def test_axis_aligned(self):
        spec = SystemSpec(L=3, K=1, h=np.array([0.1, 0.2, 0.3]), R=np.eye(3),
                          eta=0.0, C=np.array([[1.0], [0.0], [0.0]]), f=np.array([2.0]))
        state = init_state(derive_model(spec))
        assert np.allclose(state.w, [2.0, 0.0, 0.0], atol=1e-14)
        assert state.n == 0

    def test_feasible_for_random_models(self):
        for seed in range(5):
            spec = make_spec(seed)
            model = derive_model(spec)
            state = init_state(model)
            assert np.abs(spec.C.T @ state.w - spec.f).max() < 1e-12

    def test_initial_deviation_matches_theory_curve_start(self, default_model):
        state = init_state(default_model)
        d0 = state.w - default_model.g
        curve = transient_msd_curve(default_model, default_model.d0, 0.01, 0)
        assert curve[0] == pytest.approx(float(d0 @ d0), rel=1e-12)


class TestClmsStep:
    def test_hand_evaluated_step(self):
        # err = 2 - (1,0)@(1,1) = 1; unprojected (1.1, 0.1); project+shift -> (1, 0.1)
        _, model = hand_model()
        state = init_state(model)
        new = clms_step(state, Sample(x=[1.0, 1.0], y=2.0), 0.1, model)
        assert np.allclose(new.w, [1.0, 0.1], atol=1e-15)
        assert new.n == 1

    def test_zero_step_size_is_fixed_point(self):
        spec = make_spec(3)
        model = derive_model(spec)
        rng = np.random.default_rng(0)
        w = model.q + model.P @ rng.standard_normal(spec.L)  # random feasible point
        state = clms_step(FilterState(w=w), Sample(x=rng.standard_normal(spec.L), y=1.0), 0.0, model)
        assert np.abs(state.w - w).max() < 1e-12

    def test_zero_error_is_fixed_point(self):
        spec = make_spec(4)
        model = derive_model(spec)
        rng = np.random.default_rng(1)
        w = model.q + model.P @ rng.standard_normal(spec.L)
        x = rng.standard_normal(spec.L)
        state = clms_step(FilterState(w=w), Sample(x=x, y=float(w @ x)), 0.2, model)
        assert np.abs(state.w - w).max() < 1e-12

    def test_rejects_non_finite_samples(self, default_model):
        state = init_state(default_model)
        with pytest.raises(DataError):
            clms_step(state, Sample(x=np.full(7, np.nan), y=0.0), 0.1, default_model)
        with pytest.raises(DataError):
            clms_step(state, Sample(x=np.zeros(7), y=float("inf")), 0.1, default_model)


class TestStepEquivalence:
    def test_weight_form_matches_deviation_form(self, default_model):
        # the same update written on w and written on d = w - g must agree
        spec = default_model.spec
        model = default_model
        rng = np.random.default_rng(7)
        mu = 0.05
        worst = 0.0
        for _ in range(300):
            w = model.q + model.P @ rng.standard_normal(spec.L)
            d = w - model.g
            x = rng.standard_normal(spec.L)
            v = float(rng.standard_normal() * 0.1)
            y = float(x @ spec.h + v)
            w_new = clms_step(FilterState(w=w), Sample(x=x, y=y), mu, model).w
            d_new = deviation_step(d, x, v, mu, model)
            worst = max(worst, float(np.abs((w_new - model.g) - d_new).max()))
        assert worst < 1e-10


class TestRunFilter:
    def test_empty_samples(self, default_model):
        out = run_filter(default_model, [], 0.01)
        assert out.deviations.size == 0 and not out.diverged

    def test_constraint_and_projection_invariants(self, default_model):
        spec = default_model.spec
        rng = np.random.default_rng(3)
        mu = 0.3 * stability_max_step(default_model)
        state = init_state(default_model)
        worst_cv = worst_pd = 0.0
        for _ in range(400):
            x = rng.standard_normal(spec.L)
            y = float(x @ spec.h + 0.1 * rng.standard_normal())
            state = clms_step(state, Sample(x=x, y=y), mu, default_model)
            d = state.w - default_model.g
            worst_cv = max(worst_cv, float(np.abs(spec.C.T @ state.w - spec.f).max()))
            worst_pd = max(worst_pd, float(np.abs(default_model.P @ d - d).max()))
        assert worst_cv < 1e-9
        assert worst_pd < 1e-9

    def test_noiseless_feasible_optimum_decays(self):
        base = make_spec(9, eta=0.0)
        spec = SystemSpec(L=base.L, K=base.K, h=base.h, R=base.R, eta=0.0,
                          C=base.C, f=base.C.T @ base.h)  # optimum is feasible: g = h
        model = derive_model(spec)
        rng = np.random.default_rng(11)
        mu = 0.2 * stability_max_step(model)
        samples = []
        G = np.linalg.cholesky(spec.R)
        for _ in range(8000):
            x = G @ rng.standard_normal(spec.L)
            samples.append(Sample(x=x, y=float(x @ spec.h), v=0.0))
        out = run_filter(model, samples, mu)
        assert not out.diverged
        assert out.deviations[-1] < 1e-20

    def test_divergence_flagged(self, default_model):
        spec = default_model.spec
        rng = np.random.default_rng(13)
        mu = 10.0 * stability_max_step(default_model)
        G = np.linalg.cholesky(spec.R)
        samples = (Sample(x=G @ rng.standard_normal(spec.L), y=0.0) for _ in range(10_000))
        out = run_filter(default_model, samples, mu)
        assert out.diverged
        assert out.diverged_at is not None and out.diverged_at <= 10_000
        assert np.all(np.isfinite(out.deviations))
