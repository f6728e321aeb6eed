import numpy as np
import pytest

from clms import SystemSpec, derive_model, random_scenario, validate_spec
from clms.errors import ArgumentError, SpecValidationError

from conftest import make_model, make_spec


def axis_spec(c=2.5):
    """L=3 with the constraint w[0] = c."""
    return SystemSpec(
        L=3, K=1,
        h=np.array([0.3, -0.4, 0.5]),
        R=np.diag([1.0, 2.0, 3.0]),
        eta=1e-2,
        C=np.array([[1.0], [0.0], [0.0]]),
        f=np.array([c]),
    )


class TestDeriveModel:
    def test_axis_aligned_constraint(self):
        model = derive_model(axis_spec(c=2.5))
        assert np.allclose(model.P, np.diag([0.0, 1.0, 1.0]), atol=1e-14)
        assert np.allclose(model.q, [2.5, 0.0, 0.0], atol=1e-14)

    def test_feasible_optimum_gives_zero_bias(self):
        base = make_spec(3)
        spec = SystemSpec(L=base.L, K=base.K, h=base.h, R=base.R, eta=base.eta,
                          C=base.C, f=base.C.T @ base.h)
        model = derive_model(spec)
        assert np.abs(model.g - spec.h).max() < 1e-10
        assert np.abs(model.e).max() < 1e-10

    def test_matches_kkt_saddle_point_solve(self):
        spec = make_spec(21, L=7, K=3)
        model = derive_model(spec)
        # independent route: stationarity of min (w-h)' R (w-h) s.t. C'w = f
        L, K = spec.L, spec.K
        kkt = np.zeros((L + K, L + K))
        kkt[:L, :L] = spec.R
        kkt[:L, L:] = spec.C
        kkt[L:, :L] = spec.C.T
        rhs = np.concatenate([spec.R @ spec.h, spec.f])
        w_opt = np.linalg.solve(kkt, rhs)[:L]
        assert np.abs(model.g - w_opt).max() < 1e-9

    @pytest.mark.parametrize("seed", range(8))
    def test_structural_invariants(self, seed):
        spec = make_spec(seed)
        model = derive_model(spec)
        P, Z = model.P, model.Z
        assert np.linalg.norm(P @ P - P) < 1e-10
        assert np.linalg.norm(P @ spec.C) < 1e-10
        assert np.abs(spec.C.T @ model.g - spec.f).max() < 1e-10
        assert np.abs(spec.C.T @ model.q - spec.f).max() < 1e-10
        assert np.linalg.norm(P @ spec.R @ model.e) < 1e-10
        eig = np.linalg.eigvalsh(Z)[::-1]
        n_zero = np.sum(eig < 1e-9 * eig[0])
        assert n_zero == spec.K
        assert model.lambdas.shape == (spec.L - spec.K,)

    def test_g_is_constrained_optimum(self):
        spec = make_spec(5)
        model = derive_model(spec)
        rng = np.random.default_rng(99)
        best = (model.g - spec.h) @ spec.R @ (model.g - spec.h)
        for _ in range(20):
            w = model.g + model.P @ rng.standard_normal(spec.L)
            value = (w - spec.h) @ spec.R @ (w - spec.h)
            assert value >= best - 1e-9

    def test_rejects_rank_deficient_constraints(self):
        base = make_spec(4)
        C = base.C.copy()
        C[:, 1] = C[:, 0]  # duplicate column kills the rank
        spec = SystemSpec(L=base.L, K=base.K, h=base.h, R=base.R, eta=base.eta,
                          C=C, f=base.f)
        with pytest.raises(SpecValidationError, match="full column rank"):
            derive_model(spec)


class TestRandomScenario:
    def test_deterministic_in_seed(self):
        a = random_scenario(123, 7, 3)
        b = random_scenario(123, 7, 3)
        for name in ("h", "R", "C", "f"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_normalizations(self):
        spec = random_scenario(1, 7, 3)
        assert validate_spec(spec) == []
        assert abs(np.trace(spec.R) - 7.0) < 1e-12
        assert abs(np.linalg.norm(spec.h) - 1.0) < 1e-12
        assert abs(np.linalg.norm(spec.f) - 1.0) < 1e-12

    def test_validation_sweep(self):
        for seed in range(100):
            assert validate_spec(random_scenario(seed, 7, 3)) == []

    def test_eta_does_not_change_draws(self):
        a = random_scenario(11, 7, 3, eta=1e-2)
        b = random_scenario(11, 7, 3, eta=1e-1)
        assert np.array_equal(a.R, b.R) and np.array_equal(a.h, b.h)
        assert a.eta != b.eta

    @pytest.mark.parametrize("L,K", [(3, 3), (3, 4), (2, 0), (1, 1)])
    def test_rejects_bad_sizes(self, L, K):
        with pytest.raises(ArgumentError):
            random_scenario(0, L, K)


class TestValidateSpec:
    def test_valid_spec_is_clean(self):
        assert validate_spec(make_spec(17)) == []

    def test_k_equal_l_is_flagged(self):
        base = make_spec(2, L=7, K=3)
        bad = SystemSpec(L=3, K=3, h=base.h[:3], R=base.R[:3, :3], eta=base.eta,
                         C=base.C[:3, :3], f=np.ones(3))
        names = [v.invariant for v in validate_spec(bad)]
        assert "K < L" in names

    def test_indefinite_r_reports_most_negative_eigenvalue(self):
        base = make_spec(2)
        bad = SystemSpec(L=base.L, K=base.K, h=base.h, R=-np.eye(base.L),
                         eta=base.eta, C=base.C, f=base.f)
        hits = [v for v in validate_spec(bad) if v.invariant == "R positive-definite"]
        assert len(hits) == 1
        assert hits[0].residual == pytest.approx(-1.0)


def test_model_d0_property(default_model):
    assert np.array_equal(default_model.d0, default_model.q - default_model.g)


def test_make_model_helper_matches_direct_path():
    direct = derive_model(random_scenario(6, 7, 3))
    helper = make_model(6, 7, 3)
    assert np.array_equal(direct.P, helper.P)
