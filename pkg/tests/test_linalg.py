import numpy as np
import pytest

from clms import kron, lin_solve, spd_sqrt, spectral_radius, sym_eig, unvec, vec_of
from clms.errors import DefinitenessError, ShapeError, SingularMatrixError, SymmetryError


class TestKron:
    def test_identity_blocks(self):
        b = np.array([[1.0, 2.0], [3.0, 4.0]])
        out = kron(np.eye(2), b)
        expect = np.zeros((4, 4))
        expect[:2, :2] = b
        expect[2:, 2:] = b
        assert np.array_equal(out, expect)

    def test_scalar_case(self):
        assert np.array_equal(kron([[2.0]], [[3.0]]), [[6.0]])

    def test_vec_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            a, b, c = (rng.standard_normal((3, 3)) for _ in range(3))
            lhs = kron(c.T, a) @ vec_of(b)
            rhs = vec_of(a @ b @ c)
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_mixed_product(self):
        rng = np.random.default_rng(8)
        for _ in range(5):
            a, b, c, d = (rng.standard_normal((2, 2)) for _ in range(4))
            lhs = kron(a, b) @ kron(c, d)
            rhs = kron(a @ c, b @ d)
            assert np.abs(lhs - rhs).max() < 1e-12


class TestVec:
    def test_definition(self):
        m = np.array([[1.0, 3.0], [2.0, 4.0]])  # columns (1,2) and (3,4)
        assert np.array_equal(vec_of(m), [1.0, 2.0, 3.0, 4.0])

    def test_column_vector_fixed_point(self):
        col = np.array([[1.0], [2.0], [3.0]])
        assert np.array_equal(vec_of(col), [1.0, 2.0, 3.0])

    def test_trace_identity(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4))
        assert abs(np.trace(a.T @ b) - vec_of(b) @ vec_of(a)) < 1e-12

    @pytest.mark.parametrize("shape", [(1, 1), (2, 3), (5, 2), (7, 7)])
    def test_unvec_round_trip(self, shape):
        rng = np.random.default_rng(10)
        m = rng.standard_normal(shape)
        assert np.array_equal(unvec(vec_of(m), *shape), m)


class TestSymEig:
    def test_diagonal(self):
        w, _ = sym_eig(np.diag([3.0, 1.0, 2.0]))
        assert np.array_equal(w, [3.0, 2.0, 1.0])

    def test_identity(self):
        w, _ = sym_eig(np.eye(4))
        assert np.allclose(w, 1.0)

    def test_reconstruction(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((6, 6))
        s = (a + a.T) / 2
        w, v = sym_eig(s)
        assert np.linalg.norm(v @ np.diag(w) @ v.T - s) < 1e-9
        assert np.linalg.norm(v.T @ v - np.eye(6)) < 1e-9
        assert np.all(np.diff(w) <= 0)

    def test_eigenvalue_sum_is_trace(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal((5, 5))
        s = a + a.T
        w, _ = sym_eig(s)
        assert abs(w.sum() - np.trace(s)) < 1e-9 * max(1.0, abs(np.trace(s)))

    def test_rejects_nonsquare(self):
        with pytest.raises(ShapeError):
            sym_eig(np.ones((2, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(SymmetryError):
            sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestSpdSqrt:
    def test_diagonal(self):
        assert np.allclose(spd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_identity(self):
        assert np.array_equal(spd_sqrt(np.eye(5)), np.eye(5))

    def test_reconstruction(self):
        rng = np.random.default_rng(13)
        a = rng.standard_normal((7, 7))
        s = a.T @ a + np.eye(7)
        g = spd_sqrt(s)
        assert np.allclose(g, np.tril(g))
        assert np.linalg.norm(g @ g.T - s) < 1e-10 * np.linalg.norm(s)

    def test_rejects_indefinite(self):
        with pytest.raises(DefinitenessError):
            spd_sqrt(-np.eye(3))


class TestLinSolve:
    def test_identity(self):
        b = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(lin_solve(np.eye(3), b), b)

    def test_diagonal(self):
        assert np.allclose(lin_solve(np.diag([2.0, 4.0]), [2.0, 8.0]), [1.0, 2.0])

    def test_residual_on_large_system(self):
        rng = np.random.default_rng(14)
        a = rng.standard_normal((49, 49)) + 49 * np.eye(49)
        b = rng.standard_normal(49)
        x = lin_solve(a, b)
        assert np.linalg.norm(a @ x - b) / np.linalg.norm(b) < 1e-9

    def test_rejects_singular(self):
        a = np.ones((3, 3))
        with pytest.raises(SingularMatrixError):
            lin_solve(a, np.ones(3))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ShapeError):
            lin_solve(np.eye(3), np.ones(4))
        with pytest.raises(ShapeError):
            lin_solve(np.ones((2, 3)), np.ones(2))


def test_spectral_radius_matches_eigvals():
    rng = np.random.default_rng(15)
    m = rng.standard_normal((8, 8))
    assert spectral_radius(m) == pytest.approx(np.abs(np.linalg.eigvals(m)).max(), rel=1e-12)
