"""Small dense real-matrix toolkit used throughout the package.

Thin, contract-checked wrappers around numpy/LAPACK: Kronecker product,
column-stacking vectorization, symmetric eigendecomposition, Cholesky
square root, and a guarded linear solve. Everything is float64 and pure;
no function mutates its inputs.

Vectorization is column-major throughout: ``vec_of`` stacks columns, and
the identity vec(A B C) = (C^T kron A) vec(B) holds with that convention.
"""

from __future__ import annotations

import numpy as np

from .errors import DefinitenessError, ShapeError, SingularMatrixError, SymmetryError

#: relative Frobenius tolerance accepted when checking symmetry
SYMMETRY_RTOL = 1e-10

#: condition-number estimate above which lin_solve refuses to proceed
CONDITION_LIMIT = 1e12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float64 array, raising on violations."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ShapeError(f"{name}: expected a 2-D array, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name}: empty dimension in shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError(f"{name}: contains non-finite entries")
    return m


def as_vector(b, name: str = "vector") -> np.ndarray:
    """Coerce ``b`` to a finite 1-D float64 array."""
    v = np.asarray(b, dtype=float).reshape(-1)
    if v.size < 1:
        raise ShapeError(f"{name}: empty vector")
    if not np.all(np.isfinite(v)):
        raise ShapeError(f"{name}: contains non-finite entries")
    return v


def kron(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is a[i, j] * b."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def vec_of(m) -> np.ndarray:
    """Stack the columns of ``m`` into one long vector."""
    return as_matrix(m, "m").flatten(order="F")


def unvec(v, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec_of`: reshape a vector back into a rows-by-cols matrix."""
    v = as_vector(v, "v")
    if v.size != rows * cols:
        raise ShapeError(f"unvec: length {v.size} does not match {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def _check_symmetric(s: np.ndarray, name: str) -> None:
    scale = np.linalg.norm(s)
    gap = np.linalg.norm(s - s.T)
    if gap > SYMMETRY_RTOL * max(scale, 1e-300):
        raise SymmetryError(f"{name}: asymmetry {gap:.3e} exceeds {SYMMETRY_RTOL:.0e} relative")


def sym_eig(s) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    s : array_like
        Square symmetric matrix (within ``SYMMETRY_RTOL`` relative).

    Returns
    -------
    eigenvalues : ndarray
        Sorted descending.
    eigenvectors : ndarray
        Orthonormal, column k belonging to eigenvalue k.
    """
    s = as_matrix(s, "s")
    if s.shape[0] != s.shape[1]:
        raise ShapeError(f"sym_eig: matrix is {s.shape[0]}x{s.shape[1]}, not square")
    _check_symmetric(s, "sym_eig")
    w, v = np.linalg.eigh(s)
    return w[::-1].copy(), v[:, ::-1].copy()


def spd_sqrt(s) -> np.ndarray:
    """Lower-triangular Cholesky factor G of an SPD matrix, G @ G.T = s."""
    s = as_matrix(s, "s")
    if s.shape[0] != s.shape[1]:
        raise ShapeError(f"spd_sqrt: matrix is {s.shape[0]}x{s.shape[1]}, not square")
    _check_symmetric(s, "spd_sqrt")
    try:
        return np.linalg.cholesky(s)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError(f"spd_sqrt: matrix is not positive-definite ({exc})") from exc


def lin_solve(a, b) -> np.ndarray:
    """Solve a @ x = b for square, well-conditioned a.

    Refuses matrices whose 2-norm condition estimate exceeds
    ``CONDITION_LIMIT`` instead of returning garbage silently.
    """
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"lin_solve: matrix is {a.shape[0]}x{a.shape[1]}, not square")
    b = as_vector(b, "b")
    if b.size != a.shape[0]:
        raise ShapeError(f"lin_solve: rhs length {b.size} does not match order {a.shape[0]}")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularMatrixError(f"lin_solve: condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e}")
    return np.linalg.solve(a, b)


def solve_columns(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Like :func:`lin_solve` but for a matrix right-hand side (column-wise)."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"solve_columns: matrix is {a.shape[0]}x{a.shape[1]}, not square")
    if b.shape[0] != a.shape[0]:
        raise ShapeError(f"solve_columns: rhs has {b.shape[0]} rows, expected {a.shape[0]}")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularMatrixError(f"solve_columns: condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e}")
    return np.linalg.solve(a, b)


def spectral_radius(m) -> float:
    """Largest eigenvalue magnitude of a (possibly nonsymmetric) square matrix."""
    m = as_matrix(m, "m")
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"spectral_radius: matrix is {m.shape[0]}x{m.shape[1]}, not square")
    return float(np.abs(np.linalg.eigvals(m)).max())
