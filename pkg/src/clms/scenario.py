"""Constrained system-identification scenarios and their derived quantities.

A :class:`SystemSpec` fixes the ground truth: a length-L parameter vector h
observed through Gaussian inputs with covariance R and noise variance eta,
while estimates must satisfy K < L linear equality constraints C^T w = f.
:func:`derive_model` turns a spec into everything the closed-form analysis
needs: the constraint projector P, the minimum-norm feasible point q, the
optimal constrained weights g, the bias e = h - g, the projected covariance
Z = P R P, and the nonzero spectrum of Z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, SpecValidationError
from .linalg import solve_columns, sym_eig

#: eigenvalues of Z below this fraction of the largest count as zero
ZERO_EIG_RTOL = 1e-9

#: ridge added to A^T A when generating a random input covariance
COVARIANCE_RIDGE = 0.1


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SystemSpec:
    """Ground-truth problem definition.

    Attributes
    ----------
    L : int
        Filter order (length of h).
    K : int
        Number of equality constraints, 1 <= K < L.
    h : ndarray
        True parameter vector, length L.
    R : ndarray
        Input covariance, L x L symmetric positive-definite.
    eta : float
        Observation noise variance, >= 0.
    C : ndarray
        Constraint matrix, L x K with full column rank.
    f : ndarray
        Constraint values, length K.
    """

    L: int
    K: int
    h: np.ndarray
    R: np.ndarray
    eta: float
    C: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "h", _freeze(np.reshape(self.h, -1)))
        object.__setattr__(self, "R", _freeze(self.R))
        object.__setattr__(self, "C", _freeze(np.reshape(self.C, (-1, self.K))))
        object.__setattr__(self, "f", _freeze(np.reshape(self.f, -1)))


@dataclass(frozen=True)
class DerivedModel:
    """Static quantities derived from a :class:`SystemSpec`.

    ``P`` projects onto the nullspace of C^T, ``q`` is the minimum-norm
    feasible point, ``g`` the optimal constrained weight vector, ``e = h - g``
    the constrained-optimum bias, ``Z = P R P`` the projected covariance and
    ``lambdas`` its L - K nonzero eigenvalues in descending order.
    """

    spec: SystemSpec
    P: np.ndarray
    q: np.ndarray
    g: np.ndarray
    e: np.ndarray
    Z: np.ndarray
    lambdas: np.ndarray

    def __post_init__(self):
        for name in ("P", "q", "g", "e", "Z", "lambdas"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    @property
    def d0(self) -> np.ndarray:
        """Initial deviation q - g of a filter started at the feasible point q."""
        return self.q - self.g


@dataclass(frozen=True)
class Violation:
    """One failed spec invariant, with the measured residual."""

    invariant: str
    residual: float
    detail: str = ""

    def __str__(self):
        msg = f"{self.invariant} (residual {self.residual:.3e})"
        return f"{msg}: {self.detail}" if self.detail else msg


def validate_spec(spec: SystemSpec) -> list[Violation]:
    """Check every SystemSpec invariant; an empty list means the spec is valid.

    Violations are data, not exceptions: each entry names the invariant and
    carries the measured residual so callers can report precisely.
    """
    out: list[Violation] = []
    L, K = spec.L, spec.K
    if K < 1:
        out.append(Violation("K >= 1", float(1 - K), f"K={K}"))
    if not K < L:
        out.append(Violation("K < L", float(K - L + 1), f"K={K}, L={L}"))
    for name, arr, shape in (
        ("h", spec.h, (L,)),
        ("R", spec.R, (L, L)),
        ("C", spec.C, (L, max(K, 1))),
        ("f", spec.f, (max(K, 1),)),
    ):
        if arr.shape != shape:
            out.append(Violation(f"{name} shape", 0.0, f"got {arr.shape}, expected {shape}"))
            return out  # later checks assume consistent shapes
        if not np.all(np.isfinite(arr)):
            out.append(Violation(f"{name} finite", float(np.sum(~np.isfinite(arr)))))
    if not np.isfinite(spec.eta) or spec.eta < 0:
        out.append(Violation("eta >= 0", float(spec.eta)))
    sym_gap = float(np.linalg.norm(spec.R - spec.R.T))
    if sym_gap > 1e-10 * max(1.0, float(np.linalg.norm(spec.R))):
        out.append(Violation("R symmetric", sym_gap))
    else:
        min_eig = float(np.linalg.eigvalsh(spec.R).min())
        if min_eig <= 0:
            out.append(Violation("R positive-definite", min_eig, f"most negative eigenvalue {min_eig:.6e}"))
    svals = np.linalg.svd(spec.C, compute_uv=False)
    rank = int(np.sum(svals > svals.max() * max(L, K) * np.finfo(float).eps)) if svals.size else 0
    if rank < K:
        out.append(Violation("C full column rank", float(K - rank), f"rank {rank} < K={K}"))
    return out


def derive_model(spec: SystemSpec) -> DerivedModel:
    """Derive P, q, g, e, Z and the nonzero spectrum of Z from a valid spec.

    All matrix inverses are evaluated as linear solves against the needed
    right-hand sides; nothing is inverted explicitly.

    Raises
    ------
    SpecValidationError
        If the spec violates any of its invariants.
    """
    violations = validate_spec(spec)
    if violations:
        raise SpecValidationError(violations)

    L, K = spec.L, spec.K
    C, R, h, f = spec.C, spec.R, spec.h, spec.f

    ctc = C.T @ C
    P = np.eye(L) - C @ solve_columns(ctc, C.T)
    q = C @ np.linalg.solve(ctc, f)

    # g = h + R^{-1} C (C^T R^{-1} C)^{-1} (f - C^T h), via two solves
    rinv_c = solve_columns(R, C)
    g = h + rinv_c @ np.linalg.solve(C.T @ rinv_c, f - C.T @ h)

    Z = P @ R @ P
    eigvals, _ = sym_eig(Z)
    n_zero = int(np.sum(eigvals < ZERO_EIG_RTOL * eigvals[0]))
    if n_zero != K:
        raise SpecValidationError(
            [Violation("Z spectrum split K/(L-K)", float(n_zero - K),
                       f"{n_zero} near-zero eigenvalues, expected {K}")]
        )
    return DerivedModel(spec=spec, P=P, q=q, g=g, e=h - g, Z=Z, lambdas=eigvals[: L - K])


def random_scenario(seed: int, L: int, K: int, eta: float = 1e-2) -> SystemSpec:
    """Generate a reproducible random scenario.

    The construction is deterministic in ``seed`` and normalized the way the
    experiments expect: unit-energy h, tr(R) = L, full-rank C and unit-norm f.
    R is built as A^T A + 0.1 I from a standard-Gaussian A, then rescaled,
    which guarantees positive-definiteness with a non-trivial eigenvalue
    spread.

    Draw order (h, A, C, f) is part of the reproducibility contract; changing
    it would silently re-randomize every published experiment.
    """
    if not (1 <= K < L):
        raise ArgumentError(f"need 1 <= K < L, got L={L}, K={K}")
    if eta < 0 or not np.isfinite(eta):
        raise ArgumentError(f"noise variance must be finite and >= 0, got {eta}")
    rng = np.random.default_rng(seed)

    h = rng.standard_normal(L)
    h /= np.linalg.norm(h)

    A = rng.standard_normal((L, L))
    R = A.T @ A + COVARIANCE_RIDGE * np.eye(L)
    R *= L / np.trace(R)

    C = rng.standard_normal((L, K))
    while np.linalg.matrix_rank(C) < K:  # probability-zero fallback, kept for safety
        C = rng.standard_normal((L, K))

    f = rng.standard_normal(K)
    f /= np.linalg.norm(f)

    return SystemSpec(L=L, K=K, h=h, R=R, eta=eta, C=C, f=f)
