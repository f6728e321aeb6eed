"""Closed-form mean-square performance of the constrained LMS filter.

Everything here is exact under the standard independence assumptions
(temporally independent zero-mean Gaussian inputs with covariance R,
independent zero-mean Gaussian noise with variance eta):

* a stability range for the step-size from the eigenvalues of Z = P R P,
* the transient mean-square deviation E||w_n - g||^2 for every n,
* its steady-state limit,
* the steady-state misadjustment in two algebraically identical forms,
  plus classical lower/upper bounds.

The engine behind the transient and steady-state expressions is the L^2 x L^2
propagator F that advances vectorized weighting matrices by one iteration of
the weighted variance relation; see :func:`build_F`. Its spectral radius is
the operative mean-square stability gate. Transient curves are computed by
iterating u <- F u (never by forming matrix powers), which is O(n L^4) and
numerically tame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InstabilityError, SingularMatrixError, ValidityDomainError
from .linalg import as_matrix, lin_solve, spectral_radius, unvec, vec_of
from .scenario import DerivedModel


def minimum_mse(model: DerivedModel) -> float:
    """Smallest achievable mean-square a priori error, e^T R e + eta.

    This is the driving power of the deviation recursion and the denominator
    of the misadjustment.
    """
    e = model.e
    return float(e @ model.spec.R @ e + model.spec.eta)


def stability_max_step(model: DerivedModel) -> float:
    """Upper end of the sufficient mean-square stability range:

        mu_max = 2 / (2 lambda_max + tr(Z))

    with lambda_max the largest eigenvalue of Z = P R P. Sufficient, not
    necessarily tight; steady-state evaluators additionally gate on the
    spectral radius of F.
    """
    tr_z = float(np.trace(model.Z))
    return 2.0 / (2.0 * float(model.lambdas[0]) + tr_z)


def recursion_eigenvalues(model: DerivedModel, mu: float) -> np.ndarray:
    """Modes of the unweighted deviation-power recursion.

    For each nonzero eigenvalue lambda_i of Z the recursion matrix
    M = I - 2 mu Z + mu^2 tr(Z) Z + 2 mu^2 Z^2 carries the eigenvalue

        rho_i = 1 - 2 mu lambda_i + mu^2 tr(Z) lambda_i + 2 mu^2 lambda_i^2

    (and a unit eigenvalue for each zero of Z). All rho_i < 1 means the
    recursion contracts.
    """
    if mu <= 0:
        raise ArgumentError(f"step-size must be > 0, got {mu}")
    lam = model.lambdas
    tr_z = float(np.trace(model.Z))
    return 1.0 - 2.0 * mu * lam + mu * mu * tr_z * lam + 2.0 * mu * mu * lam * lam


def fourth_moment(R, P) -> np.ndarray:
    """Gaussian fourth-moment matrix E[x x^T P x x^T] = tr(Z) R + 2 R P R.

    Exact for zero-mean Gaussian x with covariance R (Isserlis factorization
    of the fourth moment) when P is an orthogonal projector, as it always is
    here; idempotence makes tr(P R) equal tr(Z) with Z = P R P.
    """
    R = as_matrix(R, "R")
    P = as_matrix(P, "P")
    if R.shape != P.shape or R.shape[0] != R.shape[1]:
        raise ArgumentError(f"R and P must be equal square shapes, got {R.shape} and {P.shape}")
    tr_z = float(np.trace(P @ R @ P))
    return tr_z * R + 2.0 * (R @ P @ R)


def build_F(model: DerivedModel, mu: float) -> np.ndarray:
    """The L^2 x L^2 weighting propagator.

    F maps vec(S) of a weighting matrix S to vec(T) where T is the weight
    whose expected quadratic form one iteration earlier equals the current
    one under S:

        F = [(I - mu R) P kron (I - mu R) P]
            + mu^2 vec(R) vec(Z)^T + mu^2 (R P kron R P)

    using column-major vectorization throughout.
    """
    if mu < 0:
        raise ArgumentError(f"step-size must be >= 0, got {mu}")
    R, P, Z = model.spec.R, model.P, model.Z
    L = model.spec.L
    B = (np.eye(L) - mu * R) @ P
    RP = R @ P
    return np.kron(B, B) + mu * mu * np.outer(vec_of(R), vec_of(Z)) + mu * mu * np.kron(RP, RP)


def _weighted_sq(b: np.ndarray, weight_vec: np.ndarray, L: int) -> float:
    # ||b||^2 with a vectorized weight: interpret the vector as vec(A), return b^T A b
    return float(b @ unvec(weight_vec, L, L) @ b)


def transient_msd_curve(model: DerivedModel, d0, mu: float, n_iters: int) -> np.ndarray:
    """Exact theoretical MSD curve E||d_n||^2 for n = 0 .. n_iters.

    Parameters
    ----------
    model : DerivedModel
    d0 : array_like
        Deterministic initial deviation; must lie in the range of P.
    mu : float
        Step-size, > 0 (0 allowed: the curve is then constant in the
        noise-free directions).
    n_iters : int
        Last iteration index; the returned array has n_iters + 1 entries.

    The curve is the closed-form

        E||d_n||^2 = ||d_0||^2_{F^n j} + mu^2 (e^T R e + eta) vec(Z)^T sum_{i<n} F^i j

    with j = vec(I), evaluated by iterating u <- F u and accumulating the
    running sum; no matrix powers are ever formed.
    """
    if n_iters < 0:
        raise ArgumentError(f"n_iters must be >= 0, got {n_iters}")
    L = model.spec.L
    d0 = np.asarray(d0, dtype=float).reshape(-1)
    if d0.size != L:
        raise ArgumentError(f"d0 length {d0.size} does not match order {L}")
    proj_gap = float(np.linalg.norm(model.P @ d0 - d0))
    if proj_gap > 1e-6 * max(1.0, float(np.linalg.norm(d0))):
        raise ArgumentError(f"d0 is not in the range of P (residual {proj_gap:.3e})")

    F = build_F(model, mu)
    j = vec_of(np.eye(L))
    vz = vec_of(model.Z)
    drive = mu * mu * minimum_mse(model)

    out = np.empty(n_iters + 1)
    u = j.copy()
    running = np.zeros(L * L)
    for n in range(n_iters + 1):
        out[n] = _weighted_sq(d0, u, L) + drive * float(vz @ running)
        if n == n_iters:
            break
        running += u
        u = F @ u
    return out


def _gate_stable(model: DerivedModel, mu: float, F: np.ndarray) -> None:
    mu_max = stability_max_step(model)
    if not 0 < mu < mu_max:
        raise InstabilityError(
            f"step-size {mu:.6g} outside the stable range (0, {mu_max:.6g})")
    rho = spectral_radius(F)
    if rho >= 1.0:
        raise InstabilityError(
            f"weighting propagator has spectral radius {rho:.6g} >= 1 at mu={mu:.6g} "
            f"(stable range upper bound {mu_max:.6g})")


def steady_state_msd(model: DerivedModel, mu: float) -> float:
    """Steady-state mean-square deviation lim E||d_n||^2.

        mu^2 (e^T R e + eta) vec(Z)^T (I - F)^{-1} vec(I)

    evaluated with a linear solve. Raises InstabilityError outside the
    stable range or when I - F is singular.
    """
    F = build_F(model, mu)
    _gate_stable(model, mu, F)
    L = model.spec.L
    j = vec_of(np.eye(L))
    try:
        x = lin_solve(np.eye(L * L) - F, j)
    except SingularMatrixError as exc:
        raise InstabilityError(f"I - F numerically singular at mu={mu:.6g}: {exc}") from exc
    return mu * mu * minimum_mse(model) * float(vec_of(model.Z) @ x)


def misadjustment_direct(model: DerivedModel, mu: float) -> float:
    """Steady-state misadjustment via the weighting propagator:

        zeta = mu^2 vec(Z)^T (I - F)^{-1} vec(R)
    """
    F = build_F(model, mu)
    _gate_stable(model, mu, F)
    L = model.spec.L
    try:
        x = lin_solve(np.eye(L * L) - F, vec_of(model.spec.R))
    except SingularMatrixError as exc:
        raise InstabilityError(f"I - F numerically singular at mu={mu:.6g}: {exc}") from exc
    return mu * mu * float(vec_of(model.Z) @ x)


def misadjustment_eigen(model: DerivedModel, mu: float) -> float:
    """Steady-state misadjustment from the nonzero spectrum of Z:

        zeta = s / (2 - s),   s = sum_i mu lambda_i / (1 - mu lambda_i)

    Algebraically identical to :func:`misadjustment_direct`; kept as an
    independent evaluation route. Raises ValidityDomainError when its own
    preconditions (mu lambda_i < 1, positive denominator) fail rather than
    extrapolating.
    """
    if mu <= 0:
        raise ArgumentError(f"step-size must be > 0, got {mu}")
    lam = model.lambdas
    if mu * lam[0] >= 1.0:
        raise ValidityDomainError(
            f"mu * lambda_max = {mu * lam[0]:.6g} >= 1; eigenvalue form undefined")
    s = float(np.sum(mu * lam / (1.0 - mu * lam)))
    if s >= 2.0:
        raise ValidityDomainError(f"denominator 2 - {s:.6g} <= 0; eigenvalue form undefined")
    return s / (2.0 - s)


def misadjustment_bounds(model: DerivedModel, mu: float) -> tuple[float, float]:
    """Classical lower/upper misadjustment bounds.

        zeta_min = mu tr(Z) / (2 - mu (tr(Z) + 2 lambda_min))
        zeta_max = mu tr(Z) / (2 - mu (tr(Z) + 2 lambda_max))

    lambda_min is the smallest *nonzero* eigenvalue of Z. Raises
    ValidityDomainError when a denominator is non-positive.
    """
    if mu <= 0:
        raise ArgumentError(f"step-size must be > 0, got {mu}")
    tr_z = float(np.trace(model.Z))
    lam_max = float(model.lambdas[0])
    lam_min = float(model.lambdas[-1])
    den_min = 2.0 - mu * (tr_z + 2.0 * lam_min)
    den_max = 2.0 - mu * (tr_z + 2.0 * lam_max)
    if den_min <= 0 or den_max <= 0:
        raise ValidityDomainError(
            f"bound denominators ({den_min:.6g}, {den_max:.6g}) not positive at mu={mu:.6g}")
    return mu * tr_z / den_min, mu * tr_z / den_max


def iterations_to_steady_state(model: DerivedModel, mu: float, rel_tol: float = 1e-3,
                               limit: int = 200_000) -> int:
    """Smallest n at which the theory curve is within ``rel_tol`` of its limit.

    Used to size Monte Carlo iteration budgets. Walks the transient curve
    incrementally against :func:`steady_state_msd`.
    """
    ss = steady_state_msd(model, mu)
    L = model.spec.L
    F = build_F(model, mu)
    j = vec_of(np.eye(L))
    vz = vec_of(model.Z)
    drive = mu * mu * minimum_mse(model)
    d0 = model.d0

    floor = 1e-24  # absolute fallback when the steady state is exactly zero
    u = j.copy()
    running = np.zeros(L * L)
    for n in range(limit + 1):
        msd_n = _weighted_sq(d0, u, L) + drive * float(vz @ running)
        if ss > floor:
            if abs(msd_n / ss - 1.0) < rel_tol:
                return n
        elif msd_n < floor:
            return n
        running += u
        u = F @ u
    raise InstabilityError(
        f"theory curve did not reach within {rel_tol:.1e} of steady state in {limit} iterations")


@dataclass(frozen=True)
class TheoryPrediction:
    """Per step-size bundle of every closed-form prediction."""

    mu: float
    mu_max: float
    msd_curve: np.ndarray
    msd_ss: float
    zeta_direct: float
    zeta_eigen: float
    zeta_min: float
    zeta_max: float
    stable: bool


def predict(model: DerivedModel, mu: float, n_iters: int) -> TheoryPrediction:
    """Assemble the full prediction bundle for one step-size.

    Raises InstabilityError when mu is outside the stable range, matching
    the behavior of the individual steady-state evaluators.
    """
    mu_max = stability_max_step(model)
    msd_ss = steady_state_msd(model, mu)  # gates stability
    curve = transient_msd_curve(model, model.d0, mu, n_iters)
    return TheoryPrediction(
        mu=mu,
        mu_max=mu_max,
        msd_curve=curve,
        msd_ss=msd_ss,
        zeta_direct=misadjustment_direct(model, mu),
        zeta_eigen=misadjustment_eigen(model, mu),
        zeta_min=misadjustment_bounds(model, mu)[0],
        zeta_max=misadjustment_bounds(model, mu)[1],
        stable=0 < mu < mu_max,
    )
