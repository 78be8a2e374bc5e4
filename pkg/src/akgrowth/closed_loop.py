"""Closed-loop generator, spectral projection, and trajectory simulation.

Substituting the optimal feedback into the state equation yields a linear
integro-PDE whose generator is the rank-one perturbation

    B = L - outer(withdrawal_profile, quadrature-weighted b0),

where withdrawal_profile = (alpha*b0)^(-1/gamma) * eta^((q+gamma-1)/gamma).
Its dominant eigenvalue (when it dominates) is the growth rate g, with
eigenvector w; detrended trajectories converge to the rank-one projection
P x = <x, beta> w, which is validated here both from its closed-form series
and from a resolvent contour integral.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import ContourEnclosureError, GridMismatchError, SpectrumCollisionError
from .grid import TWO_PI, Grid, GridFunction, inner_l2
from .hjb import HjbSolution, positive_power
from .spectral import SpectralBasis
from .tolerances import DEFAULT_TOLERANCES, Tolerances


def withdrawal_profile(sol: HjbSolution) -> GridFunction:
    """Consumption withdrawal per unit of <x, b0>.

    Equals (alpha*b0)^(-1/gamma) * eta^((q+gamma-1)/gamma), so that the
    feedback withdrawal operator acts as x -> withdrawal_profile * <x, b0>.
    Dividing by alpha0 gives the equivalent beta-paired form
    beta^(-1/gamma) * eta^((q+gamma-1)/gamma) with beta = alpha0 * b0.
    """
    params = sol.params
    gamma, q = params.gamma, params.q
    values = positive_power(
        sol.alpha * sol.basis.b0.values, -1.0 / gamma
    ) * positive_power(params.eta.values, (q + gamma - 1.0) / gamma)
    return GridFunction(sol.basis.grid, values)


@dataclass(frozen=True, eq=False)
class ClosedLoopOperator:
    """Dense matrix of B = L - N*Phi together with its spectrum."""

    matrix: np.ndarray
    basis: SpectralBasis
    sol: HjbSolution
    spectrum: np.ndarray  # complex eigenvalues of ``matrix``

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float).copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        s = np.asarray(self.spectrum, dtype=complex).copy()
        s.setflags(write=False)
        object.__setattr__(self, "spectrum", s)

    @property
    def grid(self) -> Grid:
        return self.basis.grid

    def apply(self, f: GridFunction) -> GridFunction:
        if f.grid != self.grid:
            raise GridMismatchError("operand lives on a different grid")
        return GridFunction(self.grid, self.matrix @ f.values)


def build_closed_loop(basis: SpectralBasis, sol: HjbSolution) -> ClosedLoopOperator:
    """Assemble B = L - outer(withdrawal_profile, weight * b0).

    L is reconstructed from the basis itself (weight * V diag(lambda) V^T),
    which keeps every downstream eigen-identity consistent with the stored
    spectral data to rounding.
    """
    if sol.basis is not basis and sol.basis.grid != basis.grid:
        raise GridMismatchError("solution was built on a different grid")
    weight = basis.grid.weight
    l_matrix = weight * (basis.vectors * basis.eigenvalues) @ basis.vectors.T
    u = withdrawal_profile(sol).values
    b_matrix = l_matrix - np.outer(u, weight * basis.b0.values)
    spectrum = np.linalg.eigvals(b_matrix)
    return ClosedLoopOperator(matrix=b_matrix, basis=basis, sol=sol, spectrum=spectrum)


@dataclass(frozen=True, eq=False)
class ProjectionData:
    """Steady-state direction w, functional beta, and related constants.

    beta_coeffs[k] is the basis coefficient of the withdrawal profile; the
    k = 0 coefficient equals mu0 / alpha0 with mu0 = lambda0 - g.
    """

    basis: SpectralBasis
    g: float
    beta: GridFunction
    w: GridFunction
    beta_coeffs: np.ndarray
    mu0: float

    def __post_init__(self) -> None:
        c = np.asarray(self.beta_coeffs, dtype=float).copy()
        c.setflags(write=False)
        object.__setattr__(self, "beta_coeffs", c)


def compute_projection_data(
    basis: SpectralBasis,
    sol: HjbSolution,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ProjectionData:
    """Assemble beta = alpha0*b0, the coefficients beta_k, and the series

        w = b0/alpha0 + sum_{k>=1} beta_k / (lambda_k - g) * b_k,

    truncated at the discretization order (exact at this level).  Fails with
    a SpectrumCollisionError if g is too close to any eigenvalue.
    """
    g = sol.g
    gaps = np.abs(basis.eigenvalues - g)
    if float(gaps.min()) < tolerances.spectrum_collision:
        k = int(gaps.argmin())
        raise SpectrumCollisionError(
            f"g={g!r} collides with eigenvalue lambda_{k}={basis.eigenvalues[k]!r}"
        )
    # beta-paired withdrawal form beta^(-1/gamma) * eta^((q+gamma-1)/gamma)
    u = (1.0 / sol.alpha0) * withdrawal_profile(sol)
    beta_coeffs = basis.coefficients(u)
    mu0 = basis.lambda0 - g
    # quadrature consistency: <b0, u> must equal mu0 / alpha0
    defect = abs(beta_coeffs[0] - mu0 / sol.alpha0) / max(1.0, abs(mu0 / sol.alpha0))
    if defect > tolerances.quadrature_consistency:
        raise RuntimeError(f"mu0 quadrature consistency defect {defect:g}")
    w_coeffs = beta_coeffs / (basis.eigenvalues - g)
    w_coeffs[0] = 1.0 / sol.alpha0
    w = basis.synthesize(w_coeffs)
    beta = GridFunction(basis.grid, sol.alpha0 * basis.b0.values)
    pairing = inner_l2(w, beta)
    if abs(pairing - 1.0) > tolerances.pairing_normalization:
        raise RuntimeError(f"<w, beta> = {pairing!r} is not 1 within tolerance")
    return ProjectionData(
        basis=basis, g=g, beta=beta, w=w, beta_coeffs=beta_coeffs, mu0=mu0
    )


def projection_apply(pd: ProjectionData, x: GridFunction) -> GridFunction:
    """Rank-one spectral projection P x = <x, beta> w."""
    pairing = inner_l2(x, pd.beta)
    return GridFunction(pd.basis.grid, pairing * pd.w.values)


def projection_matrix(pd: ProjectionData) -> np.ndarray:
    """Dense matrix of the closed-form projection, outer(w, weight * beta)."""
    return np.outer(pd.w.values, pd.basis.grid.weight * pd.beta.values)


@dataclass(frozen=True, eq=False)
class ContourProjection:
    """Result of the resolvent contour quadrature for the projection."""

    matrix: np.ndarray
    imag_residue: float
    center: float
    radius: float
    n_quad: int


def projection_via_contour(
    clo: ClosedLoopOperator,
    center: float | None = None,
    radius: float | None = None,
    n_quad: int = 64,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ContourProjection:
    """Spectral projection -1/(2*pi*i) * contour integral of (B - mu)^{-1}.

    The contour is the circle of the given center and radius, discretized by
    the periodic trapezoid rule (spectrally accurate here).  By default the
    center is g and the radius is half the distance from g to the nearest
    other eigenvalue of B.  The circle must enclose g and nothing else.
    """
    if n_quad < 16:
        raise ValueError(f"n_quad must be >= 16, got {n_quad}")
    g = clo.sol.g
    eigs = clo.spectrum
    if center is None:
        center = g
    if radius is None:
        others = eigs[np.abs(eigs - g) > 1e-8 * max(1.0, abs(g))]
        if others.size == 0:
            raise ContourEnclosureError("no other eigenvalue available to set a radius")
        radius = 0.5 * float(np.abs(others - g).min())
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    enclosed = eigs[np.abs(eigs - center) <= radius]
    if enclosed.size != 1 or abs(enclosed[0] - g) > 1e-6 * max(1.0, abs(g)):
        raise ContourEnclosureError(
            f"circle at {center!r} radius {radius!r} encloses {enclosed.size} "
            f"eigenvalue(s); it must enclose exactly g={g!r}"
        )
    n = clo.grid.n_points
    identity = np.eye(n)
    angles = TWO_PI * (np.arange(n_quad) + 0.5) / n_quad
    acc = np.zeros((n, n), dtype=complex)
    for t in angles:
        phase = np.exp(1j * t)
        mu = center + radius * phase
        acc += np.linalg.solve(clo.matrix - mu * identity, identity) * phase
    # P = -(1/2 pi i) * sum_j resolvent(mu_j) * i * radius * phase_j * dt
    acc *= -radius / n_quad
    imag_residue = float(np.abs(acc.imag).max())
    if imag_residue > tolerances.contour_imag:
        raise RuntimeError(f"contour projection imaginary residue {imag_residue:g}")
    return ContourProjection(
        matrix=acc.real,
        imag_residue=imag_residue,
        center=float(center),
        radius=float(radius),
        n_quad=int(n_quad),
    )


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled closed-loop path: states K(t_i) and detrended e^(-g t_i) K(t_i)."""

    times: np.ndarray
    states: list[GridFunction]
    detrended: list[GridFunction]

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float).copy()
        if t.ndim != 1 or t[0] != 0.0:
            raise ValueError("times must be a 1-d array starting at 0")
        if len(self.states) != t.size or len(self.detrended) != t.size:
            raise ValueError("times/states/detrended lengths disagree")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    def state_matrix(self) -> np.ndarray:
        return np.stack([s.values for s in self.states])

    def detrended_matrix(self) -> np.ndarray:
        return np.stack([s.values for s in self.detrended])


def simulate(
    clo: ClosedLoopOperator,
    x0: GridFunction,
    t_final: float,
    n_steps: int,
) -> Trajectory:
    """Closed-loop trajectory at n_steps uniform steps over [0, t_final].

    One dense matrix exponential of B * dt is computed once and reused for
    every step, so there is no time-discretization error at the sample
    points; dt enters only through output sampling.
    """
    if x0.grid != clo.grid:
        raise GridMismatchError("initial state lives on a different grid")
    if not t_final > 0:
        raise ValueError(f"t_final must be > 0, got {t_final}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    dt = t_final / n_steps
    stepper = expm(clo.matrix * dt)
    times = np.linspace(0.0, t_final, n_steps + 1)
    g = clo.sol.g
    states = [x0]
    detrended = [x0]
    current = x0.values
    for i in range(1, n_steps + 1):
        current = stepper @ current
        state = GridFunction(clo.grid, current)
        states.append(state)
        detrended.append(GridFunction(clo.grid, current * np.exp(-g * times[i])))
    return Trajectory(times=times, states=states, detrended=detrended)
