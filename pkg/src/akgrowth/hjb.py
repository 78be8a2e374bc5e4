"""Explicit solution of the dynamic-programming equation on the half-space.

With a power utility weighted by f = eta^q and a strictly positive leading
eigenfunction b0 of the generator, the value function of the relaxed problem
is the closed form

    v(x) = alpha * <x, b0>^(1-gamma) / (1-gamma),

with alpha determined by a single quadrature integral, and the optimal
consumption is the rank-one linear feedback

    (Phi x)(theta) = (f / (alpha * eta * b0))^(1/gamma)(theta) * <x, b0>.

This module builds those objects and evaluates the associated utility,
Hamiltonian, and control path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import HalfSpaceError, InfeasibleParametersError, UnderflowWarning
from .grid import GridFunction, inner_l2, is_strictly_positive
from .spectral import ModelParams, SpectralBasis
from .tolerances import DEFAULT_TOLERANCES


def positive_power(values: np.ndarray, exponent: float,
                   floor: float = DEFAULT_TOLERANCES.underflow_floor) -> np.ndarray:
    """Pointwise power of a strictly positive array with an underflow floor.

    Entries that underflow below ``floor`` are clamped up to it and reported
    through an :class:`UnderflowWarning`; clamping is never silent.
    """
    out = np.asarray(values, dtype=float) ** exponent
    tiny = out < floor
    if np.any(tiny):
        warnings.warn(
            f"{int(tiny.sum())} node(s) underflowed below {floor:g} and were floored",
            UnderflowWarning,
            stacklevel=2,
        )
        out = np.where(tiny, floor, out)
    return out


def check_wellposed(params: ModelParams, lambda0: float) -> bool:
    """True iff rho > lambda0 * (1 - gamma) (strict)."""
    return params.rho > lambda0 * (1.0 - params.gamma)


def growth_rate(params: ModelParams, lambda0: float) -> float:
    """Balanced growth rate (lambda0 - rho) / gamma."""
    return (lambda0 - params.rho) / params.gamma


def consumption_weight(params: ModelParams) -> GridFunction:
    """Utility weight profile f = eta^q."""
    return GridFunction(params.grid, positive_power(params.eta.values, params.q))


def _alpha_integral(basis: SpectralBasis, params: ModelParams) -> float:
    """Quadrature of f^(1/gamma) * (eta * b0)^((gamma-1)/gamma) over the circle."""
    gamma, q = params.gamma, params.q
    integrand = (
        positive_power(params.eta.values, (q + gamma - 1.0) / gamma)
        * positive_power(basis.b0.values, (gamma - 1.0) / gamma)
    )
    return basis.grid.weight * float(integrand.sum())


def compute_alpha(basis: SpectralBasis, params: ModelParams) -> float:
    """Closed-form coefficient of the value function.

    alpha = [gamma / (rho - lambda0*(1-gamma)) * integral]^gamma, where the
    integral is f^(1/gamma) (eta b0)^((gamma-1)/gamma) d(theta).  Requires the
    well-posedness inequality rho > lambda0*(1-gamma).
    """
    lambda0 = basis.lambda0
    if not check_wellposed(params, lambda0):
        raise InfeasibleParametersError(
            f"rho={params.rho} does not exceed lambda0*(1-gamma)="
            f"{lambda0 * (1 - params.gamma)}"
        )
    margin = params.rho - lambda0 * (1.0 - params.gamma)
    return (params.gamma / margin * _alpha_integral(basis, params)) ** params.gamma


@dataclass(frozen=True, eq=False)
class HjbSolution:
    """Closed-form solution data for the half-space control problem.

    feedback_profile is (f / (alpha * eta * b0))^(1/gamma); the optimal
    control is feedback_profile * <x, b0>.
    """

    params: ModelParams
    basis: SpectralBasis
    alpha: float
    alpha0: float
    g: float
    feedback_profile: GridFunction
    consumption_weight_f: GridFunction


def solve_hjb(basis: SpectralBasis, params: ModelParams) -> HjbSolution:
    """Construct the explicit solution record for the given spectral data."""
    alpha = compute_alpha(basis, params)
    alpha0 = alpha ** (1.0 / (1.0 - params.gamma))
    g = growth_rate(params, basis.lambda0)
    f = consumption_weight(params)
    profile_values = positive_power(
        f.values / (alpha * params.eta.values * basis.b0.values), 1.0 / params.gamma
    )
    profile = GridFunction(basis.grid, profile_values)
    if not is_strictly_positive(profile):
        raise RuntimeError("feedback profile lost strict positivity")
    return HjbSolution(
        params=params,
        basis=basis,
        alpha=alpha,
        alpha0=alpha0,
        g=g,
        feedback_profile=profile,
        consumption_weight_f=f,
    )


def _pairing(sol: HjbSolution, x: GridFunction) -> float:
    inner = inner_l2(x, sol.basis.b0)
    if inner <= 0.0:
        raise HalfSpaceError(f"<x, b0> = {inner!r} is not strictly positive")
    return inner


def value_function(sol: HjbSolution, x0: GridFunction) -> float:
    """v(x0) = alpha * <x0,b0>^(1-gamma) / (1-gamma) on the open half-space."""
    inner = _pairing(sol, x0)
    gamma = sol.params.gamma
    return sol.alpha * inner ** (1.0 - gamma) / (1.0 - gamma)


def feedback_control(sol: HjbSolution, x: GridFunction) -> GridFunction:
    """Optimal consumption as a function of the state, linear and rank one."""
    inner = inner_l2(x, sol.basis.b0)
    return GridFunction(sol.basis.grid, sol.feedback_profile.values * inner)


def optimal_control_path(sol: HjbSolution, x0: GridFunction, t: float) -> GridFunction:
    """Optimal consumption profile at time t, feedback_control(x0) * e^(g t)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    _pairing(sol, x0)
    base = feedback_control(sol, x0)
    return GridFunction(sol.basis.grid, base.values * np.exp(sol.g * t))


def utility(params: ModelParams, z: GridFunction) -> float:
    """Aggregate utility U(z) = integral of z^(1-gamma)/(1-gamma) * eta^q.

    For gamma > 1 a zero consumption node makes the integrand -inf; the
    extended-real value -inf is returned rather than raising.
    """
    gamma = params.gamma
    f = consumption_weight(params).values
    z_values = z.values
    if np.any(z_values < 0):
        raise ValueError("consumption must be nonnegative")
    if gamma > 1 and np.any(z_values == 0.0):
        return float("-inf")
    integrand = z_values ** (1.0 - gamma) / (1.0 - gamma) * f
    return params.grid.weight * float(integrand.sum())


def hamiltonian(sol: HjbSolution, x: GridFunction) -> float:
    """Maximized Hamiltonian evaluated at the value-function gradient.

    Closed form: gamma * <x,b0>^(1-gamma)/(1-gamma) times the quadrature of
    f^(1/gamma) * (alpha * eta * b0)^((gamma-1)/gamma).
    """
    inner = _pairing(sol, x)
    gamma = sol.params.gamma
    integrand = (
        positive_power(sol.consumption_weight_f.values, 1.0 / gamma)
        * positive_power(
            sol.alpha * sol.params.eta.values * sol.basis.b0.values,
            (gamma - 1.0) / gamma,
        )
    )
    quad = sol.basis.grid.weight * float(integrand.sum())
    return gamma * inner ** (1.0 - gamma) / (1.0 - gamma) * quad


def hjb_summary(sol: HjbSolution) -> dict:
    """Summary mapping used for JSON serialization."""
    return {
        "alpha": sol.alpha,
        "alpha0": sol.alpha0,
        "g": sol.g,
        "lambda0": sol.basis.lambda0,
        "wellposed": check_wellposed(sol.params, sol.basis.lambda0),
    }
