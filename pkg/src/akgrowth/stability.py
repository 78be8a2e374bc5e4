"""Quantitative convergence bound and positivity-admissibility audits.

With the spectral gap g - lambda1 > 0, detrended closed-loop paths converge
to the steady state <K0, beta> w at rate g - lambda1, with the explicit
constant M = 1 + sup|w| * integral(beta).  When additionally

    M * sup|K0 - <K0,beta> w| <= |<K0,beta>| * inf w      (and inf w > 0)

the whole path stays strictly positive, which certifies the feedback control
as admissible for the original positivity-constrained problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed_loop import ProjectionData, Trajectory
from .grid import GridFunction, inner_l2, integral, sup_norm
from .tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Outcome of the convergence-bound and admissibility audits."""

    M: float
    rate: float                    # g - lambda1
    steady_state: GridFunction
    bound_satisfied: bool
    fitted_rate: float             # least-squares slope of log deviation
    admissible: bool               # strict positivity of the sampled path
    admissibility_condition: bool  # sufficient a-priori condition
    dominance_ok: bool             # g > lambda1; bound is vacuous otherwise
    max_bound_violation: float
    times: np.ndarray
    deviations: np.ndarray
    bounds: np.ndarray
    grid_points: int


def explicit_bound_constant(pd: ProjectionData) -> float:
    """M = 1 + sup|w| * integral(beta)."""
    return 1.0 + sup_norm(pd.w) * integral(pd.beta)


def positivity_audit(traj: Trajectory) -> bool:
    """True iff every stored state is strictly positive at every node."""
    return bool(traj.state_matrix().min() > 0.0)


def admissibility_condition(pd: ProjectionData, K0: GridFunction, M: float) -> bool:
    """Sufficient condition for the closed-loop path to stay strictly positive.

    Requires inf w > 0 and M * sup|K0 - <K0,beta> w| <= |<K0,beta>| * inf w.
    Sufficient, not necessary: a path may stay positive even when this fails.
    """
    w_min = float(pd.w.values.min())
    if w_min <= 0.0:
        return False
    pairing = inner_l2(K0, pd.beta)
    deviation = sup_norm(K0 - pairing * pd.w)
    return M * deviation <= abs(pairing) * w_min


def fit_decay_rate(times: np.ndarray, deviations: np.ndarray,
                   rel_floor: float = 1e-12) -> float:
    """Least-squares slope of log(deviation) against time.

    Samples whose deviation has decayed below rel_floor times the initial
    deviation are excluded (they are dominated by rounding).  Returns nan
    when fewer than two usable samples remain.
    """
    dev0 = deviations[0]
    if dev0 <= 0.0:
        return float("nan")
    usable = deviations > rel_floor * dev0
    if int(usable.sum()) < 2:
        return float("nan")
    t = times[usable]
    y = np.log(deviations[usable])
    slope = np.polyfit(t, y, 1)[0]
    return float(slope)


def convergence_bound_check(
    traj: Trajectory,
    pd: ProjectionData,
    lambda1: float,
    g: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> StabilityReport:
    """Audit the explicit convergence bound at every sampled time.

    Checks sup|detrended(t) - steady| <= M * exp(-(g-lambda1)*t) * sup|K0 -
    steady| with the explicit M, allowing only the absolute slack recorded in
    the tolerance record.  Violations are reported, never raised.
    """
    M = explicit_bound_constant(pd)
    K0 = traj.states[0]
    pairing = inner_l2(K0, pd.beta)
    steady = GridFunction(pd.basis.grid, pairing * pd.w.values)
    deviations = np.abs(traj.detrended_matrix() - steady.values).max(axis=1)
    rate = g - lambda1
    bounds = M * np.exp(-rate * traj.times) * deviations[0]
    violations = deviations - (bounds + tolerances.bound_slack)
    max_violation = float(violations.max())
    return StabilityReport(
        M=M,
        rate=rate,
        steady_state=steady,
        bound_satisfied=bool(max_violation <= 0.0),
        fitted_rate=fit_decay_rate(traj.times, deviations),
        admissible=positivity_audit(traj),
        admissibility_condition=admissibility_condition(pd, K0, M),
        dominance_ok=bool(rate > 0.0),
        max_bound_violation=max_violation,
        times=traj.times,
        deviations=deviations,
        bounds=bounds,
        grid_points=pd.basis.grid.n_points,
    )


def dominance_window(A0: float, sigma: float, rho: float, gamma: float) -> bool:
    """Parameter window A0*(1-gamma) < rho < A0*(1-gamma) + sigma*gamma.

    For homogeneous technology A == A0 this window is equivalent to requiring
    both well-posedness and dominance g > lambda1 of the growth rate.
    """
    low = A0 * (1.0 - gamma)
    return low < rho < low + sigma * gamma
