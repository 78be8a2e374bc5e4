"""Command-line front end.

Subcommands: solve, simulate, verify, sweep, perron-audit.  Exit codes form
a contract CI can rely on: 0 success, 1 internal or validation error,
2 infeasible parameters (well-posedness fails), 3 a numerical audit failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import closed_loop, hjb, serialize, spectral, stability, verify
from .config import RunConfig, load_config
from .errors import ConfigError, InfeasibleParametersError, SpectrumCollisionError
from .grid import inner_l2
from .perron import (
    eigenvalues_admitting_positive_eigenvector,
    is_irreducible,
    perron_data,
    random_irreducible_metzler,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INFEASIBLE = 2
EXIT_AUDIT_FAILED = 3


def _say(quiet: bool, message: str) -> None:
    if not quiet:
        print(message)


def _pipeline(config: RunConfig):
    """Shared solve pipeline: grid, params, K0, basis, solution."""
    grid, params, K0 = config.model()
    tolerances = config.tolerances()
    op = spectral.assemble_generator(params, grid, tolerances)
    basis = spectral.eigendecompose(op, tolerances)
    if not hjb.check_wellposed(params, basis.lambda0):
        raise InfeasibleParametersError(
            f"rho={params.rho} does not exceed lambda0*(1-gamma)="
            f"{basis.lambda0 * (1 - params.gamma)}"
        )
    sol = hjb.solve_hjb(basis, params)
    return grid, params, K0, basis, sol, tolerances


def cmd_solve(config: RunConfig, out: Path, quiet: bool) -> int:
    grid, params, K0, basis, sol, _ = _pipeline(config)
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(out / "spectral.json", serialize.basis_summary(basis))
    serialize.write_json(out / "hjb.json", hjb.hjb_summary(sol))
    value = hjb.value_function(sol, K0)
    serialize.write_json(
        out / "value.json",
        {"inner_K0_b0": inner_l2(K0, basis.b0), "value": value},
    )
    serialize.write_basis_csv(out / "basis.csv", basis)
    _say(quiet, f"solve: lambda0={basis.lambda0!r} g={sol.g!r} alpha={sol.alpha!r}")
    _say(quiet, f"solve: wrote spectral.json, hjb.json, value.json, basis.csv to {out}")
    return EXIT_OK


def cmd_simulate(config: RunConfig, out: Path, quiet: bool) -> int:
    grid, params, K0, basis, sol, tolerances = _pipeline(config)
    clo = closed_loop.build_closed_loop(basis, sol)
    pd = closed_loop.compute_projection_data(basis, sol, tolerances)
    traj = closed_loop.simulate(clo, K0, config.t_final, config.n_steps)
    report = stability.convergence_bound_check(
        traj, pd, basis.lambda1, sol.g, tolerances
    )
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_trajectory_csv(out / "trajectory.csv", traj)
    serialize.write_json(
        out / "trajectory_summary.json",
        {**serialize.trajectory_summary(traj, basis), "g": sol.g},
    )
    serialize.write_json(out / "stability.json", serialize.stability_summary(report))
    serialize.write_deviation_csv(out / "deviations.csv", report)
    _say(
        quiet,
        "simulate: "
        f"bound_satisfied={report.bound_satisfied} "
        f"admissibility_condition={report.admissibility_condition} "
        f"positivity={report.admissible} dominance_ok={report.dominance_ok}",
    )
    return EXIT_OK


def cmd_verify(config: RunConfig, out: Path, quiet: bool,
               debug_perturb_alpha: float = 0.0) -> int:
    grid, params, K0, basis, sol, tolerances = _pipeline(config)
    if debug_perturb_alpha:
        sol = dataclasses.replace(sol, alpha=sol.alpha * (1.0 + debug_perturb_alpha))
    clo = closed_loop.build_closed_loop(basis, sol)

    states = verify.sample_halfspace_states(basis, 20, config.seed)
    residuals = [verify.hjb_residual(sol, basis, state) for state in states]
    max_residual = max(residuals)

    audit = verify.optimality_audit(
        sol, clo, K0, config.n_perturbations, config.seed, tolerances
    )
    # one quadrature-convergence check per run: double the time nodes
    doubled = verify.payoff(
        params,
        lambda t: hjb.optimal_control_path(sol, K0, t),
        audit.horizon,
        nodes_per_unit=128,
        tail_bound=audit.tail_bound,
    )
    quadrature_gap = abs(doubled.value - audit.J_opt)

    # transversality needs a horizon long enough for the discounted value to
    # die; it is checked on the optimal path and on the sampled perturbations
    # (whose discounted value decays at the slower admissible-envelope rate)
    traj = closed_loop.simulate(clo, K0, audit.horizon, config.n_steps)
    envelope = verify.perturbed_transversality_envelope(sol, audit.horizon)
    transversal = verify.transversality_check(sol, traj, tolerances) and (
        audit.max_discounted_terminal_rel <= envelope
    )

    checks = {
        "hjb_residual": bool(max_residual < tolerances.hjb_residual_rel),
        "value_equality": bool(audit.rel_gap < tolerances.value_equality_rel),
        "dominance": bool(audit.all_dominated),
        "transversality": bool(transversal),
    }
    failed = [name for name, ok in checks.items() if not ok]
    report = {
        "J_opt": audit.J_opt,
        "v": audit.v,
        "rel_gap": audit.rel_gap,
        "n_perturbations": audit.n_perturbations,
        "max_perturbed_J": audit.max_perturbed_J,
        "all_dominated": audit.all_dominated,
        "max_hjb_residual": max_residual,
        "transversality": transversal,
        "max_discounted_terminal_rel": audit.max_discounted_terminal_rel,
        "perturbed_terminal_envelope": envelope,
        "horizon": audit.horizon,
        "tail_bound": audit.tail_bound,
        "quadrature_doubling_gap": quadrature_gap,
        "seed": audit.seed,
        "perturbation_family": audit.perturbation_family,
        "checks": checks,
        "failed_check": failed[0] if failed else None,
    }
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(out / "audit.json", report)
    if failed:
        _say(quiet, f"verify: FAILED check {failed[0]}")
        return EXIT_AUDIT_FAILED
    _say(quiet, f"verify: all checks passed (rel_gap={audit.rel_gap!r})")
    return EXIT_OK


def _sweep_point(config: RunConfig, rho: float, gamma: float, sigma: float) -> dict:
    point = dataclasses.replace(config, rho=rho, gamma=gamma, sigma=sigma)
    row: dict = {"rho": rho, "gamma": gamma, "sigma": sigma}
    try:
        grid, params, K0, basis, sol, tolerances = _pipeline(point)
    except InfeasibleParametersError:
        grid, params, K0 = point.model()
        op = spectral.assemble_generator(params, grid)
        basis = spectral.eigendecompose(op)
        row.update(
            lambda0=basis.lambda0,
            lambda1=basis.lambda1,
            feasible=False,
            g=hjb.growth_rate(params, basis.lambda0),
            alpha=None,
            M=None,
            rate=None,
            dominant=None,
        )
        return row
    try:
        pd = closed_loop.compute_projection_data(basis, sol, tolerances)
        M = stability.explicit_bound_constant(pd)
    except SpectrumCollisionError:
        M = None
    row.update(
        lambda0=basis.lambda0,
        lambda1=basis.lambda1,
        feasible=True,
        g=sol.g,
        alpha=sol.alpha,
        M=M,
        rate=sol.g - basis.lambda1,
        dominant=bool(sol.g > basis.lambda1),
    )
    return row


def cmd_sweep(config: RunConfig, out: Path, quiet: bool) -> int:
    rhos = config.sweep.get("rho", [config.rho])
    gammas = config.sweep.get("gamma", [config.gamma])
    sigmas = config.sweep.get("sigma", [config.sigma])
    points = [(r, g, s) for r in rhos for g in gammas for s in sigmas]
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda p: _sweep_point(config, *p), points))
    columns = [
        "rho", "gamma", "sigma", "lambda0", "lambda1",
        "feasible", "g", "alpha", "M", "rate", "dominant",
    ]
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for column in columns:
            value = row[column]
            if value is None:
                cells.append("")
            elif isinstance(value, bool):
                cells.append("true" if value else "false")
            else:
                cells.append(serialize.format_float(value))
        lines.append(",".join(cells))
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    _say(quiet, f"sweep: wrote {len(rows)} rows to {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_perron_audit(seed: int, count: int, max_dim: int, out: Path, quiet: bool) -> int:
    rng = np.random.default_rng(seed)
    failures = []
    for index in range(count):
        dim = int(rng.integers(3, max_dim + 1))
        gen = random_irreducible_metzler(dim, rng)
        try:
            if not is_irreducible(gen):
                raise RuntimeError("random generator not irreducible")
            data = perron_data(gen)
            for side in ("right", "left"):
                admitted = eigenvalues_admitting_positive_eigenvector(gen, side)
                if any(abs(v - data.spectral_bound) > 1e-8 for v in admitted):
                    raise RuntimeError(
                        f"non-dominant eigenvalue admits a positive {side} eigenvector"
                    )
        except Exception as exc:  # noqa: BLE001 - audit collects all failures
            failures.append({"index": index, "dim": dim, "error": str(exc)})
    report = {
        "count": count,
        "max_dim": max_dim,
        "seed": seed,
        "failures": failures,
        "all_passed": not failures,
    }
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(out / "perron.json", report)
    if failures:
        _say(quiet, f"perron-audit: {len(failures)} failure(s)")
        return EXIT_AUDIT_FAILED
    _say(quiet, f"perron-audit: {count} matrices passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akgrowth",
        description=(
            "Spectral solver, closed-loop simulator, and optimality auditor "
            "for spatial AK growth control on the circle."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, needs_config: bool = True):
        if needs_config:
            p.add_argument("--config", required=True, help="path to the run config file")
        p.add_argument("--out", default=None, help="output directory (default: config out_dir)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--n-points", type=int, default=None, help="override grid resolution")
        p.add_argument("--quiet", action="store_true", help="suppress status output")

    add_common(sub.add_parser("solve", help="spectral data, value function, feedback"))
    add_common(sub.add_parser("simulate", help="closed-loop trajectory and stability report"))
    p_verify = sub.add_parser("verify", help="payoff, dominance, residual, transversality audits")
    add_common(p_verify)
    p_verify.add_argument(
        "--debug-perturb-alpha",
        type=float,
        default=0.0,
        help="relative perturbation of alpha (sensitivity guard; forces audit failure)",
    )
    add_common(sub.add_parser("sweep", help="Cartesian parameter sweep summary"))
    p_perron = sub.add_parser("perron-audit", help="random Metzler dominant-eigenvalue battery")
    p_perron.add_argument("--seed", type=int, default=0)
    p_perron.add_argument("--count", type=int, default=100)
    p_perron.add_argument("--max-dim", type=int, default=12)
    p_perron.add_argument("--out", default=".", help="output directory")
    p_perron.add_argument("--quiet", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    quiet = getattr(args, "quiet", False)
    try:
        if args.command == "perron-audit":
            return cmd_perron_audit(
                args.seed, args.count, args.max_dim, Path(args.out), quiet
            )
        config = load_config(args.config)
        if args.n_points is not None:
            config = dataclasses.replace(config, n_points=args.n_points)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        config.model()  # re-validate after overrides
        out = Path(args.out) if args.out is not None else Path(config.out_dir)
        if args.command == "solve":
            return cmd_solve(config, out, quiet)
        if args.command == "simulate":
            return cmd_simulate(config, out, quiet)
        if args.command == "verify":
            return cmd_verify(config, out, quiet, args.debug_perturb_alpha)
        if args.command == "sweep":
            return cmd_sweep(config, out, quiet)
        raise RuntimeError(f"unhandled command {args.command!r}")
    except InfeasibleParametersError as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        print(f"internal error: {exc}", file=sys.stderr)
        if not quiet:
            traceback.print_exc()
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
