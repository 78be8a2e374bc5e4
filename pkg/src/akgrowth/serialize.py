"""Deterministic JSON and CSV writers.

Floats are printed with 17 significant digits everywhere, keys keep their
insertion order, and no timestamps are emitted, so identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .closed_loop import Trajectory
from .grid import GridFunction, inner_l2
from .spectral import SpectralBasis
from .stability import StabilityReport


def format_float(x: float) -> str:
    """17-significant-digit decimal form (round-trips float64 exactly)."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _emit(obj, indent: int, level: int, pieces: list[str]) -> None:
    pad = " " * (indent * level)
    inner_pad = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            pieces.append(f"{inner_pad}{json.dumps(str(key))}: ")
            _emit(value, indent, level + 1, pieces)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(np.asarray(obj).tolist()) if isinstance(obj, np.ndarray) else list(obj)
        if not seq:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, value in enumerate(seq):
            pieces.append(inner_pad)
            _emit(value, indent, level + 1, pieces)
            pieces.append(",\n" if i < len(seq) - 1 else "\n")
        pieces.append(pad + "]")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        pieces.append("true" if obj else "false")
    elif obj is None:
        pieces.append("null")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        pieces.append(format_float(obj))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    pieces: list[str] = []
    _emit(obj, indent, 0, pieces)
    pieces.append("\n")
    return "".join(pieces)


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(dumps_json(obj))


# ------------------------------------------------------------------ CSV
def gridfunction_csv(f: GridFunction) -> str:
    lines = ["theta,value"]
    for theta, value in zip(f.grid.nodes, f.values):
        lines.append(f"{format_float(theta)},{format_float(value)}")
    return "\n".join(lines) + "\n"


def write_gridfunction_csv(path: str | Path, f: GridFunction) -> None:
    Path(path).write_text(gridfunction_csv(f))


def basis_summary(basis: SpectralBasis) -> dict:
    """JSON-ready spectral summary: eigenvalues and the positive eigenfunction."""
    return {
        "eigenvalues": basis.eigenvalues,
        "b0": basis.b0.values,
    }


def write_basis_csv(path: str | Path, basis: SpectralBasis) -> None:
    """Full basis, one column per eigenfunction."""
    n = basis.grid.n_points
    header = "theta," + ",".join(f"b{k}" for k in range(n))
    lines = [header]
    for j, theta in enumerate(basis.grid.nodes):
        row = ",".join(format_float(v) for v in basis.vectors[j, :])
        lines.append(f"{format_float(theta)},{row}")
    Path(path).write_text("\n".join(lines) + "\n")


def trajectory_csv(traj: Trajectory) -> str:
    """Long-format trajectory: one row per (time, node)."""
    lines = ["t,theta,K,K_detrended"]
    nodes = traj.states[0].grid.nodes
    for t, state, detrended in zip(traj.times, traj.states, traj.detrended):
        t_text = format_float(t)
        for theta, k, kd in zip(nodes, state.values, detrended.values):
            lines.append(
                f"{t_text},{format_float(theta)},{format_float(k)},{format_float(kd)}"
            )
    return "\n".join(lines) + "\n"


def write_trajectory_csv(path: str | Path, traj: Trajectory) -> None:
    Path(path).write_text(trajectory_csv(traj))


def trajectory_summary(traj: Trajectory, basis: SpectralBasis) -> dict:
    """Pairings <K(t), b0> per sample plus the fitted growth exponent."""
    pairings = np.array([inner_l2(state, basis.b0) for state in traj.states])
    if np.all(pairings > 0):
        fitted = float(np.polyfit(traj.times, np.log(pairings), 1)[0])
    else:
        fitted = float("nan")
    return {
        "times": traj.times,
        "inner_b0": pairings,
        "fitted_growth_rate": fitted,
    }


def stability_summary(report: StabilityReport) -> dict:
    return {
        "M": report.M,
        "rate": report.rate,
        "fitted_rate": report.fitted_rate,
        "bound_satisfied": report.bound_satisfied,
        "max_bound_violation": report.max_bound_violation,
        "admissible": report.admissible,
        "admissibility_condition": report.admissibility_condition,
        "dominance_ok": report.dominance_ok,
        "grid_points": report.grid_points,
        "steady_state": report.steady_state.values,
    }


def deviation_csv(report: StabilityReport) -> str:
    lines = ["t,deviation,bound"]
    for t, dev, bnd in zip(report.times, report.deviations, report.bounds):
        lines.append(f"{format_float(t)},{format_float(dev)},{format_float(bnd)}")
    return "\n".join(lines) + "\n"


def write_deviation_csv(path: str | Path, report: StabilityReport) -> None:
    Path(path).write_text(deviation_csv(report))
