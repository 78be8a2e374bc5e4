"""Plain-text run configuration with an explicit schema version.

Format: one ``key = value`` pair per line, ``#`` comments, dotted keys for
nesting.  Profiles are either named analytic families or inline node tables,
so a run is fully reproducible from its config file alone:

    schema = 1
    n_points = 128
    sigma = 1.0
    rho = 0.75
    gamma = 0.5
    q = 0.0
    A.kind = constant
    A.value = 1.0
    eta.kind = constant
    eta.value = 1.0
    K0.kind = cosine
    K0.mean = 1.0
    K0.amplitude = 0.4
    K0.mode = 1
    t_final = 10.0
    n_steps = 200
    seed = 2024
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .grid import Grid, GridFunction
from .spectral import ModelParams
from .tolerances import DEFAULT_TOLERANCES, Tolerances

SCHEMA_VERSION = 1

_PROFILE_NAMES = ("A", "eta", "K0")
_PROFILE_KINDS = ("constant", "cosine", "custom-table")
_KIND_ALIASES = {"table": "custom-table"}
_SCALAR_KEYS = {
    "n_points": int,
    "sigma": float,
    "rho": float,
    "gamma": float,
    "q": float,
    "t_final": float,
    "n_steps": int,
    "seed": int,
    "n_perturbations": int,
    "schema": int,
}
_STRING_KEYS = ("out_dir",)


@dataclass(frozen=True)
class ProfileSpec:
    """One coefficient profile: a named analytic family or an inline table."""

    kind: str
    parameters: dict

    def build(self, grid: Grid) -> GridFunction:
        if self.kind == "constant":
            return GridFunction.constant(grid, self.parameters["value"])
        if self.kind == "cosine":
            mean = self.parameters["mean"]
            amplitude = self.parameters.get("amplitude", 0.0)
            mode = int(self.parameters.get("mode", 1))
            phase = self.parameters.get("phase", 0.0)
            theta = grid.nodes
            return GridFunction(grid, mean + amplitude * np.cos(mode * theta + phase))
        if self.kind == "custom-table":
            values = self.parameters["values"]
            if len(values) != grid.n_points:
                raise ConfigError(
                    f"profile table has {len(values)} values, grid has {grid.n_points} points"
                )
            return GridFunction(grid, np.asarray(values, dtype=float))
        raise ConfigError(f"unknown profile kind {self.kind!r}")


@dataclass(frozen=True)
class RunConfig:
    n_points: int = 128
    sigma: float = 1.0
    rho: float = 1.0
    gamma: float = 0.5
    q: float = 0.0
    profiles: dict = field(default_factory=dict)
    t_final: float = 10.0
    n_steps: int = 200
    seed: int = 0
    n_perturbations: int = 20
    out_dir: str = "."
    sweep: dict = field(default_factory=dict)
    tolerance_overrides: dict = field(default_factory=dict)

    def tolerances(self) -> Tolerances:
        return DEFAULT_TOLERANCES.replace(**self.tolerance_overrides)

    def grid(self) -> Grid:
        return Grid(self.n_points)

    def model(self) -> tuple[Grid, ModelParams, GridFunction]:
        """Validate and build the grid, parameters, and initial state."""
        try:
            grid = self.grid()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        built = {}
        for name in _PROFILE_NAMES:
            if name not in self.profiles:
                raise ConfigError(f"missing profile {name!r}")
            built[name] = self.profiles[name].build(grid)
        try:
            params = ModelParams(
                sigma=self.sigma,
                rho=self.rho,
                gamma=self.gamma,
                q=self.q,
                A=built["A"],
                eta=built["eta"],
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return grid, params, built["K0"]


def _parse_scalar(key: str, text: str):
    kind = _SCALAR_KEYS[key]
    try:
        return kind(text) if kind is not float else float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = {text!r}") from exc


def _parse_float_list(text: str) -> list[float]:
    items = [piece.strip() for piece in text.split(",") if piece.strip()]
    try:
        return [float(piece) for piece in items]
    except ValueError as exc:
        raise ConfigError(f"cannot parse number list {text!r}") from exc


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a config document (no partial results)."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (piece.strip() for piece in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value

    if "schema" not in pairs:
        raise ConfigError("missing required key 'schema'")
    schema = _parse_scalar("schema", pairs.pop("schema"))
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {schema}")

    scalars: dict = {}
    profiles: dict[str, dict] = {}
    sweep: dict[str, list[float]] = {}
    overrides: dict[str, float] = {}
    out_dir = None
    for key, value in pairs.items():
        if key in _SCALAR_KEYS:
            scalars[key] = _parse_scalar(key, value)
        elif key in _STRING_KEYS:
            out_dir = value
        elif key.startswith("tol."):
            name = key[4:]
            if name not in Tolerances.__dataclass_fields__:
                raise ConfigError(f"unknown tolerance {name!r}")
            overrides[name] = float(value)
        elif key.startswith("sweep."):
            name = key[6:]
            if name not in ("rho", "gamma", "sigma"):
                raise ConfigError(f"unknown sweep parameter {name!r}")
            sweep[name] = _parse_float_list(value)
        elif "." in key:
            name, attr = key.split(".", 1)
            if name not in _PROFILE_NAMES:
                raise ConfigError(f"unknown key {key!r}")
            profiles.setdefault(name, {})[attr] = value
        else:
            raise ConfigError(f"unknown key {key!r}")

    profile_specs = {}
    for name, attrs in profiles.items():
        if "kind" not in attrs:
            raise ConfigError(f"profile {name!r} is missing 'kind'")
        kind = attrs.pop("kind")
        kind = _KIND_ALIASES.get(kind, kind)
        if kind not in _PROFILE_KINDS:
            raise ConfigError(f"profile {name!r} has unknown kind {kind!r}")
        parameters: dict = {}
        for attr, value in attrs.items():
            if attr == "values":
                parameters["values"] = _parse_float_list(value)
            elif attr in ("value", "mean", "amplitude", "phase"):
                parameters[attr] = float(value)
            elif attr == "mode":
                parameters[attr] = int(value)
            else:
                raise ConfigError(f"profile {name!r}: unknown attribute {attr!r}")
        if kind == "constant" and "value" not in parameters:
            raise ConfigError(f"profile {name!r}: constant needs 'value'")
        if kind == "cosine" and "mean" not in parameters:
            raise ConfigError(f"profile {name!r}: cosine needs 'mean'")
        if kind == "custom-table" and "values" not in parameters:
            raise ConfigError(f"profile {name!r}: custom-table needs 'values'")
        profile_specs[name] = ProfileSpec(kind=kind, parameters=parameters)

    config = RunConfig(
        profiles=profile_specs,
        sweep=sweep,
        tolerance_overrides=overrides,
        out_dir=out_dir if out_dir is not None else ".",
        **scalars,
    )
    # fail fast on anything inconsistent before any computation runs
    config.model()
    return config


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text())
