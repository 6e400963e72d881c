"""Strict TOML configuration: schema validation, defaults, normalized echo.

Unknown sections or keys are hard errors (silent typos in physics
parameters are worse than friction), every error is collected rather than
reported first-only, and the fully defaulted configuration is written back
next to the outputs so a run can be reproduced from its artifacts alone.
"""

from __future__ import annotations

import math

import numpy as np

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .experiments import ExperimentConfig
from .grids import PeriodicGrid
from .scattering import RadialPotential, gaussian_bump, potential_from_samples, soft_ball
from .serialize import format_value

__all__ = [
    "ConfigError",
    "validate_config",
    "load_config",
    "normalized_toml",
    "build_grid",
    "build_potential",
    "build_trap_field",
    "build_experiment_config",
    "parse_potential_spec",
]


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


_INT, _FLOAT, _STR, _INT_LIST, _FLOAT_LIST = "int", "float", "str", "int_list", "float_list"

# (type, default); None default marks an optional key omitted unless given
SCHEMA = {
    "grid": {"dim": (_INT, 3), "points": (_INT, 32), "length": (_FLOAT, 1.0)},
    "potential": {
        "kind": (_STR, "soft_ball"),
        "v0": (_FLOAT, 16.0),
        "radius": (_FLOAT, 0.5),
        "sigma": (_FLOAT, 0.5),
        "path": (_STR, None),
    },
    "scattering": {"r_max_factor": (_FLOAT, 10.0), "steps": (_INT, 20000)},
    "trap": {"kind": (_STR, "none"), "strength": (_FLOAT, 1.0)},
    "gp": {
        "t_final": (_FLOAT, 0.1),
        "dt": (_FLOAT, 1e-3),
        "phi0": (_STR, "lowmode"),
        "eps": (_FLOAT, 0.2),
        "record_every": (_INT, 10),
        "a0": (_FLOAT, None),
        "tol": (_FLOAT, 1e-10),
    },
    "fock": {
        "modes": (_INT, 4),
        "n_max": (_INT, 16),
        "g_norm2": (_FLOAT, 0.05),
        "hs_norm": (_FLOAT, 0.05),
    },
    "sweep": {
        "n_list": (_INT_LIST, [2, 4, 8]),
        "t_final": (_FLOAT, 0.2),
        "dt": (_FLOAT, 1e-3),
        "times": (_FLOAT_LIST, [0.05, 0.1, 0.2]),
        "dim_cap": (_INT, 200_000),
        "top_weight_gate": (_FLOAT, 0.05),
        "phi0": (_STR, "uniform"),
        "eps": (_FLOAT, 0.0),
    },
}


def _coerce(value, kind):
    if kind == _INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError("expected an integer")
        return int(value)
    if kind == _FLOAT:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError("expected a number")
        return float(value)
    if kind == _STR:
        if not isinstance(value, str):
            raise TypeError("expected a string")
        return value
    if kind in (_INT_LIST, _FLOAT_LIST):
        if not isinstance(value, list) or not value:
            raise TypeError("expected a nonempty list")
        inner = _INT if kind == _INT_LIST else _FLOAT
        return [_coerce(v, inner) for v in value]
    raise AssertionError(kind)


def _constraint_errors(cfg) -> list:
    errs = []
    g = cfg["grid"]
    if g["dim"] not in (1, 2, 3):
        errs.append("grid.dim must be 1, 2, or 3")
    p = g["points"]
    if p < 8 or (p & (p - 1)) != 0:
        errs.append("grid.points must be a power of two >= 8")
    if g["length"] <= 0:
        errs.append("grid.length must be positive")

    pot = cfg["potential"]
    if pot["kind"] not in ("soft_ball", "gaussian", "csv"):
        errs.append("potential.kind must be one of soft_ball, gaussian, csv")
    if pot["kind"] == "csv" and not pot.get("path"):
        errs.append("potential.kind=csv requires potential.path")
    if pot["v0"] < 0:
        errs.append("potential.v0 must be >= 0 (repulsive)")
    if pot["radius"] <= 0 or pot["sigma"] <= 0:
        errs.append("potential.radius and potential.sigma must be positive")

    sc = cfg["scattering"]
    if sc["r_max_factor"] <= 2.0:
        errs.append("scattering.r_max_factor must exceed 2")
    if sc["steps"] < 1000:
        errs.append("scattering.steps must be >= 1000")

    if cfg["trap"]["kind"] not in ("none", "harmonic"):
        errs.append("trap.kind must be none or harmonic")

    gp = cfg["gp"]
    if gp["dt"] <= 0:
        errs.append("gp.dt must be positive")
    if gp["t_final"] < 0:
        errs.append("gp.t_final must be >= 0")
    if gp["record_every"] < 1:
        errs.append("gp.record_every must be >= 1")
    if gp["phi0"] not in ("uniform", "lowmode"):
        errs.append("gp.phi0 must be uniform or lowmode")
    if gp["eps"] < 0:
        errs.append("gp.eps must be >= 0")
    if gp.get("a0") is not None and gp["a0"] < 0:
        errs.append("gp.a0 must be >= 0 when given")

    fock = cfg["fock"]
    if fock["modes"] < 1:
        errs.append("fock.modes must be >= 1")
    if fock["n_max"] < 0:
        errs.append("fock.n_max must be >= 0")

    sw = cfg["sweep"]
    if sw["dt"] <= 0:
        errs.append("sweep.dt must be positive")
    if sw["t_final"] < 0:
        errs.append("sweep.t_final must be >= 0")
    if sw["phi0"] not in ("uniform", "lowmode"):
        errs.append("sweep.phi0 must be uniform or lowmode")
    ns = sw["n_list"]
    if list(ns) != sorted(set(ns)) or any(n < 1 for n in ns):
        errs.append("sweep.n_list must be ascending, positive, without repeats")
    for n in ns:
        if n > fock["n_max"] / 2:
            errs.append(
                f"sweep.n_list entry N={n} violates N <= n_max/2 (n_max={fock['n_max']})"
            )
    dim = math.comb(fock["modes"] + fock["n_max"], fock["modes"])
    if dim > sw["dim_cap"]:
        errs.append(f"Fock dimension {dim} exceeds sweep.dim_cap={sw['dim_cap']}")
    for t in sw["times"]:
        if t < 0 or t > sw["t_final"] + 1e-12:
            errs.append(f"sweep.times entry {t} must lie within [0, t_final]")
    return errs


def validate_config(raw: dict):
    """Return (normalized config, error list). Errors are enumerated, not first-only."""
    errors = []
    normalized = {}
    for section, keys in SCHEMA.items():
        given = raw.get(section, {})
        if given is not None and not isinstance(given, dict):
            errors.append(f"section [{section}] must be a table")
            given = {}
        out = {}
        for key, (kind, default) in keys.items():
            if key in given:
                try:
                    out[key] = _coerce(given[key], kind)
                except TypeError as exc:
                    errors.append(f"{section}.{key}: {exc}")
                    out[key] = default
            elif default is not None:
                out[key] = default
        normalized[section] = out
    for section in raw:
        if section not in SCHEMA:
            errors.append(f"unknown section [{section}]")
    for section, keys in SCHEMA.items():
        for key in raw.get(section, {}) or {}:
            if key not in keys:
                errors.append(f"unknown key {section}.{key}")
    if not errors:
        errors.extend(_constraint_errors(normalized))
    return normalized, errors


def load_config(path):
    """Parse, validate, and normalize a TOML config file."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    normalized, errors = validate_config(raw)
    if errors:
        raise ConfigError(errors)
    return normalized


def normalized_toml(cfg: dict) -> str:
    """Render the normalized config; schema order, 17-significant-digit floats."""
    lines = []
    for section in SCHEMA:
        lines.append(f"[{section}]")
        for key in SCHEMA[section]:
            if key not in cfg[section]:
                continue
            value = cfg[section][key]
            if isinstance(value, str):
                rendered = f'"{value}"'
            elif isinstance(value, list):
                rendered = "[" + ", ".join(format_value(v) for v in value) + "]"
            else:
                rendered = format_value(value)
            lines.append(f"{key} = {rendered}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_grid(cfg: dict) -> PeriodicGrid:
    g = cfg["grid"]
    return PeriodicGrid(dim=g["dim"], points_per_dim=g["points"], box_length=g["length"])


def _load_potential_csv(path) -> RadialPotential:
    with open(path) as fh:
        header = fh.readline().strip().replace(" ", "")
        if header != "r,v":
            raise ConfigError([f"potential CSV {path} must start with header 'r,v'"])
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return potential_from_samples(data[:, 0], data[:, 1])


def build_potential(cfg: dict) -> RadialPotential:
    pot = cfg["potential"]
    if pot["kind"] == "soft_ball":
        return soft_ball(pot["v0"], pot["radius"])
    if pot["kind"] == "gaussian":
        return gaussian_bump(pot["v0"], pot["sigma"])
    return _load_potential_csv(pot["path"])


def parse_potential_spec(spec: str) -> RadialPotential:
    """Inline CLI potential: 'soft_ball:V0,R', 'gaussian:V0,SIGMA', or a CSV path."""
    if ":" in spec and not spec.lower().endswith(".csv"):
        name, _, args = spec.partition(":")
        try:
            values = [float(x) for x in args.split(",")]
        except ValueError:
            raise ConfigError([f"cannot parse potential parameters in {spec!r}"])
        if name == "soft_ball" and len(values) == 2:
            return soft_ball(*values)
        if name == "gaussian" and len(values) == 2:
            return gaussian_bump(*values)
        raise ConfigError([f"unknown built-in potential {spec!r}"])
    return _load_potential_csv(spec)


def build_trap_field(cfg: dict, grid: PeriodicGrid):
    trap = cfg["trap"]
    if trap["kind"] == "none":
        return None
    return trap["strength"] * grid.radius() ** 2


def build_experiment_config(cfg: dict) -> ExperimentConfig:
    sw = cfg["sweep"]
    return ExperimentConfig(
        grid=build_grid(cfg),
        n_modes=cfg["fock"]["modes"],
        n_list=tuple(sw["n_list"]),
        t_final=sw["t_final"],
        dt=sw["dt"],
        potential=build_potential(cfg),
        n_max=cfg["fock"]["n_max"],
        phi0_kind=sw["phi0"],
        phi0_eps=sw["eps"],
        record_times=tuple(sw["times"]),
        dim_cap=sw["dim_cap"],
        top_weight_gate=sw["top_weight_gate"],
    )
