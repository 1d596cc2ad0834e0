"""INI-style run configuration with strict validation.

Example::

    [geometry]
    R = 0.3
    theta = 1.5707963267948966
    phi = 1.5707963267948966

    [params]
    delta = 0
    omega_L = 2
    detuning = 0.58
    laser_on = true

    [run]
    t_end = 25
    output_dt = 0.05
    integrator_dt = 0.001

Angles are radians.  Unknown sections or keys are errors, and every problem
found is reported at once.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field

from .coupling import Geometry
from .operators import SystemParams

__all__ = ["ConfigError", "RunSettings", "SimulationConfig", "parse_config", "load_config"]


class ConfigError(ValueError):
    """One or more problems in a configuration file; ``errors`` lists them all."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


@dataclass(frozen=True)
class RunSettings:
    t_end: float = 25.0
    output_dt: float = 0.05
    integrator_dt: float = 1e-3
    experiment: str = ""
    output: str = ""
    seed: int | None = None
    scheme: str = "2"
    n_theta: int = 91
    samples: int = 200
    states: int = 20


@dataclass(frozen=True)
class SimulationConfig:
    geometry: Geometry
    params: SystemParams = SystemParams()
    run: RunSettings = field(default_factory=RunSettings)

    def as_dict(self) -> dict:
        return {
            "geometry": {"R": self.geometry.R, "theta": self.geometry.theta, "phi": self.geometry.phi},
            "params": asdict(self.params),
            "run": asdict(self.run),
        }


_FLOAT, _INT, _BOOL, _STR = "float", "int", "bool", "str"

_SCHEMA = {
    "geometry": {"R": (_FLOAT, None), "theta": (_FLOAT, None), "phi": (_FLOAT, None)},
    "params": {
        "delta": (_FLOAT, 0.0),
        "omega_L": (_FLOAT, 0.0),
        "detuning": (_FLOAT, 0.0),
        "laser_on": (_BOOL, False),
    },
    "run": {
        "t_end": (_FLOAT, RunSettings.t_end),
        "output_dt": (_FLOAT, RunSettings.output_dt),
        "integrator_dt": (_FLOAT, RunSettings.integrator_dt),
        "experiment": (_STR, ""),
        "output": (_STR, ""),
        "seed": (_INT, None),
        "scheme": (_STR, RunSettings.scheme),
        "n_theta": (_INT, RunSettings.n_theta),
        "samples": (_INT, RunSettings.samples),
        "states": (_INT, RunSettings.states),
    },
}

_BOOLEANS = {"true": True, "yes": True, "on": True, "1": True,
             "false": False, "no": False, "off": False, "0": False}


def _convert(kind, raw):
    raw = raw.strip()
    if kind == _FLOAT:
        value = float(raw)
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value
    if kind == _INT:
        return int(raw)
    if kind == _BOOL:
        if raw.lower() not in _BOOLEANS:
            raise ValueError("expected true/false")
        return _BOOLEANS[raw.lower()]
    return raw


def parse_config(text: str) -> SimulationConfig:
    """Parse and validate configuration text.

    Raises
    ------
    ConfigError
        Listing every unknown key, missing required key, duplicate and
        out-of-range value, each with its ``section.key`` path.
    """
    parser = configparser.ConfigParser(strict=True, interpolation=None, inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError([f"duplicate key {exc.section}.{exc.option} (line {exc.lineno})"]) from exc
    except configparser.DuplicateSectionError as exc:
        raise ConfigError([f"duplicate section [{exc.section}] (line {exc.lineno})"]) from exc
    except configparser.Error as exc:
        raise ConfigError([f"parse error: {exc}"]) from exc

    errors = []
    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            errors.append(f"unknown section [{section}]")
    for section, keys in _SCHEMA.items():
        present = parser[section] if parser.has_section(section) else {}
        for key in present:
            if key not in keys:
                errors.append(f"unknown key {section}.{key}")
        for key, (kind, default) in keys.items():
            path = f"{section}.{key}"
            if key not in present:
                if default is None and section == "geometry":
                    errors.append(f"missing required key {path}")
                values[path] = default
                continue
            try:
                values[path] = _convert(kind, present[key])
            except ValueError as exc:
                errors.append(f"{path}: invalid value {present[key]!r} ({exc})")
                values[path] = default

    def check(path, ok, message):
        if values.get(path) is not None and not ok(values[path]):
            errors.append(f"{path}: {message}, got {values[path]!r}")

    check("geometry.R", lambda v: v > 0, "must be positive")
    check("geometry.theta", lambda v: 0.0 <= v <= math.pi, "must lie in [0, pi] (radians)")
    check("params.omega_L", lambda v: v >= 0, "must be non-negative")
    check("run.t_end", lambda v: v > 0, "must be positive")
    check("run.output_dt", lambda v: v > 0, "must be positive")
    check("run.integrator_dt", lambda v: v > 0, "must be positive")
    check("run.n_theta", lambda v: v >= 2, "must be at least 2")
    check("run.samples", lambda v: v >= 1, "must be at least 1")
    check("run.states", lambda v: v >= 1, "must be at least 1")
    check("run.scheme", _valid_scheme, "must be a non-empty subset of 1,2,3 such as '2' or '1,3'")
    t_end, out_dt = values.get("run.t_end"), values.get("run.output_dt")
    if t_end and out_dt and out_dt > t_end:
        errors.append(f"run.output_dt: must not exceed run.t_end, got {out_dt!r} > {t_end!r}")
    if errors:
        raise ConfigError(errors)

    return SimulationConfig(
        geometry=Geometry(values["geometry.R"], values["geometry.theta"], values["geometry.phi"]),
        params=SystemParams(**{k: values[f"params.{k}"] for k in _SCHEMA["params"]}),
        run=RunSettings(**{k: values[f"run.{k}"] for k in _SCHEMA["run"]}),
    )


def _valid_scheme(text: str) -> bool:
    try:
        levels = scheme_levels(text)
    except ValueError:
        return False
    return bool(levels)


def scheme_levels(text: str) -> tuple:
    parts = [p for p in text.replace("{", "").replace("}", "").replace(" ", "").split(",") if p]
    levels = tuple(int(p) for p in parts)
    if not levels or any(i not in (1, 2, 3) for i in levels) or len(set(levels)) != len(levels):
        raise ValueError(f"bad scheme {text!r}")
    return levels


def load_config(path) -> SimulationConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
