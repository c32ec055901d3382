"""Run configuration: INI files with sections, shipped material presets."""

import configparser
import dataclasses
from dataclasses import dataclass, field
from importlib import resources

from .materials import ConductorParams, DrudeLikePermittivity, boyer_threshold

MODELS = ("perfect", "dielectric", "conductor")
PATHS = ("c1", "c2", "both")
FORMATS = ("csv", "json")
OMEGA_FLOOR, OMEGA_CEIL = 1e6, 1e16


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BoyerParams:
    rho: float = 3.3333333333333333e-18  # resistivity, s
    eta: float = 3.883251825111398e16  # s^-1

    @property
    def threshold(self):
        return boyer_threshold(self.rho, self.eta)


@dataclass(frozen=True)
class RunConfig:
    separation_um: float = 1.0
    temperature_k: float = 300.0
    model: str = "dielectric"
    path: str = "both"
    omega_min: float = 1e9
    omega_max: float = 1e15
    points: int = 61
    rel_tol: float = 1e-8
    format: str = "csv"
    output: str = "-"
    dielectric: DrudeLikePermittivity = field(default_factory=DrudeLikePermittivity)
    conductor: ConductorParams = field(default_factory=ConductorParams)
    boyer: BoyerParams = field(default_factory=BoyerParams)

    def __post_init__(self):
        if not (self.separation_um > 0 and self.temperature_k > 0):
            raise ConfigError("separation and temperature must be positive")
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.path not in PATHS:
            raise ConfigError(f"path must be one of {PATHS}, got {self.path!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not OMEGA_FLOOR <= self.omega_min < self.omega_max <= OMEGA_CEIL:
            raise ConfigError(f"need {OMEGA_FLOOR:g} <= omega_min < omega_max <= {OMEGA_CEIL:g}, "
                              f"got [{self.omega_min:g}, {self.omega_max:g}]")
        if self.points < 1:
            raise ConfigError("points must be >= 1")
        if not self.rel_tol > 0:
            raise ConfigError("rel_tol must be positive")

    @property
    def separation_cm(self):
        return self.separation_um * 1e-4

    def replace(self, **changes):
        try:
            return dataclasses.replace(self, **changes)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self):
        run = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)
               if f.name not in ("dielectric", "conductor", "boyer")}
        conductor = dataclasses.asdict(self.conductor)
        conductor.update(dataclasses.asdict(self.boyer))
        return {"run": run, "dielectric": dataclasses.asdict(self.dielectric),
                "conductor": conductor}

    @classmethod
    def from_dict(cls, data):
        return _build(cls(), data)


_RUN_TYPES = {"separation_um": float, "temperature_k": float, "model": str, "path": str,
              "omega_min": float, "omega_max": float, "points": int, "rel_tol": float,
              "format": str, "output": str}


def _build(base, data):
    unknown = set(data) - {"run", "dielectric", "conductor"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    try:
        run = {}
        for key, value in data.get("run", {}).items():
            if key not in _RUN_TYPES:
                raise ConfigError(f"unknown key [run] {key}")
            run[key] = _RUN_TYPES[key](value)
        diel = dataclasses.asdict(base.dielectric)
        for key, value in data.get("dielectric", {}).items():
            if key not in diel:
                raise ConfigError(f"unknown key [dielectric] {key}")
            diel[key] = float(value)
        cond = dataclasses.asdict(base.conductor)
        boyer = dataclasses.asdict(base.boyer)
        for key, value in data.get("conductor", {}).items():
            if key in cond:
                cond[key] = float(value)
            elif key in boyer:
                boyer[key] = float(value)
            else:
                raise ConfigError(f"unknown key [conductor] {key}")
        return base.replace(dielectric=DrudeLikePermittivity(**diel),
                            conductor=ConductorParams(**cond),
                            boyer=BoyerParams(**boyer), **run)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _parse_ini(text, source):
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    return {name: dict(parser[name]) for name in parser.sections()}


def load_preset(name="au"):
    text = resources.files("casimir_te.presets").joinpath(f"{name}.ini").read_text()
    return _build(RunConfig(), _parse_ini(text, f"preset {name}"))


def load_config(path=None, base=None):
    """Preset (gold by default) overlaid with the INI file at ``path``."""
    config = base if base is not None else load_preset()
    if path is None:
        return config
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return _build(config, _parse_ini(text, str(path)))
