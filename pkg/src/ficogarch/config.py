"""Run configuration: INI files with one section per module.

Example::

    [simulation]
    seed = 7
    t_end = 500
    step = 0.1

    [kernel]
    family = modified
    a = 1
    d = -0.4

    [driver]
    rate = 5
    jump = normal
    jump_var = 0.5

    [model]
    alpha0 = 0.0195
    alpha1 = 0.0105
    beta1 = 0.0513

Keys left out take the defaults below, which reproduce the Figure 2 setting
of the FICOGARCH(1,d,1) experiments.  An empty value means "use the built-in
default" for the optional keys (``past_horizon``, ``vol_horizon``).  Unknown
sections or keys are rejected so that typos do not pass silently.
"""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field, fields
from typing import Any

from .cogarch import FicogarchParams
from .errors import InvalidSpecError
from .fracsub import FracSubConfig
from .kernels import KernelSpec
from .levy import CompoundPoisson, Constant, Exponential, LevySpec, Normal, PathGrid

__all__ = [
    "SimulationSection",
    "KernelSection",
    "DriverSection",
    "ModelSection",
    "RunConfig",
    "load_config",
]


@dataclass(frozen=True)
class SimulationSection:
    seed: int = 0
    paths: int = 1
    t_end: float = 100.0
    step: float = 0.1
    past_horizon: float | None = None
    vol_horizon: float | None = None
    scheme: str = "stochastic_riemann"
    tail_compensation: bool = True
    pathological: bool = False
    # S for the fracsub commands: the squared jumps of L, or L itself
    subordinator: str = "squared_jumps"
    jobs: int = 1


@dataclass(frozen=True)
class KernelSection:
    family: str = "modified"
    a: float = 1.0
    d: float = -0.4


@dataclass(frozen=True)
class DriverSection:
    drift: float = 0.0
    gaussian_var: float = 0.0
    rate: float = 5.0
    jump: str = "normal"
    jump_mean: float = 0.0
    jump_var: float = 0.5
    jump_rate: float = 1.0
    jump_value: float = 1.0


@dataclass(frozen=True)
class ModelSection:
    alpha0: float = 0.0195
    alpha1: float = 0.0105
    beta1: float = 0.0513
    sigma0_sq: str = "stationary"
    G0: float = 0.0


_SECTIONS = {
    "simulation": SimulationSection,
    "kernel": KernelSection,
    "driver": DriverSection,
    "model": ModelSection,
}


@dataclass(frozen=True)
class RunConfig:
    simulation: SimulationSection = field(default_factory=SimulationSection)
    kernel: KernelSection = field(default_factory=KernelSection)
    driver: DriverSection = field(default_factory=DriverSection)
    model: ModelSection = field(default_factory=ModelSection)

    def override(self, section: str, **values: Any) -> "RunConfig":
        """Copy with the non-``None`` ``values`` replaced in ``section``."""
        values = {k: v for k, v in values.items() if v is not None}
        if not values:
            return self
        return dataclasses.replace(self, **{section: dataclasses.replace(getattr(self, section), **values)})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    # builders -------------------------------------------------------------

    def levy_spec(self) -> LevySpec:
        dr = self.driver
        laws = {
            "normal": lambda: Normal(dr.jump_mean, dr.jump_var),
            "exponential": lambda: Exponential(dr.jump_rate),
            "constant": lambda: Constant(dr.jump_value),
        }
        if dr.jump == "none":
            jumps = None
        elif dr.jump in laws:
            jumps = CompoundPoisson(dr.rate, laws[dr.jump]())
        else:
            raise InvalidSpecError(f"unknown jump law {dr.jump!r}; choose normal, exponential, constant or none")
        return LevySpec(dr.drift, dr.gaussian_var, jumps)

    def subordinator_spec(self) -> LevySpec:
        mode = self.simulation.subordinator
        if mode == "squared_jumps":
            return self.levy_spec().squared_jumps()
        if mode == "levy":
            return self.levy_spec()
        raise InvalidSpecError(f"subordinator must be 'squared_jumps' or 'levy', got {mode!r}")

    def kernel_spec(self) -> KernelSpec:
        k = self.kernel
        if k.family == "modified":
            return KernelSpec.modified(k.a, k.d)
        if k.family == "mg":
            return KernelSpec.mg(k.d)
        if k.family == "mvn":
            return KernelSpec.mvn(k.d)
        raise InvalidSpecError(f"unknown kernel family {k.family!r}; choose modified, mg or mvn")

    def grid(self, t_start: float = 0.0) -> PathGrid:
        s = self.simulation
        return PathGrid.from_span(t_start, s.t_end, s.step)

    def fracsub_config(self) -> FracSubConfig:
        s = self.simulation
        return FracSubConfig(
            self.kernel_spec(),
            self.subordinator_spec(),
            self.grid(),
            s.past_horizon,
            s.scheme,
            s.tail_compensation,
            s.pathological,
        )

    def ficogarch_params(self) -> FicogarchParams:
        m = self.model
        s0 = m.sigma0_sq.strip()
        if s0 != "stationary":
            try:
                s0 = float(s0)
            except ValueError:
                raise InvalidSpecError(f"sigma0_sq must be a number or 'stationary', got {m.sigma0_sq!r}") from None
        return FicogarchParams(m.alpha0, m.alpha1, m.beta1, self.levy_spec(), self.kernel_spec(), s0, m.G0)


def _convert(raw: str, typ: str, key: str):
    raw = raw.strip()
    optional = "None" in typ
    if optional and raw == "":
        return None
    try:
        if typ.startswith("int"):
            return int(raw)
        if typ.startswith("float"):
            return float(raw)
        if typ == "bool":
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError:
        raise InvalidSpecError(f"cannot read {key} = {raw!r} as {typ}") from None
    return raw


def load_config(path: str | os.PathLike | None = None, text: str | None = None) -> RunConfig:
    """Read a :class:`RunConfig` from an INI file (or string); ``None`` gives defaults."""
    cfg = RunConfig()
    if path is None and text is None:
        return cfg
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        if text is not None:
            parser.read_string(text)
        else:
            with open(path) as fh:
                parser.read_file(fh)
    except configparser.Error as exc:
        raise InvalidSpecError(f"malformed config: {exc}") from None
    for name in parser.sections():
        if name not in _SECTIONS:
            raise InvalidSpecError(f"unknown config section [{name}]; expected one of {sorted(_SECTIONS)}")
        types = {f.name: str(f.type) for f in fields(_SECTIONS[name])}
        values = {}
        for key, raw in parser.items(name):
            if key not in types:
                raise InvalidSpecError(f"unknown key {key!r} in [{name}]")
            values[key] = _convert(raw, types[key], key)
        cfg = dataclasses.replace(cfg, **{name: dataclasses.replace(getattr(cfg, name), **values)})
    return cfg
