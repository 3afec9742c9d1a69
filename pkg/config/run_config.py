"""
Run configuration files

Sectioned plain text, one `key = value` per line, `#` starts a comment:

    [model]   variant, tau, chi, xi, lambda, mu, r, m1, m2, m3, beta, delta,
              alpha, k, gamma0, gamma1, l, test_mode
    [grid]    dimension, lengths, cells
    [time]    T, cfl, dt_min, dt_max, record_interval, blowup_threshold, growth_factor
    [init]    preset, signals and preset parameters
    [output]  dir, snapshot_every, p_list, phi_p
    [sweep]   simulate, budget and `param = start:stop:count` axes
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from config.config import Config
from core.errors import ConfigError, ConfigTypeError, MissingSection, UnknownKey
from model.problem import DomainSpec, ModelSpec, ValidatedModel, validate_model
from model.production import make_production_law
from solver.grid import build_grid
from solver.settings import SolverSettings

REQUIRED_SECTIONS = ("model", "grid", "time")

MODEL_FLOATS = (
    "chi", "xi", "lambda", "mu", "r", "m1", "m2", "m3",
    "beta", "delta", "alpha", "k", "gamma0", "gamma1", "l",
)
REQUIRED_MODEL_KEYS = (
    "variant", "tau", "chi", "xi", "lambda", "mu", "r", "m1", "m2", "m3", "k", "l",
)

SECTION_KEYS = {
    "model": ("variant", "tau", "test_mode") + MODEL_FLOATS,
    "grid": ("dimension", "lengths", "cells"),
    "time": ("T", "cfl", "dt_min", "dt_max", "record_interval", "blowup_threshold", "growth_factor"),
    "init": ("preset", "signals", "c", "center", "width", "amplitude", "floor", "seed", "path"),
    "output": ("dir", "snapshot_every", "p_list", "phi_p"),
    "sweep": ("simulate", "budget"),
}

PRESET_FLOATS = ("c", "width", "amplitude", "floor")

# parameters a sweep axis may vary
SWEEPABLE = MODEL_FLOATS


@dataclass(frozen=True)
class TimeSpec:
    T: float
    cfl: float = Config.DEFAULT_CFL
    dt_min: float = Config.DT_MIN
    dt_max: Optional[float] = None
    record_interval: Optional[float] = None
    blowup_threshold: float = Config.BLOWUP_THRESHOLD
    growth_factor: float = Config.GROWTH_FACTOR


@dataclass(frozen=True)
class InitSpec:
    preset: str = "constant"
    params: Tuple[Tuple[str, object], ...] = ()
    signals: str = "equilibrium"

    def kwargs(self) -> Dict[str, object]:
        return dict(self.params)


@dataclass(frozen=True)
class OutputSpec:
    dir: str = str(Config.OUTPUT_DIR)
    snapshot_every: int = 0
    p_list: Tuple[float, ...] = (2.0,)
    phi_p: float = 2.0


@dataclass(frozen=True)
class SweepAxis:
    param: str
    start: float
    stop: float
    count: int


@dataclass(frozen=True)
class SweepSpec:
    axes: Tuple[SweepAxis, ...] = ()
    simulate: bool = False
    budget: Optional[int] = None


@dataclass(frozen=True)
class RunSpec:
    model: ValidatedModel
    domain: DomainSpec
    time: TimeSpec
    init: InitSpec = field(default_factory=InitSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    sweep: Optional[SweepSpec] = None

    def solver_settings(self) -> SolverSettings:
        return SolverSettings(
            cfl=self.time.cfl,
            dt_min=self.time.dt_min,
            dt_max=self.time.dt_max,
            blowup_threshold=self.time.blowup_threshold,
        )


# ============ VALUE CONVERSION ============
def _float(value: str, key: str, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigTypeError(f"{key} must be a number, got {value!r}", line) from None


def _int(value: str, key: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigTypeError(f"{key} must be an integer, got {value!r}", line) from None


def _bool(value: str, key: str, line: int) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigTypeError(f"{key} must be true or false, got {value!r}", line)


def _float_list(value: str, key: str, line: int) -> Tuple[float, ...]:
    return tuple(_float(item.strip(), key, line) for item in value.split(",") if item.strip())


def _int_list(value: str, key: str, line: int) -> Tuple[int, ...]:
    return tuple(_int(item.strip(), key, line) for item in value.split(",") if item.strip())


# ============ PARSING ============
def _read_sections(text: str) -> Dict[str, Dict[str, Tuple[str, int]]]:
    sections: Dict[str, Dict[str, Tuple[str, int]]] = {}
    current = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in SECTION_KEYS:
                raise UnknownKey(f"unknown section [{current}]", number)
            if current in sections:
                raise ConfigTypeError(f"duplicate section [{current}]", number)
            sections[current] = {}
            continue

        if current is None:
            raise ConfigError("key outside of any section", number)
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigTypeError(f"expected 'key = value', got {line!r}", number)
        key, value = key.strip(), value.strip()

        if key in sections[current]:
            raise ConfigTypeError(
                f"duplicate key {key!r} in [{current}] (first set on line {sections[current][key][1]})",
                number,
            )
        if key not in SECTION_KEYS[current] and current != "sweep":
            raise UnknownKey(f"unknown key {key!r} in [{current}]", number)
        sections[current][key] = (value, number)

    for name in REQUIRED_SECTIONS:
        if name not in sections:
            raise MissingSection(f"missing section [{name}]")
    return sections


def _parse_model(entries, dimension: int) -> ValidatedModel:
    for key in REQUIRED_MODEL_KEYS:
        if key not in entries:
            raise MissingSection(f"[model] needs {key}")

    values = {}
    for key in MODEL_FLOATS:
        if key in entries:
            values[key] = _float(entries[key][0], key, entries[key][1])

    variant = entries["variant"][0]
    tau = _int(entries["tau"][0], "tau", entries["tau"][1])
    test_mode = False
    if "test_mode" in entries:
        test_mode = _bool(entries["test_mode"][0], "test_mode", entries["test_mode"][1])

    return validate_model(build_model(variant, tau, values, dimension, test_mode))


def build_model(variant: str, tau: int, values: Dict[str, float], n: int, test_mode: bool = False) -> ModelSpec:
    """ModelSpec from config-style keys; beta, delta, alpha, gamma0 default to 1"""
    gamma0 = values.get("gamma0", 1.0)
    attractant = make_production_law(
        "attractant", "prototype", {"alpha": values.get("alpha", 1.0), "k": values["k"]},
    )
    repellent = make_production_law(
        "repellent", "prototype",
        {"gamma0": gamma0, "gamma1": values.get("gamma1", gamma0), "l": values["l"]},
    )
    return ModelSpec(
        variant=variant,
        tau=tau,
        chi=values["chi"],
        xi=values["xi"],
        lambda_=values["lambda"],
        mu=values["mu"],
        r=values["r"],
        m1=values["m1"],
        m2=values["m2"],
        m3=values["m3"],
        beta=values.get("beta", 1.0),
        delta=values.get("delta", 1.0),
        attractant=attractant,
        repellent=repellent,
        n=n,
        test_mode=test_mode,
    )


def model_values(model: ModelSpec) -> Dict[str, float]:
    """Inverse of build_model for the float keys"""
    return {
        "chi": model.chi, "xi": model.xi, "lambda": model.lambda_, "mu": model.mu,
        "r": model.r, "m1": model.m1, "m2": model.m2, "m3": model.m3,
        "beta": model.beta, "delta": model.delta,
        "alpha": model.attractant.alpha, "k": model.attractant.k,
        "gamma0": model.repellent.gamma0, "gamma1": model.repellent.gamma1,
        "l": model.repellent.l,
    }


def with_model_values(spec: RunSpec, overrides: Dict[str, float]) -> RunSpec:
    """Copy of `spec` with some model keys replaced, validated again"""
    values = {**model_values(spec.model), **overrides}
    model = build_model(spec.model.variant, spec.model.tau, values, spec.model.n, spec.model.test_mode)
    return replace(spec, model=validate_model(model))


def _parse_domain(entries) -> DomainSpec:
    for key in SECTION_KEYS["grid"]:
        if key not in entries:
            raise MissingSection(f"[grid] needs {key}")
    dimension = _int(entries["dimension"][0], "dimension", entries["dimension"][1])
    lengths = _float_list(entries["lengths"][0], "lengths", entries["lengths"][1])
    cells = _int_list(entries["cells"][0], "cells", entries["cells"][1])
    if len(lengths) != dimension or len(cells) != dimension:
        raise ConfigTypeError(
            f"lengths and cells need {dimension} entries", entries["dimension"][1]
        )
    domain = DomainSpec(dimension=dimension, extents=lengths, cells=cells)
    build_grid(domain)
    return domain


def _parse_time(entries) -> TimeSpec:
    if "T" not in entries:
        raise MissingSection("[time] needs T")
    values = {key: _float(value, key, line) for key, (value, line) in entries.items()}

    T = values["T"]
    if not T > 0:
        raise ConfigError(f"T must be positive, got {T}", entries["T"][1])
    cfl = values.get("cfl", Config.DEFAULT_CFL)
    if not 0 < cfl <= 1:
        raise ConfigError(f"cfl must lie in (0, 1], got {cfl}", entries["cfl"][1])

    record_interval = values.get("record_interval", T / Config.RECORD_SAMPLES)
    return TimeSpec(
        T=T,
        cfl=cfl,
        dt_min=values.get("dt_min", Config.DT_MIN),
        dt_max=values.get("dt_max", record_interval),
        record_interval=record_interval,
        blowup_threshold=values.get("blowup_threshold", Config.BLOWUP_THRESHOLD),
        growth_factor=values.get("growth_factor", Config.GROWTH_FACTOR),
    )


def _parse_init(entries) -> InitSpec:
    params = []
    for key, (value, line) in entries.items():
        if key in ("preset", "signals"):
            continue
        if key in PRESET_FLOATS:
            params.append((key, _float(value, key, line)))
        elif key == "center":
            params.append((key, _float_list(value, key, line)))
        elif key == "seed":
            params.append((key, _int(value, key, line)))
        else:
            params.append((key, value))

    return InitSpec(
        preset=entries.get("preset", ("constant", 0))[0],
        params=tuple(sorted(params)),
        signals=entries.get("signals", ("equilibrium", 0))[0],
    )


def _parse_output(entries) -> OutputSpec:
    spec = OutputSpec()
    if "dir" in entries:
        spec = replace(spec, dir=entries["dir"][0])
    if "snapshot_every" in entries:
        value, line = entries["snapshot_every"]
        spec = replace(spec, snapshot_every=_int(value, "snapshot_every", line))
    if "p_list" in entries:
        value, line = entries["p_list"]
        spec = replace(spec, p_list=_float_list(value, "p_list", line))
    if "phi_p" in entries:
        value, line = entries["phi_p"]
        spec = replace(spec, phi_p=_float(value, "phi_p", line))
    return spec


def _parse_sweep(entries) -> SweepSpec:
    axes: List[SweepAxis] = []
    simulate = False
    budget = None
    for key, (value, line) in entries.items():
        if key == "simulate":
            simulate = _bool(value, key, line)
        elif key == "budget":
            budget = _int(value, key, line)
        elif key in SWEEPABLE:
            parts = value.split(":")
            if len(parts) != 3:
                raise ConfigTypeError(f"sweep axis {key} must be start:stop:count", line)
            count = _int(parts[2].strip(), key, line)
            if count < 1:
                raise ConfigError(f"sweep axis {key} needs a positive count", line)
            axes.append(SweepAxis(
                key, _float(parts[0].strip(), key, line), _float(parts[1].strip(), key, line), count,
            ))
        else:
            raise UnknownKey(f"{key!r} cannot be swept", line)
    return SweepSpec(axes=tuple(axes), simulate=simulate, budget=budget)


def parse_config(text: str) -> RunSpec:
    """
    Parse and validate a run configuration

    Raises:
        UnknownKey, MissingSection, ConfigTypeError (with line numbers),
        ModelValidationError from validate_model
    """
    sections = _read_sections(text)
    domain = _parse_domain(sections["grid"])
    return RunSpec(
        model=_parse_model(sections["model"], domain.dimension),
        domain=domain,
        time=_parse_time(sections["time"]),
        init=_parse_init(sections.get("init", {})),
        output=_parse_output(sections.get("output", {})),
        sweep=_parse_sweep(sections["sweep"]) if "sweep" in sections else None,
    )


# ============ RENDERING ============
def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def render_config(spec: RunSpec) -> str:
    """Config text that parses back to `spec`"""
    lines = ["[model]", f"variant = {spec.model.variant}", f"tau = {spec.model.tau}"]
    lines += [f"{key} = {_fmt(float(value))}" for key, value in model_values(spec.model).items()]
    lines.append(f"test_mode = {_fmt(spec.model.test_mode)}")

    lines += [
        "",
        "[grid]",
        f"dimension = {spec.domain.dimension}",
        f"lengths = {_fmt(tuple(float(x) for x in spec.domain.extents))}",
        f"cells = {_fmt(tuple(spec.domain.cells))}",
        "",
        "[time]",
    ]
    for key in SECTION_KEYS["time"]:
        value = getattr(spec.time, key)
        if value is not None:
            lines.append(f"{key} = {_fmt(float(value))}")

    lines += ["", "[init]", f"preset = {spec.init.preset}", f"signals = {spec.init.signals}"]
    lines += [f"{key} = {_fmt(value)}" for key, value in spec.init.params]

    lines += [
        "",
        "[output]",
        f"dir = {spec.output.dir}",
        f"snapshot_every = {spec.output.snapshot_every}",
        f"p_list = {_fmt(tuple(float(p) for p in spec.output.p_list))}",
        f"phi_p = {_fmt(float(spec.output.phi_p))}",
    ]

    if spec.sweep is not None:
        lines += ["", "[sweep]", f"simulate = {_fmt(spec.sweep.simulate)}"]
        if spec.sweep.budget is not None:
            lines.append(f"budget = {spec.sweep.budget}")
        lines += [
            f"{axis.param} = {axis.start!r}:{axis.stop!r}:{axis.count}" for axis in spec.sweep.axes
        ]

    return "\n".join(lines) + "\n"
