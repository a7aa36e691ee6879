"""
Lab configuration: INI files, compact spec strings, environment defaults.

Resolution order, later wins:

    built-in defaults < OSCILLAB_* environment (.env honoured) < INI file < flags

INI layout::

    [run]           trials, horizon, seed, k_cap, batch_size, workers,
                    trace_points, depth
    [measure]       spec = bernoulli:0.3333   (or kind = ..., p = / probs = ...)
    [process]       kind, q, a, b, prior, value
    [schedule]      spec = finite:0.2,3       (or kind = ..., delta, m, a, b)
    [bands]         bands = 1:0.0333, 1:0.1   | schedule | tight | auto
    [alternations]  alphas = 0.2, 0.1
    [output]        out_dir, tight_tolerance, tallies

Spec strings: ``bernoulli:p``, ``categorical:p0,p1,...``; ``finite:delta,m``,
``logsq:delta``, ``band:a,b``, ``invlog:a,b``.
"""

from configparser import ConfigParser, Error as ConfigParserError
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import ConfigError, OscillabError
from ..martingale import (
    MartingaleProcess,
    belief_process,
    bounded_split_process,
    constant_process,
    doubling_process,
    quotient_martingale,
)
from ..measure import PrefixMeasure, bernoulli_measure, categorical_measure
from ..oscillator import (
    Schedule,
    ScheduleKind,
    build_oscillator,
    doob_tight_process,
    schedule_constant_band,
    schedule_finite,
    schedule_inverse_log,
    schedule_log_squared,
)

logger = logging.getLogger(__name__)

ENV_KEYS = {
    "OSCILLAB_OUT_DIR": "out_dir",
    "OSCILLAB_WORKERS": "workers",
    "OSCILLAB_BATCH_SIZE": "batch_size",
}
SCHEDULE_BAND_COUNT = 5     # bands taken from a schedule without a natural m
UNIT_INTERVAL_KINDS = ("bounded_split", "belief")


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


# =============================================================================
# SPEC MODELS
# =============================================================================

class MeasureSpec(BaseModel):
    """An i.i.d. reference measure."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["bernoulli", "categorical"] = "bernoulli"
    probs: Tuple[float, ...] = (2.0 / 3.0, 1.0 / 3.0)

    @classmethod
    def parse(cls, text: str) -> "MeasureSpec":
        kind, _, rest = text.strip().partition(":")
        kind = kind.strip().lower()
        values = _floats(rest)
        if kind == "bernoulli":
            if len(values) != 1:
                raise ConfigError(f"bernoulli spec takes one probability, got {text!r}")
            p = values[0]
            return cls(kind="bernoulli", probs=(1.0 - p, p))
        if kind == "categorical":
            return cls(kind="categorical", probs=tuple(values))
        raise ConfigError(f"unknown measure kind {kind!r} in {text!r}")

    def build(self) -> PrefixMeasure:
        if self.kind == "bernoulli":
            return bernoulli_measure(self.probs[1])
        return categorical_measure(self.probs)

    def label(self) -> str:
        if self.kind == "bernoulli":
            return f"bernoulli:{self.probs[1]:g}"
        return "categorical:" + ",".join(f"{p:g}" for p in self.probs)


class ScheduleSpec(BaseModel):
    """Magnitude schedule for the oscillator."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["finite", "logsq", "band", "invlog"] = "finite"
    params: Tuple[float, ...] = (0.2, 3.0)

    @classmethod
    def parse(cls, text: str) -> "ScheduleSpec":
        kind, _, rest = text.strip().partition(":")
        return cls(kind=kind.strip().lower(), params=tuple(_floats(rest)))

    @model_validator(mode="after")
    def _check_arity(self) -> "ScheduleSpec":
        arity = {"finite": 2, "logsq": 1, "band": 2, "invlog": 2}[self.kind]
        if len(self.params) != arity:
            raise ValueError(f"{self.kind} schedule takes {arity} parameters, got {list(self.params)}")
        if self.kind == "finite" and self.params[1] != int(self.params[1]):
            raise ValueError(f"finite schedule needs an integer m, got {self.params[1]}")
        return self

    def build(self) -> Schedule:
        if self.kind == "finite":
            return schedule_finite(self.params[0], int(self.params[1]))
        if self.kind == "logsq":
            return schedule_log_squared(self.params[0])
        if self.kind == "band":
            return schedule_constant_band(*self.params)
        return schedule_inverse_log(*self.params)

    def label(self) -> str:
        return f"{self.kind}:" + ",".join(f"{p:g}" for p in self.params)


class ProcessSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal[
        "oscillator", "doob_tight", "quotient", "constant", "doubling", "bounded_split", "belief"
    ] = "oscillator"
    q: Optional[MeasureSpec] = None     # quotient numerator / belief alternative
    a: float = 1.0
    b: float = 2.0
    prior: float = 0.5
    value: float = 1.0


class BandSpec(BaseModel):
    """Band (c − eps, c + eps)."""

    model_config = ConfigDict(frozen=True)

    c: float
    eps: float = Field(gt=0.0)

    @classmethod
    def parse(cls, text: str) -> "BandSpec":
        c, sep, eps = text.strip().partition(":")
        if not sep:
            raise ConfigError(f"band must be written c:eps, got {text!r}")
        values = _floats(c) + _floats(eps)
        return cls(c=values[0], eps=values[1])

    @property
    def lo(self) -> float:
        return self.c - self.eps

    @property
    def hi(self) -> float:
        return self.c + self.eps


class LabConfig(BaseModel):
    """Everything a run needs; (seed, config) determines every output byte."""

    model_config = ConfigDict(frozen=True)

    measure: MeasureSpec = MeasureSpec()
    process: ProcessSpec = ProcessSpec()
    schedule: ScheduleSpec = ScheduleSpec()
    trials: int = Field(default=10_000, ge=1)
    horizon: int = Field(default=1_000, ge=0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    k_cap: int = Field(default=5, ge=1)
    batch_size: int = Field(default=4096, ge=1)
    workers: int = Field(default=1, ge=1)
    trace_points: int = Field(default=32, ge=1)
    depth: int = Field(default=10, ge=1)
    bands_mode: Literal["auto", "explicit", "schedule", "tight"] = "auto"
    bands: Tuple[BandSpec, ...] = ()
    alphas: Tuple[float, ...] = ()
    out_dir: Optional[Path] = None
    tight_tolerance: float = Field(default=0.02, ge=0.0)
    tallies: bool = False

    @field_validator("alphas")
    @classmethod
    def _check_alphas(cls, alphas: Tuple[float, ...]) -> Tuple[float, ...]:
        for alpha in alphas:
            if not 0.0 < alpha < 1.0:
                raise ValueError(f"alternation size must lie in (0, 1), got {alpha}")
        return alphas

    @model_validator(mode="after")
    def _check_bands(self) -> "LabConfig":
        if self.bands_mode == "explicit" and not self.bands:
            raise ValueError("explicit band mode needs at least one c:eps band")
        if self.bands_mode == "tight" and self.process.kind != "doob_tight":
            raise ValueError("tight bands are only defined for the doob_tight process")
        if self.process.kind == "quotient" and self.process.q is None:
            raise ValueError("quotient process needs q = <measure spec>")
        if self.process.kind == "belief" and self.process.q is None:
            raise ValueError("belief process needs q = <alternative measure spec>")
        return self


# =============================================================================
# LOADING
# =============================================================================

def _env_values() -> Dict[str, Any]:
    load_dotenv(override=False)
    values: Dict[str, Any] = {}
    for key, field_name in ENV_KEYS.items():
        if os.environ.get(key):
            values[field_name] = os.environ[key]
    return values


def _read_ini(path: Path) -> Dict[str, Any]:
    parser = ConfigParser()
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    except ConfigParserError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    values: Dict[str, Any] = {}
    if parser.has_section("run"):
        for key in ("trials", "horizon", "seed", "k_cap", "batch_size", "workers", "trace_points", "depth"):
            if parser.has_option("run", key):
                values[key] = parser.get("run", key)

    if parser.has_section("measure"):
        section = parser["measure"]
        if "spec" in section:
            values["measure"] = section["spec"]
        elif "p" in section:
            values["measure"] = f"bernoulli:{section['p']}"
        elif "probs" in section:
            values["measure"] = f"categorical:{section['probs']}"

    if parser.has_section("process"):
        process = dict(parser["process"])
        if "q" in process:
            process["q"] = MeasureSpec.parse(process["q"])
        values["process"] = process

    if parser.has_section("schedule"):
        section = parser["schedule"]
        if "spec" in section:
            values["schedule"] = section["spec"]
        elif "kind" in section:
            kind = section["kind"].strip().lower()
            keys = {"finite": ("delta", "m"), "logsq": ("delta",), "band": ("a", "b"), "invlog": ("a", "b")}
            if kind not in keys:
                raise ConfigError(f"unknown schedule kind {kind!r} in {path}")
            values["schedule"] = f"{kind}:" + ",".join(section.get(k, "") for k in keys[kind])

    if parser.has_option("bands", "bands"):
        values["bands"] = parser.get("bands", "bands")

    if parser.has_option("alternations", "alphas"):
        values["alphas"] = parser.get("alternations", "alphas")

    if parser.has_section("output"):
        section = parser["output"]
        for key in ("out_dir", "tight_tolerance"):
            if key in section:
                values[key] = section[key]
        if "tallies" in section:
            values["tallies"] = section.getboolean("tallies")
    return values


def _normalize(values: Dict[str, Any]) -> Dict[str, Any]:
    """Turn spec strings into model inputs."""
    out = dict(values)
    if isinstance(out.get("measure"), str):
        out["measure"] = MeasureSpec.parse(out["measure"])
    if isinstance(out.get("schedule"), str):
        out["schedule"] = ScheduleSpec.parse(out["schedule"])
    if isinstance(out.get("process"), str):
        out["process"] = {"kind": out["process"]}
    bands = out.pop("bands", None)
    if isinstance(bands, str):
        text = bands.strip().lower()
        if text in ("auto", "schedule", "tight"):
            out["bands_mode"] = text
        else:
            out["bands_mode"] = "explicit"
            out["bands"] = tuple(BandSpec.parse(b) for b in bands.split(",") if b.strip())
    elif bands:
        out["bands_mode"] = "explicit"
        out["bands"] = tuple(b if isinstance(b, BandSpec) else BandSpec.parse(b) for b in bands)
    if isinstance(out.get("alphas"), str):
        out["alphas"] = tuple(_floats(out["alphas"]))
    return out


def _merge(base: Dict[str, Any], layer: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in layer.items():
        if key == "process" and isinstance(value, dict) and isinstance(merged.get("process"), dict):
            merged["process"] = {**merged["process"], **value}
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[Union[str, Path]] = None, overrides: Optional[Dict[str, Any]] = None) -> LabConfig:
    """Resolve a LabConfig from environment, an optional INI file and flag overrides.

    ``overrides`` entries that are None are ignored, so CLI options can be
    passed straight through.

    Raises:
        ConfigError: Unreadable file, bad spec string or failed validation.
    """
    try:
        values = _normalize(_env_values())
        if path is not None:
            values = _merge(values, _normalize(_read_ini(Path(path))))
        if overrides:
            values = _merge(values, _normalize({k: v for k, v in overrides.items() if v is not None}))
        config = LabConfig(**values)
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    except ConfigError:
        raise
    except OscillabError as exc:
        raise ConfigError(str(exc)) from exc
    logger.debug("Resolved configuration: %s", config.model_dump_json())
    return config


# =============================================================================
# RESOLUTION
# =============================================================================

def build_process(config: LabConfig) -> Tuple[MartingaleProcess, PrefixMeasure]:
    """The configured process and the measure paths are sampled under.

    Raises:
        ConfigError: The specs do not resolve (bad parameters, failed contracts).
    """
    spec = config.process
    try:
        measure = config.measure.build()
        if spec.kind == "oscillator":
            return build_oscillator(measure, config.schedule.build()), measure
        if spec.kind == "doob_tight":
            return doob_tight_process(spec.a, spec.b, measure), measure
        if spec.kind == "quotient":
            return quotient_martingale(spec.q.build(), measure), measure
        if spec.kind == "constant":
            return constant_process(spec.value), measure
        if spec.kind == "doubling":
            return doubling_process(), measure
        if spec.kind == "bounded_split":
            return bounded_split_process(), measure
        process, mixture = belief_process(measure, spec.q.build(), spec.prior)
        return process, mixture
    except OscillabError as exc:
        raise ConfigError(f"cannot build {spec.kind} process: {exc}") from exc


def resolve_bands(config: LabConfig, process: MartingaleProcess) -> List[BandSpec]:
    """Bands to count upcrossings of, in reporting order."""
    mode = config.bands_mode
    kind = config.process.kind
    if mode == "auto":
        if kind == "oscillator":
            mode = "schedule"
        elif kind == "doob_tight":
            mode = "tight"
        elif config.bands:
            mode = "explicit"
    if mode == "explicit":
        return list(config.bands)
    if mode == "tight":
        return [BandSpec(c=(config.process.a + config.process.b) / 2.0, eps=(config.process.b - config.process.a) / 2.0)]
    if mode == "schedule":
        schedule = config.schedule.build()
        count = int(schedule.params[1]) if schedule.kind is ScheduleKind.FINITE else SCHEDULE_BAND_COUNT
        return [BandSpec(c=1.0, eps=schedule(k)) for k in range(1, count + 1) if schedule(k) > 0.0]
    x0 = process.initial_value
    if x0 <= 0.0:
        return []
    return [BandSpec(c=x0, eps=x0 / 2.0)]


def resolve_alphas(config: LabConfig) -> List[float]:
    if config.alphas:
        return list(config.alphas)
    if config.process.kind in UNIT_INTERVAL_KINDS:
        return [0.2]
    return []


def schedule_bands(config: LabConfig) -> bool:
    """True when band k is (1 − f(k), 1 + f(k)) so the events E_{m,m} are defined."""
    kind = config.process.kind
    return kind == "oscillator" and config.bands_mode in ("auto", "schedule")
