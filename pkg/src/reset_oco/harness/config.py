"""Run configuration: INI-style file sections plus command-line overrides.

Recognised keys::

    [algorithm]
    name = reset+hedge          ; reset+hedge | reset+ogd | hedge | ogd

    [environment]
    kind = experts              ; experts | quadratic
    T = 1024                    ; optional when segments are given
    segments = 128,384,256,256  ; segment lengths
    seeds = 0..19               ; or: seed = 3
    n = 10                      ; experts
    gap = 0.25                  ; experts
    dim = 2                     ; quadratic
    drifts = 0,0.05             ; quadratic, one per segment
    radius = 1.0                ; quadratic
    scale =                     ; quadratic, empty for the clamp-free default

    [output]
    out_dir = out
    assert_bounds = false
    figures = true
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields

ALGORITHMS = ("reset+hedge", "reset+ogd", "hedge", "ogd")
ENVIRONMENTS = ("experts", "quadratic")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    algo: str = "reset+hedge"
    env: str = "experts"
    T: int | None = None
    segments: tuple[int, ...] | None = None
    seeds: tuple[int, ...] = (0,)
    n: int = 10
    gap: float = 0.25
    dim: int = 2
    drifts: tuple[float, ...] | None = None
    radius: float = 1.0
    scale: float | None = None
    out_dir: str = "out"
    assert_bounds: bool = False
    figures: bool = True

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algo!r}; choose from {', '.join(ALGORITHMS)}")
        if self.env not in ENVIRONMENTS:
            raise ConfigError(f"unknown environment {self.env!r}; choose from {', '.join(ENVIRONMENTS)}")
        if self.algo.endswith("hedge") and self.env != "experts":
            raise ConfigError("hedge needs the experts environment")
        if self.segments is None and self.T is None:
            raise ConfigError("give T, segments, or both")
        if self.segments is not None:
            if not self.segments or min(self.segments) < 1:
                raise ConfigError("segment lengths must be positive")
            if self.T is not None and sum(self.segments) != self.T:
                raise ConfigError(f"segments sum to {sum(self.segments)}, T is {self.T}")
        elif self.T < 1:
            raise ConfigError("T must be positive")
        if not self.seeds:
            raise ConfigError("no seeds")
        if self.drifts is not None and len(self.drifts) != len(self.lengths):
            raise ConfigError("need one drift per segment")

    @property
    def horizon(self) -> int:
        return self.T if self.T is not None else sum(self.segments)

    @property
    def lengths(self) -> tuple[int, ...]:
        return self.segments if self.segments is not None else (self.horizon,)

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["T"] = self.horizon
        d["segments"] = list(self.lengths)
        d["seeds"] = list(self.seeds)
        if self.drifts is not None:
            d["drifts"] = list(self.drifts)
        return d


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as e:
        raise ConfigError(f"bad integer list {text!r}") from e


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as e:
        raise ConfigError(f"bad number list {text!r}") from e


def parse_seeds(text: str) -> tuple[int, ...]:
    """'3' -> (3,), '0..4' -> (0, 1, 2, 3, 4), '1,5,9' -> (1, 5, 9)."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            if hi < lo:
                raise ConfigError(f"empty seed range {text!r}")
            return tuple(range(lo, hi + 1))
        return parse_int_list(text)
    except ValueError as e:
        raise ConfigError(f"bad seed spec {text!r}") from e


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"bad boolean {text!r}")


# key -> (section, parser)
_KEYS = {
    "algo": ("algorithm", "name", str),
    "env": ("environment", "kind", str),
    "T": ("environment", "T", int),
    "segments": ("environment", "segments", parse_int_list),
    "seeds": ("environment", "seeds", parse_seeds),
    "n": ("environment", "n", int),
    "gap": ("environment", "gap", float),
    "dim": ("environment", "dim", int),
    "drifts": ("environment", "drifts", parse_float_list),
    "radius": ("environment", "radius", float),
    "scale": ("environment", "scale", float),
    "out_dir": ("output", "out_dir", str),
    "assert_bounds": ("output", "assert_bounds", parse_bool),
    "figures": ("output", "figures", parse_bool),
}


def read_config_file(path) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    known = {(sec, key) for sec, key, _ in _KEYS.values()} | {("environment", "seed")}
    for sec in parser.sections():
        for key in parser[sec]:
            if (sec, key) not in known:
                raise ConfigError(f"unknown config key [{sec}] {key}")
    values = {}
    for name, (sec, key, conv) in _KEYS.items():
        if parser.has_option(sec, key):
            raw = parser.get(sec, key).strip()
            if raw == "":
                continue
            try:
                values[name] = conv(raw)
            except ValueError as e:
                raise ConfigError(f"bad value for [{sec}] {key}: {raw!r}") from e
    if parser.has_option("environment", "seed"):
        if "seeds" in values:
            raise ConfigError("give seed or seeds, not both")
        values["seeds"] = parse_seeds(parser.get("environment", "seed"))
    return values


def build_config(path=None, **overrides) -> RunConfig:
    values = read_config_file(path) if path is not None else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(str(e)) from e
