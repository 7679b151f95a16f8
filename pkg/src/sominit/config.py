"""Experiment configuration and its ``key = value`` file format.

Example::

    # horseshoe at the usual node counts
    shape = horseshoe
    n = 500
    noise = 0
    data_seed = 1
    ks = 10, 20, 50
    trials = 100
    out_dir = results/horseshoe
"""

from dataclasses import asdict, dataclass

from .datasets import DEFAULT_N, FAMILIES
from .experiment import DEFAULT_QUASILINEAR_THRESHOLD, DEFAULT_TRIALS, DEFAULT_UNIQUE_TOL
from .som import DEFAULT_H_MAX


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    shape: str | None = None
    data: str | None = None
    n: int = DEFAULT_N
    noise: float = 0.0
    data_seed: int = 1
    equispaced: bool = False
    ks: tuple = (10, 20, 50)
    trials: int = DEFAULT_TRIALS
    seed_base: int = 0
    h_max: int = DEFAULT_H_MAX
    threshold: float = DEFAULT_QUASILINEAR_THRESHOLD
    unique_tol: float = DEFAULT_UNIQUE_TOL
    replace: bool = False
    workers: int = 1
    out_dir: str = "results"

    def validate(self):
        if (self.shape is None) == (self.data is None):
            raise ConfigError("exactly one of 'shape' and 'data' must be given")
        if self.shape is not None and self.shape not in FAMILIES:
            raise ConfigError(f"unknown shape {self.shape!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.noise < 0:
            raise ConfigError("noise must be >= 0")
        if self.data_seed < 0 or self.seed_base < 0:
            raise ConfigError("seeds must be non-negative")
        if not self.ks or any(k < 1 for k in self.ks):
            raise ConfigError("ks must be a non-empty list of positive integers")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.h_max < 0:
            raise ConfigError("h_max must be >= 0")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError("threshold must be in [0, 1]")
        if self.unique_tol < 0:
            raise ConfigError("unique_tol must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def to_dict(self):
        d = asdict(self)
        d["ks"] = list(self.ks)
        return d


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_ks(text):
    return tuple(int(part) for part in text.replace(" ", "").split(",") if part)


_PARSERS = {
    "shape": str,
    "data": str,
    "n": int,
    "noise": float,
    "data_seed": int,
    "equispaced": _parse_bool,
    "ks": _parse_ks,
    "trials": int,
    "seed_base": int,
    "h_max": int,
    "threshold": float,
    "unique_tol": float,
    "replace": _parse_bool,
    "workers": int,
    "out_dir": str,
}


def parse_value(key, text):
    if key not in _PARSERS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return _PARSERS[key](text.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}") from None


def parse_config(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = parse_value(key, value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return values


def load_config(path, overrides=None):
    with open(path, encoding="utf-8") as fh:
        values = parse_config(fh.read())
    values.update(overrides or {})
    return ExperimentConfig(**values).validate()
