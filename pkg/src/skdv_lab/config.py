"""Flat ``key = value`` experiment configuration.

Every key has a default, so an empty file is a valid config.  Unknown keys,
duplicate keys and unparsable values are rejected with the offending line.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Tuple

from .errors import ConfigError


class Experiment(enum.Enum):
    LINEAR_SCHRODINGER = "linear_schrodinger"
    LINEAR_KDV = "linear_kdv"
    NONLINEAR_SKDV = "nonlinear_skdv"
    PICARD_CROSSCHECK = "picard_crosscheck"
    ESTIMATES = "estimates"
    DIAGNOSE_FIELD = "diagnose_field"


def _int(text):
    return int(text)


def _float(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("not finite")
    return v


def _opt(parse):
    def inner(text):
        return None if text.lower() in ("", "none", "auto") else parse(text)
    return inner


def _floats(text):
    return tuple(_float(t) for t in text.split(",") if t.strip())


def _band(text):
    b = _floats(text)
    if len(b) != 2:
        raise ValueError("expected two numbers 'lo, hi'")
    return b


def _names(text):
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _bool(text):
    t = text.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected true/false")


def _experiment(text):
    return Experiment(text)


def _key(parse, doc):
    return {"parse": parse, "doc": doc}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: Experiment = field(default=Experiment.NONLINEAR_SKDV, metadata=_key(
        _experiment, "|".join(e.value for e in Experiment)))
    n_points: int = field(default=4096, metadata=_key(_int, "grid points (even, >= 8)"))
    length: float = field(default=200.0, metadata=_key(_float, "periodic box length"))
    horizon: float = field(default=0.5, metadata=_key(_float, "final time T"))
    snapshots: int = field(default=101, metadata=_key(_int, "equispaced snapshot count incl. t = 0 and T"))
    dt: Optional[float] = field(default=None, metadata=_key(_opt(_float), "time step (auto: CFL controller)"))
    data_alpha: float = field(default=1.0, metadata=_key(_float, "chirp rate of the Schrodinger datum"))
    x0: float = field(default=0.0, metadata=_key(_float, "focus location of the Schrodinger datum"))
    c: float = field(default=0.1, metadata=_key(_float, "amplitude of the KdV series"))
    kdv_alpha: Optional[float] = field(default=None, metadata=_key(
        _opt(_float), "KdV focusing period (auto: linear_kdv uses data_alpha, coupled runs match 1/(4 data_alpha))"))
    j_max: Optional[int] = field(default=None, metadata=_key(_opt(_int), "KdV series truncation (auto: tail < 1e-14)"))
    data_scale: float = field(default=1.0, metadata=_key(_float, "multiplier applied to both data"))
    coupling_alpha: float = field(default=1.0, metadata=_key(_float, "coupling in the Schrodinger equation"))
    coupling_gamma: float = field(default=1.0, metadata=_key(_float, "coupling in the KdV equation"))
    beta: Tuple[float, ...] = field(default=(0.6,), metadata=_key(_floats, "Holder exponents, comma separated"))
    holder_window: float = field(default=0.2, metadata=_key(_float, "half-width of the Holder window"))
    fit_band: Optional[Tuple[float, float]] = field(default=None, metadata=_key(
        _opt(_band), "Sobolev fit band 'lo, hi' (auto: top octaves below half Nyquist)"))
    seed: int = field(default=0, metadata=_key(_int, "ensemble seed"))
    estimates: Tuple[str, ...] = field(default=("all",), metadata=_key(_names, "catalog entries or 'all'"))
    ensemble_kind: str = field(default="gaussian_mixture", metadata=_key(str, "ensemble family"))
    ensemble_size: int = field(default=50, metadata=_key(_int, "members per ensemble"))
    field_path: Optional[str] = field(default=None, metadata=_key(_opt(str), "snapshot read by diagnose_field"))
    write_snapshots: bool = field(default=True, metadata=_key(_bool, "write binary snapshots"))
    output_dir: str = field(default="skdv_out", metadata=_key(str, "artifact directory"))

    def validate(self):
        """Raise ConfigError (with ``key`` set) for the first out-of-range value."""
        def bad(key, msg):
            raise ConfigError(f"{key}: {msg}", key=key)

        if self.n_points < 8 or self.n_points % 2:
            bad("n_points", f"must be even and >= 8, got {self.n_points}")
        for key in ("length", "horizon", "data_alpha", "c", "holder_window"):
            if not getattr(self, key) > 0:
                bad(key, f"must be > 0, got {getattr(self, key)}")
        if self.snapshots < 2:
            bad("snapshots", f"must be >= 2, got {self.snapshots}")
        if self.dt is not None and not self.dt > 0:
            bad("dt", f"must be > 0, got {self.dt}")
        if self.kdv_alpha is not None and not self.kdv_alpha > 0:
            bad("kdv_alpha", f"must be > 0, got {self.kdv_alpha}")
        if self.j_max is not None and self.j_max < 1:
            bad("j_max", f"must be >= 1, got {self.j_max}")
        if not self.data_scale >= 0:
            bad("data_scale", f"must be >= 0, got {self.data_scale}")
        if not self.beta or not all(0 < b <= 1 for b in self.beta):
            bad("beta", f"each exponent must lie in (0, 1], got {self.beta}")
        if self.fit_band is not None and not 0 < self.fit_band[0] < self.fit_band[1]:
            bad("fit_band", f"need 0 < lo < hi, got {self.fit_band}")
        if self.seed < 0:
            bad("seed", f"must be >= 0, got {self.seed}")
        if self.ensemble_size < 1:
            bad("ensemble_size", f"must be >= 1, got {self.ensemble_size}")
        from .ensembles import EnsembleKind
        if self.ensemble_kind not in {k.value for k in EnsembleKind}:
            bad("ensemble_kind", f"unknown ensemble family {self.ensemble_kind!r}")
        from .estimates import EstimateId
        names = set(EstimateId.__members__)
        for name in self.estimates:
            if name != "all" and name not in names:
                bad("estimates", f"unknown catalog entry {name!r}")
        if self.experiment == Experiment.DIAGNOSE_FIELD and not self.field_path:
            bad("field_path", "diagnose_field needs a snapshot path")
        return self

    def as_dict(self) -> dict:
        d = asdict(self)
        d["experiment"] = self.experiment.value
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    def to_text(self) -> str:
        """Resolved config in the input syntax (parses back to an equal config)."""
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Experiment):
                text = v.value
            elif v is None:
                text = "none"
            elif isinstance(v, tuple):
                text = ", ".join(repr(x) if isinstance(x, float) else str(x) for x in v)
            elif isinstance(v, bool):
                text = "true" if v else "false"
            elif isinstance(v, float):
                text = repr(v)
            else:
                text = str(v)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"


KEYS = {f.name: f for f in fields(ExperimentConfig)}


def parse_config(text: str) -> ExperimentConfig:
    values, where = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", line=lineno, key=key)
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {where[key]})",
                              line=lineno, key=key)
        try:
            values[key] = KEYS[key].metadata["parse"](value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r} ({exc})",
                              line=lineno, key=key) from None
        where[key] = lineno
    cfg = ExperimentConfig(**values)
    try:
        return cfg.validate()
    except ConfigError as exc:
        line = where.get(exc.key)
        if line is None:
            raise
        raise ConfigError(f"line {line}: {exc}", line=line, key=exc.key) from None


def read_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read())
