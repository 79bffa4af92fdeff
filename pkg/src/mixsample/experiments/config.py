"""Sweep configuration and its flat ``key = value`` file format.

Lines are ``key = value``; ``#`` starts a comment; lists are comma
separated. Unknown keys are rejected. A manifest written by
:func:`dump_config` is itself a valid config file.
"""

from dataclasses import dataclass, fields, replace

import numpy as np

from ..sampling import EstimatorKind
from ..spin_chain import SPECTRUM_PRESETS, ChainParams, PulseSpec

__all__ = ["SweepConfig", "parse_config", "load_config", "dump_config", "FULL_SCALE"]


@dataclass(frozen=True)
class SweepConfig:
    n_spins: int = 6
    J: float = 1.0
    h_z: float = 0.002
    e_max: float = 1.0
    tau: float = 170.0
    n_steps: int = 512
    bandwidth_fraction: float = 0.05
    # empty grid means 8 log-spaced purities from 1/N to 1
    purity_grid: tuple = ()
    # entries containing a '.' are fractions of N, others absolute sizes
    k_values: tuple = ("10",)
    n_observables: int = 50
    estimators: tuple = ("eigen+ts+bg", "rp+ts+bg")
    master_seed: int = 0
    output_dir: str = "results"
    traceless: bool = True
    presets: tuple = ("dense", "medium", "sparse")
    residuum_purities: tuple = (0.01, 0.05, 0.1)
    e_max_grid: tuple = (1.0, 0.1, 0.01, 0.001)
    spectrum_only: bool = False
    threads: int = 1
    # extra evaluation times as fractions of the pulse duration, purity sweep only
    record_fractions: tuple = ()

    def __post_init__(self):
        ChainParams(self.n_spins, self.J, self.h_z)
        if self.n_observables < 1:
            raise ValueError("n_observables must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        for ident in self.estimators:
            EstimatorKind.parse(ident)
        n = self.dim
        for p in self.purity_grid:
            if not 1.0 / n - 1e-12 <= p <= 1.0 + 1e-12:
                raise ValueError(f"purity {p} outside [1/{n}, 1]")
        for f in self.record_fractions:
            if not 0.0 < f < 1.0:
                raise ValueError(f"record fraction {f} outside (0, 1)")
        self.k_list()
        self.preset_params()

    @property
    def dim(self) -> int:
        return 2**self.n_spins

    @property
    def chain(self) -> ChainParams:
        return ChainParams(self.n_spins, self.J, self.h_z)

    def pulse_spec(self, seed: int = 0, e_max: float | None = None) -> PulseSpec:
        return PulseSpec(
            e_max=self.e_max if e_max is None else e_max,
            tau=self.tau,
            n_steps=self.n_steps,
            bandwidth_fraction=self.bandwidth_fraction,
            seed=seed,
        )

    def purities(self) -> list:
        if self.purity_grid:
            return [float(p) for p in self.purity_grid]
        return [float(p) for p in np.geomspace(1.0 / self.dim, 1.0, 8)]

    def k_list(self) -> list:
        # only random-phase sampling may use more states than N
        k_max = self.dim
        if all(EstimatorKind.parse(e).family == "rp" for e in self.estimators):
            k_max = None
        out = []
        for raw in self.k_values:
            raw = str(raw).strip()
            k = max(1, round(float(raw) * self.dim)) if "." in raw else int(raw)
            if k < 1 or (k_max is not None and k > k_max):
                raise ValueError(f"k={raw} outside 1..{k_max or 'inf'}")
            out.append(k)
        return out

    def preset_params(self) -> list:
        """``(name, ChainParams)`` for each entry of ``presets``.

        Entries are preset names or ``J:h_z`` pairs.
        """
        out = []
        for entry in self.presets:
            if entry in SPECTRUM_PRESETS:
                j, hz = SPECTRUM_PRESETS[entry]
            else:
                try:
                    j, hz = (float(x) for x in entry.split(":"))
                except ValueError:
                    raise ValueError(f"bad preset {entry!r}") from None
            out.append((entry, ChainParams(self.n_spins, j, hz)))
        return out


FULL_SCALE = {"n_spins": 10, "n_observables": 200, "n_steps": 1024}

_TYPES = {f.name: f.type for f in fields(SweepConfig)}
_FLOAT_LISTS = {"purity_grid", "residuum_purities", "e_max_grid", "record_fractions"}


def _parse_value(key, text):
    kind = _TYPES[key]
    text = text.strip()
    if kind in ("tuple", tuple):
        items = [s.strip() for s in text.split(",") if s.strip()]
        return tuple(float(s) for s in items) if key in _FLOAT_LISTS else tuple(items)
    if kind in ("bool", bool):
        if text.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"{key}: expected a boolean, got {text!r}")
        return text.lower() in ("true", "1", "yes")
    if kind in ("int", int):
        return int(text)
    if kind in ("float", float):
        return float(text)
    return text


def parse_config(text: str, **overrides) -> SweepConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, value)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SweepConfig(**values)


def load_config(path, **overrides) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), **overrides)


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    return str(value)


def dump_config(config: SweepConfig, header: str = "") -> str:
    """Serialize every field (purity grid resolved) so a reload is exact."""
    config = replace(config, purity_grid=tuple(config.purities()))
    lines = [f"# {line}" for line in header.splitlines()]
    for f in fields(SweepConfig):
        lines.append(f"{f.name} = {_format(getattr(config, f.name))}")
    return "\n".join(lines) + "\n"

