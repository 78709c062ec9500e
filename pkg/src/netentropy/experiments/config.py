"""Run configuration shared by every experiment and the CLI."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidConfigError

EXPERIMENTS = ("expand", "multiconfig", "ninit_sweep", "rasee_stats",
               "rasee_dynamics", "blip", "thermal")

DEFAULT_MASTER_SEED = 20201021
DEFAULT_N_INIT_GRID = (4, 8, 16, 32, 64, 128)
DEFAULT_SNAPSHOT_TIMES = (0.0, 0.5, 2.0, 10.0)


def default_delta_grid() -> list[float]:
    return [round(0.01 * k, 10) for k in range(51)]


def default_temperature_grid() -> list[float]:
    return [float(t) for t in np.logspace(-2, 3, 51)]


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters for one experiment run.

    Fields left as ``None`` take size-dependent defaults in :meth:`resolved`:
    ``n_e`` becomes ``n``, ``n_e_grid`` becomes ``(n/4, n/2, n)``, and the
    delta and temperature grids become ``0, 0.01, ..., 0.5`` and 51
    log-spaced points on ``[1e-2, 1e3]``.
    """

    experiment: str = "expand"
    n: int = 1024
    n_init: int = 64
    passes: int = 9
    pool_size: int = 50
    t_max: float = 20.0
    t_step: float = 0.05
    n_configs: int = 10
    n_samples: int = 300
    n_e: int | None = None
    reversal_time: float = 10.0
    delta_grid: tuple[float, ...] | None = None
    temperature_grid: tuple[float, ...] | None = None
    master_seed: int = DEFAULT_MASTER_SEED
    output_dir: str = "results"
    n_init_grid: tuple[int, ...] | None = None
    n_e_grid: tuple[int, ...] | None = None
    n_trajectories: int = 10
    snapshot_times: tuple[float, ...] = DEFAULT_SNAPSHOT_TIMES
    boltzmann_temperature: float = 1.0
    e0: float = 0.0
    gamma0: float = 1.0

    def __post_init__(self):
        for name in ("delta_grid", "temperature_grid", "n_init_grid", "n_e_grid",
                     "snapshot_times"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(value))
        self._validate()

    def _validate(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidConfigError(f"unknown experiment {self.experiment!r}; "
                                     f"choose from {', '.join(EXPERIMENTS)}")
        if self.n < 2:
            raise InvalidConfigError("n must be at least 2")
        for name in ("n_init", "passes", "pool_size", "n_configs", "n_samples",
                     "n_trajectories"):
            if int(getattr(self, name)) < 1:
                raise InvalidConfigError(f"{name} must be positive")
        if self.pool_size >= self.n:
            raise InvalidConfigError("pool_size must be smaller than n")
        if self.n_init > self.n:
            raise InvalidConfigError("n_init cannot exceed n")
        if not self.t_step > 0:
            raise InvalidConfigError("t_step must be positive")
        if self.t_max < 0:
            raise InvalidConfigError("t_max must be non-negative")
        if self.reversal_time < 0:
            raise InvalidConfigError("reversal_time must be non-negative")
        if self.n_e is not None and not 1 <= self.n_e <= self.n:
            raise InvalidConfigError("n_e must lie in [1, n]")
        if self.n_e_grid is not None and any(not 1 <= k <= self.n for k in self.n_e_grid):
            raise InvalidConfigError("n_e_grid values must lie in [1, n]")
        if self.n_init_grid is not None and any(not 1 <= k <= self.n for k in self.n_init_grid):
            raise InvalidConfigError("n_init_grid values must lie in [1, n]")
        if self.delta_grid is not None and any(not 0 <= d <= 1 for d in self.delta_grid):
            raise InvalidConfigError("delta values must lie in [0, 1]")
        if self.temperature_grid is not None and any(not t > 0 for t in self.temperature_grid):
            raise InvalidConfigError("temperatures must be positive")
        if not self.boltzmann_temperature > 0:
            raise InvalidConfigError("boltzmann_temperature must be positive")
        if not self.gamma0 > 0:
            raise InvalidConfigError("gamma0 must be positive")
        if not 0 <= self.master_seed < 2 ** 64:
            raise InvalidConfigError("master_seed must be an unsigned 64-bit integer")

    def resolved(self) -> "ExperimentConfig":
        """Copy with every size-dependent default filled in."""
        n = self.n
        return dataclasses.replace(
            self,
            n_e=self.n_e if self.n_e is not None else n,
            n_init_grid=self.n_init_grid if self.n_init_grid is not None
            else tuple(k for k in DEFAULT_N_INIT_GRID if k <= n),
            n_e_grid=self.n_e_grid if self.n_e_grid is not None
            else tuple(sorted({max(1, n // 4), max(1, n // 2), n})),
            delta_grid=self.delta_grid if self.delta_grid is not None else default_delta_grid(),
            temperature_grid=self.temperature_grid if self.temperature_grid is not None
            else default_temperature_grid(),
        )

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            out[f.name] = list(value) if isinstance(value, tuple) else value
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise InvalidConfigError(f"unknown config key(s): {', '.join(unknown)}")
        try:
            return cls(**doc)
        except TypeError as exc:
            raise InvalidConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except OSError as exc:
            raise InvalidConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InvalidConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(doc, dict):
            raise InvalidConfigError(f"{path}: top level must be an object")
        return cls.from_dict(doc)

    def time_grid(self, horizon: float | None = None) -> np.ndarray:
        """Times ``0, t_step, ...`` up to ``horizon`` (default ``t_max``), in units of tau."""
        horizon = self.t_max if horizon is None else horizon
        steps = int(round(horizon / self.t_step))
        return self.t_step * np.arange(steps + 1)
