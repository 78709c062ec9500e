from .config import EXPERIMENTS, ExperimentConfig
from .runners import (EntropyRecord, TimeSeries, build_configuration, execute, run_blip,
                      run_expand, run_multiconfig, run_ninit_sweep, run_rasee_dynamics,
                      run_rasee_stats, run_thermal, trajectory)

__all__ = [
    "EXPERIMENTS", "EntropyRecord", "ExperimentConfig", "TimeSeries", "build_configuration",
    "execute", "run_blip", "run_expand", "run_multiconfig", "run_ninit_sweep",
    "run_rasee_dynamics", "run_rasee_stats", "run_thermal", "trajectory",
]
