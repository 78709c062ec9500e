"""End-to-end numerical experiments.

Each ``run_*`` function takes an :class:`ExperimentConfig` and returns a
result object that knows how to write its CSV tables. :func:`execute`
runs an experiment, writes its outputs and a manifest, and is what the CLI
calls.

Seed derivation from ``master_seed`` (see :func:`netentropy._random.derive_seed`):

    (0, i)          site positions of configuration i
    (1, i)          connectivity of configuration i
    (2, n_e, j)     j-th RaSEE sample over the n_e lowest eigenstates
    (3, j)          j-th random position superposition
    (4,)            RaSEE admixture of the blip experiment

Configuration 0 is shared by expand, ninit_sweep, rasee_*, blip and thermal,
so those experiments all see the same Hamiltonian for a given master seed.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .. import __version__
from .._random import derive_seed
from ..entropy import smi, smi_columns, s_vn, s_x
from ..errors import NumericalFailureError
from ..network import (ConnectivityGraph, Hamiltonian, SiteSet, assemble_hamiltonian,
                       build_connectivity, generate_sites, save_graph)
from ..spectral import (PureState, Spectrum, SpectrumCache, evolve, evolve_backward,
                        energy_coefficients, evolve_series, real_matmul,
                        scaled_energies)
from ..states import (boltzmann_distribution, confined_state, perturbed_initial_state, rasee,
                      random_position_superposition, thermal_density)
from . import output
from .config import ExperimentConfig

log = logging.getLogger(__name__)

STREAM_SITES = 0
STREAM_CONNECTIVITY = 1
STREAM_RASEE = 2
STREAM_POSITION = 3
STREAM_BLIP_NOISE = 4


@dataclass(frozen=True)
class EntropyRecord:
    t: float
    s_x: float
    s_e: float
    s_vn: float
    mean_x: float
    mean_y: float
    e_s: float


@dataclass
class TimeSeries:
    t: np.ndarray
    s_x: np.ndarray
    s_e: np.ndarray
    s_vn: np.ndarray
    mean_x: np.ndarray
    mean_y: np.ndarray
    e_s: np.ndarray

    def __len__(self):
        return len(self.t)

    def records(self) -> list[EntropyRecord]:
        return [EntropyRecord(*map(float, row)) for row in self.rows()]

    def rows(self):
        return zip(self.t, self.s_x, self.s_e, self.s_vn, self.mean_x, self.mean_y, self.e_s)

    def late_mean(self) -> float:
        """Time average of S_x over the second half of the horizon."""
        half = self.t[-1] / 2
        return float(np.mean(self.s_x[self.t >= half - 1e-9]))

    def write(self, path) -> Path:
        return output.write_csv(path, output.SERIES_HEADER, self.rows())


@dataclass
class Configuration:
    index: int
    sites_seed: int
    connectivity_seed: int
    sites: SiteSet
    graph: ConnectivityGraph
    hamiltonian: Hamiltonian
    spectrum: Spectrum

    @property
    def seeds(self) -> dict:
        return {"sites": self.sites_seed, "connectivity": self.connectivity_seed}


def build_configuration(cfg: ExperimentConfig, index: int = 0,
                        cache: SpectrumCache | None = None) -> Configuration:
    sites_seed = derive_seed(cfg.master_seed, STREAM_SITES, index)
    conn_seed = derive_seed(cfg.master_seed, STREAM_CONNECTIVITY, index)
    sites = generate_sites(cfg.n, sites_seed)
    graph = build_connectivity(sites, cfg.passes, cfg.pool_size, conn_seed)
    h = assemble_hamiltonian(graph, cfg.e0, cfg.gamma0)
    spectrum = (cache or SpectrumCache()).get(h)
    log.info("configuration %d: n=%d edges=%d degree %d..%d mean %.2f", index, cfg.n,
             graph.n_edges, graph.degree_min, graph.degree_max, graph.degree_mean)
    return Configuration(index, sites_seed, conn_seed, sites, graph, h, spectrum)


def trajectory(psi0: PureState, conf: Configuration, times) -> TimeSeries:
    """Entropies and expectation values of ``psi0`` evolved to each time."""
    times = np.asarray(times, dtype=float)
    s = conf.spectrum
    amps = evolve_series(psi0, s, times)
    p = amps.real ** 2 + amps.imag ** 2
    v = s.eigenvectors
    coeffs = real_matmul(v.T, amps)
    pe = coeffs.real ** 2 + coeffs.imag ** 2
    drift = max(np.max(np.abs(p.sum(axis=0) - 1)), np.max(np.abs(pe.sum(axis=0) - 1)))
    if drift > 1e-9:
        raise NumericalFailureError(f"norm drift {drift:.3e} during propagation")
    svn = np.array([s_vn(PureState(amps[:, j])) for j in range(len(times))])
    return TimeSeries(
        t=times,
        s_x=smi_columns(p),
        s_e=smi_columns(pe),
        s_vn=svn,
        mean_x=conf.sites.x @ p,
        mean_y=conf.sites.y @ p,
        e_s=scaled_energies(s) @ pe,
    )


def _fmt_key(value) -> str:
    return output.fmt(value).replace("-", "m")


# ---------------------------------------------------------------- expand


@dataclass
class ExpandResult:
    config: ExperimentConfig
    configuration: Configuration
    series: TimeSeries
    snapshot_times: np.ndarray
    snapshots: np.ndarray
    energy_probabilities: np.ndarray
    boltzmann: np.ndarray

    @property
    def seeds(self) -> dict:
        return self.configuration.seeds

    def summary(self) -> dict:
        g = self.configuration.graph
        es = scaled_energies(self.configuration.spectrum)
        return {
            "s_x_initial": float(self.series.s_x[0]),
            "s_x_late_mean": self.series.late_mean(),
            "s_e": float(self.series.s_e[0]),
            "s_e_range": float(np.ptp(self.series.s_e)),
            "s_vn_max": float(self.series.s_vn.max()),
            "e_s": float(self.series.e_s[0]),
            "e_s_top": float(es[-1]),
            "degree_min": g.degree_min,
            "degree_max": g.degree_max,
            "degree_mean": g.degree_mean,
        }

    def write(self, out_dir: Path) -> list[Path]:
        conf = self.configuration
        files = [self.series.write(out_dir / "series.csv"),
                 save_graph(out_dir / "graph.json", conf.sites, conf.graph)]
        for j, t in enumerate(self.snapshot_times):
            rows = ((k, conf.sites.x[k], conf.sites.y[k], self.snapshots[k, j])
                    for k in range(conf.sites.n))
            files.append(output.write_csv(out_dir / f"snapshot_t{_fmt_key(t)}.csv",
                                          output.SNAPSHOT_HEADER, rows))
        es = scaled_energies(conf.spectrum)
        rows = zip(range(len(es)), es, self.energy_probabilities, self.boltzmann)
        files.append(output.write_csv(out_dir / "energy_distribution.csv",
                                      ("k", "e_s", "probability", "boltzmann"), rows))
        return files


def _expand_on(cfg: ExperimentConfig, conf: Configuration) -> ExpandResult:
    psi0 = confined_state(conf.sites, cfg.n_init)
    series = trajectory(psi0, conf, cfg.time_grid())
    snap_times = np.array(cfg.snapshot_times, dtype=float)
    amps = evolve_series(psi0, conf.spectrum, snap_times)
    snapshots = amps.real ** 2 + amps.imag ** 2
    coeffs = energy_coefficients(psi0, conf.spectrum)
    return ExpandResult(cfg, conf, series, snap_times, snapshots,
                        np.abs(coeffs) ** 2,
                        boltzmann_distribution(conf.spectrum, cfg.boltzmann_temperature))


def run_expand(cfg: ExperimentConfig, cache: SpectrumCache | None = None) -> ExpandResult:
    cfg = cfg.resolved()
    return _expand_on(cfg, build_configuration(cfg, 0, cache))


# ------------------------------------------------------------ multiconfig


@dataclass
class MulticonfigResult:
    config: ExperimentConfig
    runs: list[ExpandResult]

    @property
    def seeds(self) -> dict:
        return {f"config_{r.configuration.index}": r.seeds for r in self.runs}

    @property
    def s_e(self) -> np.ndarray:
        return np.array([r.series.s_e[0] for r in self.runs])

    @property
    def e_s(self) -> np.ndarray:
        return np.array([r.series.e_s[0] for r in self.runs])

    @property
    def late_means(self) -> np.ndarray:
        return np.array([r.series.late_mean() for r in self.runs])

    def summary(self) -> dict:
        return {"s_e": self.s_e.tolist(), "e_s": self.e_s.tolist(),
                "s_x_late_mean": self.late_means.tolist(),
                "late_mean_spread": float(np.ptp(self.late_means))}

    def write(self, out_dir: Path) -> list[Path]:
        files = []
        rows = []
        for r in self.runs:
            conf = r.configuration
            files.append(r.series.write(out_dir / f"series_config{conf.index:02d}.csv"))
            files.append(save_graph(out_dir / f"graph_config{conf.index:02d}.json",
                                    conf.sites, conf.graph))
            rows.append((conf.index, conf.sites_seed, conf.connectivity_seed,
                         r.series.s_e[0], r.series.e_s[0], r.series.late_mean(),
                         conf.graph.degree_mean))
        files.append(output.write_csv(
            out_dir / "summary.csv",
            ("config", "sites_seed", "connectivity_seed", "s_e", "e_s", "s_x_late_mean",
             "degree_mean"), rows))
        return files


def run_multiconfig(cfg: ExperimentConfig,
                    cache: SpectrumCache | None = None) -> MulticonfigResult:
    cfg = cfg.resolved()
    runs = []
    for i in range(cfg.n_configs):
        runs.append(_expand_on(cfg, build_configuration(cfg, i, cache)))
    return MulticonfigResult(cfg, runs)


# ------------------------------------------------------------ ninit sweep


@dataclass
class NinitSweepResult:
    config: ExperimentConfig
    configuration: Configuration
    series: dict[int, TimeSeries]

    @property
    def seeds(self) -> dict:
        return self.configuration.seeds

    def summary(self) -> dict:
        return {str(k): {"s_x_initial": float(ts.s_x[0]), "s_e": float(ts.s_e[0]),
                         "e_s": float(ts.e_s[0]), "s_x_late_mean": ts.late_mean()}
                for k, ts in self.series.items()}

    def write(self, out_dir: Path) -> list[Path]:
        conf = self.configuration
        files = [save_graph(out_dir / "graph.json", conf.sites, conf.graph)]
        rows = []
        for k, ts in self.series.items():
            files.append(ts.write(out_dir / f"series_ninit{k}.csv"))
            rows.append((k, ts.s_x[0], ts.s_e[0], ts.e_s[0], ts.late_mean()))
        files.append(output.write_csv(out_dir / "summary.csv",
                                      ("n_init", "s_x_initial", "s_e", "e_s", "s_x_late_mean"),
                                      rows))
        return files


def run_ninit_sweep(cfg: ExperimentConfig,
                    cache: SpectrumCache | None = None) -> NinitSweepResult:
    cfg = cfg.resolved()
    conf = build_configuration(cfg, 0, cache)
    times = cfg.time_grid()
    series = {k: trajectory(confined_state(conf.sites, k), conf, times)
              for k in cfg.n_init_grid}
    return NinitSweepResult(cfg, conf, series)


# ------------------------------------------------------------ rasee stats


SAMPLE_HEADER = ("basis", "n_e", "sample", "seed", "s_x", "mean_x", "mean_y", "e_s")
SAMPLE_SUMMARY_HEADER = ("basis", "n_e", "count", "mean_s_x", "stderr_s_x", "mean_x",
                         "mean_y", "mean_e_s", "stderr_e_s")


@dataclass
class SampleGroup:
    basis: str
    n_e: int
    seeds: np.ndarray
    s_x: np.ndarray
    mean_x: np.ndarray
    mean_y: np.ndarray
    e_s: np.ndarray

    @staticmethod
    def _stderr(a):
        return float(np.std(a, ddof=1) / np.sqrt(len(a))) if len(a) > 1 else 0.0

    def summary_row(self):
        return (self.basis, self.n_e, len(self.s_x), self.s_x.mean(), self._stderr(self.s_x),
                self.mean_x.mean(), self.mean_y.mean(), self.e_s.mean(), self._stderr(self.e_s))


def _sample_group(basis: str, n_e: int, states_and_seeds, conf: Configuration) -> SampleGroup:
    es = scaled_energies(conf.spectrum)
    v = conf.spectrum.eigenvectors
    seeds, sx, mx, my, e = [], [], [], [], []
    for seed, psi in states_and_seeds:
        p = np.abs(psi.amplitudes) ** 2
        c = real_matmul(v.T, psi.amplitudes)
        seeds.append(seed)
        sx.append(smi(p))
        mx.append(conf.sites.x @ p)
        my.append(conf.sites.y @ p)
        e.append(es @ (np.abs(c) ** 2))
    return SampleGroup(basis, n_e, np.array(seeds, dtype=np.uint64), *map(np.array, (sx, mx, my, e)))


def rasee_seed(cfg: ExperimentConfig, n_e: int, j: int) -> int:
    return derive_seed(cfg.master_seed, STREAM_RASEE, n_e, j)


@dataclass
class RaseeStatsResult:
    config: ExperimentConfig
    configuration: Configuration
    groups: list[SampleGroup]

    @property
    def seeds(self) -> dict:
        return self.configuration.seeds

    def group(self, basis: str, n_e: int) -> SampleGroup:
        for g in self.groups:
            if g.basis == basis and g.n_e == n_e:
                return g
        raise KeyError((basis, n_e))

    def summary(self) -> dict:
        return {f"{g.basis}_{g.n_e}": dict(zip(SAMPLE_SUMMARY_HEADER[2:], g.summary_row()[2:]))
                for g in self.groups}

    def write(self, out_dir: Path) -> list[Path]:
        rows = []
        for g in self.groups:
            for j in range(len(g.s_x)):
                rows.append((g.basis, g.n_e, j, int(g.seeds[j]), g.s_x[j], g.mean_x[j],
                             g.mean_y[j], g.e_s[j]))
        conf = self.configuration
        return [
            save_graph(out_dir / "graph.json", conf.sites, conf.graph),
            output.write_csv(out_dir / "samples.csv", SAMPLE_HEADER, rows),
            output.write_csv(out_dir / "summary.csv", SAMPLE_SUMMARY_HEADER,
                             [g.summary_row() for g in self.groups]),
        ]


def run_rasee_stats(cfg: ExperimentConfig,
                    cache: SpectrumCache | None = None) -> RaseeStatsResult:
    """RaSEE samples for each ``n_e`` in the grid, plus random position superpositions."""
    cfg = cfg.resolved()
    conf = build_configuration(cfg, 0, cache)
    groups = []
    for n_e in cfg.n_e_grid:
        samples = ((seed, rasee(conf.spectrum, n_e, seed))
                   for seed in (rasee_seed(cfg, n_e, j) for j in range(cfg.n_samples)))
        groups.append(_sample_group("energy", n_e, samples, conf))
    pos_seeds = (derive_seed(cfg.master_seed, STREAM_POSITION, j) for j in range(cfg.n_samples))
    samples = ((seed, random_position_superposition(cfg.n, seed)) for seed in pos_seeds)
    groups.append(_sample_group("position", cfg.n, samples, conf))
    return RaseeStatsResult(cfg, conf, groups)


# --------------------------------------------------------- rasee dynamics


@dataclass
class RaseeDynamicsResult:
    config: ExperimentConfig
    configuration: Configuration
    sample_seeds: list[int]
    series: list[TimeSeries]

    @property
    def seeds(self) -> dict:
        return {**self.configuration.seeds, "samples": self.sample_seeds}

    def summary(self) -> dict:
        return {"s_x_min": float(min(ts.s_x.min() for ts in self.series)),
                "s_x_max": float(max(ts.s_x.max() for ts in self.series)),
                "mean_x_range": [float(min(ts.mean_x.min() for ts in self.series)),
                                 float(max(ts.mean_x.max() for ts in self.series))],
                "mean_y_range": [float(min(ts.mean_y.min() for ts in self.series)),
                                 float(max(ts.mean_y.max() for ts in self.series))]}

    def write(self, out_dir: Path) -> list[Path]:
        conf = self.configuration
        files = [save_graph(out_dir / "graph.json", conf.sites, conf.graph)]
        for j, ts in enumerate(self.series):
            files.append(ts.write(out_dir / f"series_sample{j:02d}.csv"))
        return files


def run_rasee_dynamics(cfg: ExperimentConfig,
                       cache: SpectrumCache | None = None) -> RaseeDynamicsResult:
    cfg = cfg.resolved()
    conf = build_configuration(cfg, 0, cache)
    times = cfg.time_grid()
    seeds = [rasee_seed(cfg, cfg.n_e, j) for j in range(cfg.n_trajectories)]
    series = [trajectory(rasee(conf.spectrum, cfg.n_e, seed), conf, times) for seed in seeds]
    return RaseeDynamicsResult(cfg, conf, seeds, series)


# ------------------------------------------------------------------ blip


@dataclass
class BlipResult:
    config: ExperimentConfig
    configuration: Configuration
    noise_seed: int
    deltas: np.ndarray
    series: list[TimeSeries]
    s_x_at_reversal: np.ndarray
    dip_minimum: np.ndarray

    @property
    def seeds(self) -> dict:
        return {**self.configuration.seeds, "blip_noise": self.noise_seed}

    def summary(self) -> dict:
        return {"deltas": self.deltas.tolist(),
                "s_x_at_reversal": self.s_x_at_reversal.tolist(),
                "dip_minimum": self.dip_minimum.tolist()}

    def write(self, out_dir: Path) -> list[Path]:
        conf = self.configuration
        files = [save_graph(out_dir / "graph.json", conf.sites, conf.graph)]
        for d, ts in zip(self.deltas, self.series):
            files.append(ts.write(out_dir / f"series_delta{_fmt_key(d)}.csv"))
        files.append(output.write_csv(out_dir / "delta_sweep.csv", output.DELTA_HEADER,
                                      zip(self.deltas, self.s_x_at_reversal)))
        return files


def run_blip(cfg: ExperimentConfig, cache: SpectrumCache | None = None) -> BlipResult:
    """Forward evolution of a time-reversed confined state, with optional RaSEE admixture.

    The state ``exp(+i H T) |confined>`` (``T = reversal_time``) refocuses
    onto the confined sites at ``t = T``. For each delta the same RaSEE
    state is mixed in with weight ``sqrt(delta)`` before evolving over
    ``[0, 2T]``. The dip minimum is the smallest S_x within one tau of
    ``T``.
    """
    cfg = cfg.resolved()
    conf = build_configuration(cfg, 0, cache)
    s = conf.spectrum
    localized = confined_state(conf.sites, cfg.n_init)
    psi0 = evolve_backward(localized, s, cfg.reversal_time)
    noise_seed = derive_seed(cfg.master_seed, STREAM_BLIP_NOISE)
    noise = rasee(s, cfg.n_e, noise_seed)
    times = cfg.time_grid(2 * cfg.reversal_time)
    window = np.abs(times - cfg.reversal_time) <= 1.0 + 1e-9

    deltas = np.array(cfg.delta_grid, dtype=float)
    series, at_reversal, dip = [], [], []
    for d in deltas:
        start = perturbed_initial_state(psi0, noise, float(d))
        ts = trajectory(start, conf, times)
        series.append(ts)
        at_reversal.append(s_x(evolve(start, s, cfg.reversal_time)))
        dip.append(ts.s_x[window].min())
    return BlipResult(cfg, conf, noise_seed, deltas, series, np.array(at_reversal),
                      np.array(dip))


# --------------------------------------------------------------- thermal


@dataclass
class ThermalResult:
    config: ExperimentConfig
    configuration: Configuration
    temperatures: np.ndarray
    s_x: np.ndarray
    s_vn: np.ndarray
    e_s: np.ndarray
    s_vn_occupation: np.ndarray

    @property
    def seeds(self) -> dict:
        return self.configuration.seeds

    def summary(self) -> dict:
        return {"lowest": {"temperature": float(self.temperatures[0]),
                           "s_x": float(self.s_x[0]), "s_vn": float(self.s_vn[0])},
                "highest": {"temperature": float(self.temperatures[-1]),
                            "s_x": float(self.s_x[-1]), "s_vn": float(self.s_vn[-1])},
                "max_vn_occupation_gap": float(np.max(np.abs(self.s_vn - self.s_vn_occupation)))}

    def write(self, out_dir: Path) -> list[Path]:
        conf = self.configuration
        return [save_graph(out_dir / "graph.json", conf.sites, conf.graph),
                output.write_csv(out_dir / "thermal.csv", output.THERMAL_HEADER,
                                 zip(self.temperatures, self.s_x, self.s_vn, self.e_s))]


def run_thermal(cfg: ExperimentConfig, cache: SpectrumCache | None = None) -> ThermalResult:
    cfg = cfg.resolved()
    conf = build_configuration(cfg, 0, cache)
    es = scaled_energies(conf.spectrum)
    temps = np.array(cfg.temperature_grid, dtype=float)
    sx, svn, e, svn_occ = [], [], [], []
    for temp in temps:
        ensemble, rho = thermal_density(conf.spectrum, temp)
        sx.append(s_x(rho))
        svn.append(s_vn(rho))
        e.append(es @ ensemble.occupation)
        svn_occ.append(smi(ensemble.occupation))
    return ThermalResult(cfg, conf, temps, *map(np.array, (sx, svn, e, svn_occ)))


# --------------------------------------------------------------- driver


RUNNERS = {
    "expand": run_expand,
    "multiconfig": run_multiconfig,
    "ninit_sweep": run_ninit_sweep,
    "rasee_stats": run_rasee_stats,
    "rasee_dynamics": run_rasee_dynamics,
    "blip": run_blip,
    "thermal": run_thermal,
}


def execute(cfg: ExperimentConfig, out_dir=None, cache_dir=None):
    """Run ``cfg.experiment``, write its tables and ``manifest.json``.

    Returns ``(result, manifest_path)``.
    """
    cfg = cfg.resolved()
    out_dir = Path(out_dir if out_dir is not None else cfg.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    result = RUNNERS[cfg.experiment](cfg, SpectrumCache(cache_dir))
    files = result.write(out_dir)
    elapsed = time.perf_counter() - t0
    manifest = output.write_manifest(
        out_dir, cfg.replace(output_dir=str(out_dir)).to_dict(), result.seeds, files,
        result.summary(), started, elapsed, __version__)
    log.info("%s finished in %.1f s, %d files in %s", cfg.experiment, elapsed, len(files), out_dir)
    return result, manifest


def config_from_manifest(path) -> ExperimentConfig:
    doc = json.loads(Path(path).read_text())
    return ExperimentConfig.from_dict(doc["config"])
