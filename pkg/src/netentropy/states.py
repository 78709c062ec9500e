"""Initial states and ensembles: confined states, random superpositions, thermal rho."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _random
from .entropy import DensityMatrix
from .errors import DegenerateInputError, InvalidArgumentError
from .network import SiteSet
from .spectral import PureState, Spectrum, real_matmul, scaled_energies


@dataclass(frozen=True)
class ThermalEnsemble:
    temperature: float
    occupation: np.ndarray
    spectrum_ref: str | None = None


def nearest_to_origin(sites: SiteSet, count: int) -> np.ndarray:
    """Indices of the ``count`` sites closest to ``(0, 0)``, ties by index."""
    d2 = sites.x ** 2 + sites.y ** 2
    return np.argsort(d2, kind="stable")[:count]


def confined_state(sites: SiteSet, n_init: int) -> PureState:
    """Equal real amplitude on the ``n_init`` sites nearest the origin."""
    if not 1 <= n_init <= sites.n:
        raise InvalidArgumentError(f"n_init must be in [1, {sites.n}], got {n_init}")
    amps = np.zeros(sites.n, dtype=complex)
    amps[nearest_to_origin(sites, n_init)] = 1.0 / np.sqrt(n_init)
    return PureState(amps, f"confined(n_init={n_init})")


def _marsaglia_coefficients(count: int, rng: np.random.Generator) -> np.ndarray:
    # all normal deviates first, then all phases, both in index order
    w = rng.standard_normal(count)
    w /= np.linalg.norm(w)
    phases = rng.random(count) * (2.0 * np.pi)
    return np.abs(w) * np.exp(1j * phases)


def rasee(s: Spectrum, n_e: int, seed: int) -> PureState:
    """Random superposition of the ``n_e`` lowest energy eigenstates.

    The magnitudes are a point drawn uniformly on the unit sphere in
    ``n_e`` real dimensions (a normalized vector of standard normal
    deviates), each carrying an independent uniform phase on ``[0, 2 pi)``.
    """
    if not 1 <= n_e <= s.n:
        raise InvalidArgumentError(f"n_e must be in [1, {s.n}], got {n_e}")
    coeffs = _marsaglia_coefficients(n_e, _random.make_rng(seed, _random.RASEE))
    amps = real_matmul(s.eigenvectors[:, :n_e], coeffs)
    return PureState(amps, f"rasee(n_e={n_e}, seed={seed})")


def random_position_superposition(n: int, seed: int) -> PureState:
    """The RaSEE construction carried out directly in the site basis."""
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    coeffs = _marsaglia_coefficients(n, _random.make_rng(seed, _random.POSITION))
    return PureState(coeffs, f"position_superposition(seed={seed})")


def perturbed_initial_state(psi0: PureState, noise: PureState, delta: float) -> PureState:
    """``(psi0 + sqrt(delta) * noise)`` renormalized."""
    if not 0.0 <= delta <= 1.0:
        raise InvalidArgumentError(f"delta must lie in [0, 1], got {delta}")
    if psi0.n != noise.n:
        raise InvalidArgumentError(f"dimension mismatch: {psi0.n} vs {noise.n}")
    if delta == 0:
        return psi0
    v = psi0.amplitudes + np.sqrt(delta) * noise.amplitudes
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise DegenerateInputError("perturbed state has vanishing norm")
    return PureState(v / norm, f"perturbed(delta={delta})")


def boltzmann_distribution(s: Spectrum, temperature: float) -> np.ndarray:
    """Canonical occupation of each eigenstate, with k_B = 1 and T in units of gamma0.

    Weights are computed relative to the ground state so that low
    temperatures do not overflow.
    """
    if not temperature > 0:
        raise InvalidArgumentError(f"temperature must be positive, got {temperature}")
    w = np.exp(-scaled_energies(s) / temperature)
    return w / w.sum()


def thermal_density(s: Spectrum, temperature: float) -> tuple[ThermalEnsemble, DensityMatrix]:
    """Canonical density matrix ``exp(-H/T) / Tr exp(-H/T)`` in the site basis."""
    occ = boltzmann_distribution(s, temperature)
    v = s.eigenvectors
    rho = (v * occ) @ v.T
    rho = 0.5 * (rho + rho.T)
    return ThermalEnsemble(float(temperature), occ, s.source_hash), DensityMatrix(rho)
