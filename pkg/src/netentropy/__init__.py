"""Operator entropies of quantum states on topologically disordered site networks."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("netentropy")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .entropy import (DensityMatrix, as_distribution, energy_probabilities, operator_entropy,
                      position_probabilities, s_e, s_vn, s_x, smi)
from .network import (ConnectivityGraph, Hamiltonian, SiteSet, assemble_hamiltonian,
                      build_connectivity, generate_sites, k_nearest_pools, load_graph,
                      save_graph)
from .spectral import (PureState, Spectrum, SpectrumCache, diagonalize, energy_expectation,
                       evolve, evolve_backward, evolve_series, scaled_energies)
from .states import (ThermalEnsemble, boltzmann_distribution, confined_state,
                     perturbed_initial_state, random_position_superposition, rasee,
                     thermal_density)

__all__ = [
    "ConnectivityGraph", "DensityMatrix", "Hamiltonian", "PureState", "SiteSet", "Spectrum",
    "SpectrumCache", "ThermalEnsemble", "as_distribution", "assemble_hamiltonian",
    "boltzmann_distribution", "build_connectivity", "confined_state", "diagonalize",
    "energy_expectation", "energy_probabilities", "evolve", "evolve_backward", "evolve_series",
    "generate_sites", "k_nearest_pools", "load_graph", "operator_entropy",
    "perturbed_initial_state", "position_probabilities", "random_position_superposition",
    "rasee", "s_e", "s_vn", "s_x", "save_graph", "scaled_energies", "smi", "thermal_density",
]
