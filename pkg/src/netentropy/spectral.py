"""Exact diagonalization and unitary propagation through the energy eigenbasis.

Units: hbar = 1 and times are given in units of the tunnelling time
``tau = pi * hbar / gamma0``, so a time ``t`` corresponds to the physical
time ``t * pi / gamma0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError
from .network import Hamiltonian

ORTHONORMALITY_TOL = 1e-10
RESIDUAL_TOL = 1e-8
NORM_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and real orthonormal eigenvectors (as columns).

    Column ``k`` of ``eigenvectors`` is the eigenket with energy
    ``eigenvalues[k]`` expressed in the site basis.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    gamma0: float = 1.0
    source_hash: str | None = None

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def tau(self) -> float:
        return np.pi / self.gamma0


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidArgumentError(f"state is not normalized (norm^2 = {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def from_vector(cls, vector, label: str = "") -> "PureState":
        """Normalize an arbitrary nonzero vector into a state."""
        v = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidArgumentError("cannot normalize the zero vector")
        return cls(v / norm, label)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its first non-negligible component is positive."""
    nonzero = np.abs(vectors) > 1e-12
    first = np.argmax(nonzero, axis=0)
    lead = vectors[first, np.arange(vectors.shape[1])]
    signs = np.where(lead < 0, -1.0, 1.0)
    return vectors * signs


def diagonalize(h: Hamiltonian) -> Spectrum:
    """Full eigendecomposition of a real symmetric Hamiltonian.

    Raises
    ------
    NumericalFailureError
        If LAPACK does not converge or the result violates the
        orthonormality or residual tolerances.
    """
    m = np.asarray(h.matrix, dtype=float)
    if m.shape[0] != m.shape[1] or not np.array_equal(m, m.T):
        raise InvalidArgumentError("Hamiltonian matrix must be square and exactly symmetric")
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver failed for n={m.shape[0]}: {exc}") from exc
    vectors = _fix_signs(vectors)

    ortho = np.max(np.abs(vectors.T @ vectors - np.eye(len(values))))
    scale = max(np.max(np.abs(values)), 1.0)
    residual = np.max(np.abs(m @ vectors - vectors * values))
    if ortho > ORTHONORMALITY_TOL or residual > RESIDUAL_TOL * scale:
        raise NumericalFailureError(
            f"eigendecomposition out of tolerance: orthonormality error {ortho:.3e}, "
            f"residual {residual:.3e} (scale {scale:.3e})")
    values.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(values, vectors, h.gamma0, h.graph_hash)


def scaled_energies(s: Spectrum) -> np.ndarray:
    """Energies measured from the ground state in units of gamma0."""
    return (s.eigenvalues - s.eigenvalues[0]) / s.gamma0


def energy_coefficients(psi: PureState, s: Spectrum) -> np.ndarray:
    """Projections ``<E_k|psi>`` for every eigenket."""
    return real_matmul(s.eigenvectors.T, psi.amplitudes)


def real_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b`` for real ``a`` and complex ``b``, as two real BLAS products."""
    re = np.ascontiguousarray(b.real)
    im = np.ascontiguousarray(b.imag)
    out = np.empty((a.shape[0],) + b.shape[1:], dtype=complex)
    out.real = a @ re
    out.imag = a @ im
    return out


def _propagate(coeffs: np.ndarray, s: Spectrum, times) -> np.ndarray:
    """Site-basis amplitudes at each time; returns shape (n, len(times))."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    phases = np.exp(-1j * np.outer(s.eigenvalues, times * s.tau))
    c_t = phases * coeffs[:, None]
    return real_matmul(s.eigenvectors, c_t)


def evolve(psi0: PureState, s: Spectrum, t: float) -> PureState:
    """Apply ``exp(-i H t tau / hbar)`` to ``psi0``."""
    if t == 0:
        return psi0
    amps = _propagate(energy_coefficients(psi0, s), s, [t])[:, 0]
    return PureState(amps, psi0.label)


def evolve_backward(psi: PureState, s: Spectrum, t: float) -> PureState:
    return evolve(psi, s, -t)


def evolve_series(psi0: PureState, s: Spectrum, times) -> np.ndarray:
    """Amplitudes of ``psi0`` evolved to every time in ``times``.

    Column j of the returned ``(n, len(times))`` array is the state at
    ``times[j]``. Equivalent to calling :func:`evolve` per time, batched.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    amps = _propagate(energy_coefficients(psi0, s), s, times)
    # t = 0 is the input itself, not a round trip through the eigenbasis
    amps[:, times == 0] = psi0.amplitudes[:, None]
    return amps


def energy_expectation(psi: PureState, s: Spectrum) -> float:
    """Expected scaled energy ``<E_s>`` of a pure state."""
    p = np.abs(energy_coefficients(psi, s)) ** 2
    return float(p @ scaled_energies(s))


def save_spectrum(path, s: Spectrum) -> Path:
    path = Path(path)
    with open(path, "wb") as fh:
        np.savez(fh, eigenvalues=s.eigenvalues, eigenvectors=s.eigenvectors,
                 gamma0=np.float64(s.gamma0), source_hash=np.str_(s.source_hash or ""))
    return path


def load_spectrum(path) -> Spectrum:
    with np.load(Path(path)) as data:
        values = data["eigenvalues"]
        vectors = data["eigenvectors"]
        gamma0 = float(data["gamma0"])
        source = str(data["source_hash"]) or None
    values.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(values, vectors, gamma0, source)


class SpectrumCache:
    """Memoize :func:`diagonalize`, in memory and optionally on disk.

    Entries are keyed by the SHA-256 of the Hamiltonian matrix and stored as
    ``<key>.npz`` under ``directory``.
    """

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else None
        self._memory: dict[str, Spectrum] = {}
        self.hits = 0
        self.misses = 0

    def get(self, h: Hamiltonian) -> Spectrum:
        key = h.content_hash()
        if key in self._memory:
            self.hits += 1
            return self._memory[key]
        path = self.directory / f"{key}.npz" if self.directory is not None else None
        if path is not None and path.exists():
            self.hits += 1
            spectrum = load_spectrum(path)
        else:
            self.misses += 1
            spectrum = diagonalize(h)
            if path is not None:
                self.directory.mkdir(parents=True, exist_ok=True)
                save_spectrum(path, spectrum)
        self._memory[key] = spectrum
        return spectrum
