"""Shannon missing information and quantum operator entropies, in bits.

An operator entropy is the Shannon measure of the Born-rule distribution
over the eigenbasis of an observable. Position entropy uses the site basis,
energy entropy the Hamiltonian eigenbasis, and the von Neumann entropy the
eigenbasis of the density matrix itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, InvalidDensityMatrixError, InvalidDistributionError
from .spectral import PureState, Spectrum, energy_coefficients

CLAMP_TOL = 1e-12
SUM_TOL = 1e-9
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-10
BASIS_TOL = 1e-10


def as_distribution(p) -> np.ndarray:
    """Validate and clean a probability vector.

    Entries in ``[-1e-12, 0)`` are set to zero and the vector is rescaled by
    its sum when that sum is within 1e-9 of one.

    Raises
    ------
    InvalidDistributionError
        On entries below ``-1e-12``, non-finite entries, or a sum further
        than 1e-9 from one.
    """
    p = np.array(p, dtype=float).ravel()
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise InvalidDistributionError("distribution must be a non-empty finite vector")
    if p.min() < -CLAMP_TOL:
        raise InvalidDistributionError(f"negative probability {p.min()!r}")
    p[p < 0] = 0.0
    total = p.sum()
    if abs(total - 1.0) > SUM_TOL:
        raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")
    return p / total


def smi(p) -> float:
    """Shannon measure of information ``-sum p log2 p`` with ``0 log 0 = 0``."""
    p = as_distribution(p)
    nz = p[p > 0]
    h = -float(np.sum(nz * np.log2(nz)))
    return max(h, 0.0) + 0.0


def smi_columns(p: np.ndarray) -> np.ndarray:
    """SMI of every column of a 2D array of probabilities, unvalidated."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return np.maximum(-terms.sum(axis=0), 0.0)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator in the site basis.

    Real symmetric input is kept real.
    """

    rho: np.ndarray
    basis: str = "position"

    def __post_init__(self):
        rho = np.array(self.rho)
        rho = rho.astype(complex if np.iscomplexobj(rho) else float)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidDensityMatrixError(f"density matrix must be square, got {rho.shape}")
        herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
        if herm > HERMITIAN_TOL:
            raise InvalidDensityMatrixError(f"not Hermitian (max deviation {herm:.3e})")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidDensityMatrixError(f"trace is {tr!r}, not 1")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        a = psi.amplitudes
        return cls(np.outer(a, a.conj()))

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of rho, checked against the PSD tolerance."""
        w = np.linalg.eigvalsh(self.rho)
        if w.min() < -PSD_TOL:
            raise InvalidDensityMatrixError(f"not positive semidefinite (eigenvalue {w.min():.3e})")
        return w


def position_probabilities(psi: PureState) -> np.ndarray:
    return as_distribution(np.abs(psi.amplitudes) ** 2)


def energy_probabilities(psi: PureState, s: Spectrum) -> np.ndarray:
    return as_distribution(np.abs(energy_coefficients(psi, s)) ** 2)


def s_x(state) -> float:
    """Position entropy of a :class:`PureState` or :class:`DensityMatrix`."""
    if isinstance(state, DensityMatrix):
        return smi(np.diagonal(state.rho).real)
    return smi(position_probabilities(state))


def s_e(psi: PureState, s: Spectrum) -> float:
    return smi(energy_probabilities(psi, s))


def s_vn(state) -> float:
    """Von Neumann entropy in bits, the SMI of the eigenvalues of rho.

    A :class:`PureState` is treated as the rank-one projector onto it, whose
    spectrum is ``{1, 0, ..., 0}``.
    """
    if isinstance(state, PureState):
        norm2 = float(np.vdot(state.amplitudes, state.amplitudes).real)
        return smi([norm2])
    return smi(np.clip(state.eigenvalues(), 0.0, None))


def operator_entropy(rho: DensityMatrix, basis) -> float:
    """Entropy of the outcome distribution ``<phi_k|rho|phi_k>`` over a basis.

    ``basis`` is an ``(n, n)`` matrix whose columns are the orthonormal kets
    ``|phi_k>``.
    """
    b = np.asarray(basis)
    if b.shape != rho.rho.shape:
        raise InvalidArgumentError(f"basis shape {b.shape} does not match rho {rho.rho.shape}")
    gram_err = np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1])))
    if gram_err > BASIS_TOL:
        raise InvalidArgumentError(f"basis is not orthonormal (max error {gram_err:.3e})")
    p = np.sum(b.conj() * (rho.rho @ b), axis=0).real
    return smi(p)
