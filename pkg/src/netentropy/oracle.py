"""Brute-force reference implementations for cross-checking on small systems.

Nothing here calls the eigensolver or the entropy module. Propagation is a
scaling-and-squaring Taylor series of the matrix exponential and entropies
are literal double loops, so agreement with the main engine is evidence
that both are right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_ORACLE_N = 64


@dataclass(frozen=True)
class OracleReport:
    case_id: str
    max_abs_difference: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs_difference <= self.tolerance


def compare(case_id: str, actual, expected, tolerance: float) -> OracleReport:
    diff = float(np.max(np.abs(np.asarray(actual) - np.asarray(expected))))
    return OracleReport(case_id, diff, tolerance)


def _expm(a: np.ndarray) -> np.ndarray:
    norm = np.max(np.sum(np.abs(a), axis=1))
    squarings = max(0, int(math.ceil(math.log2(norm / 0.25)))) if norm > 0.25 else 0
    a = a / (2 ** squarings)
    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-18:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def expm_propagate(h, psi0, t_phys: float) -> np.ndarray:
    """Amplitudes of ``exp(-i H t_phys) psi0`` (hbar = 1), by direct exponentiation.

    ``h`` and ``psi0`` may be a Hamiltonian / PureState or plain arrays.
    """
    m = np.asarray(getattr(h, "matrix", h), dtype=complex)
    v = np.asarray(getattr(psi0, "amplitudes", psi0), dtype=complex)
    if m.shape[0] > MAX_ORACLE_N:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_N}")
    if t_phys == 0:
        return v.copy()
    return _expm(-1j * t_phys * m) @ v


def two_level_analytic(t_phys: float) -> tuple[float, float, float]:
    """Site populations and position entropy for H = [[0, -1], [-1, 0]], psi0 = (1, 0)."""
    p0 = math.cos(t_phys) ** 2
    p1 = math.sin(t_phys) ** 2
    s = 0.0
    for p in (p0, p1):
        if p > 0:
            s -= p * math.log2(p)
    return p0, p1, s


def brute_force_entropy(psi, basis) -> float:
    """``-sum_k |<phi_k|psi>|^2 log2 |<phi_k|psi>|^2`` evaluated term by term."""
    amps = [complex(a) for a in np.asarray(getattr(psi, "amplitudes", psi)).ravel()]
    b = np.asarray(basis)
    n = len(amps)
    if n > MAX_ORACLE_N:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_N}")
    total = 0.0
    for k in range(n):
        overlap = 0j
        for j in range(n):
            overlap += complex(b[j, k]).conjugate() * amps[j]
        p = overlap.real ** 2 + overlap.imag ** 2
        if p > 0:
            total -= p * math.log2(p)
    return total
