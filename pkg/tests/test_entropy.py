import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import haar_unitary, random_density, random_state, random_symmetric
from netentropy.entropy import (DensityMatrix, as_distribution, operator_entropy, s_e, s_vn,
                                s_x, smi, smi_columns)
from netentropy.errors import (InvalidArgumentError, InvalidDensityMatrixError,
                               InvalidDistributionError)
from netentropy.network import Hamiltonian
from netentropy.oracle import brute_force_entropy
from netentropy.spectral import PureState, diagonalize


@pytest.mark.parametrize("p, expected", [
    ([1.0], 0.0),
    ([0.5, 0.5], 1.0),
    ([0.25] * 4, 2.0),
    ([1.0, 0.0, 0.0], 0.0),
    ([0.5, 0.25, 0.25], 1.5),
    ([1 / 1024] * 1024, 10.0),
])
def test_smi_examples(p, expected):
    assert smi(p) == pytest.approx(expected, abs=1e-12)


def test_smi_clamps_negative_dust():
    assert smi([0.5, 0.5, -1e-13]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p", [[0.5, 0.6], [1.1, -0.1], [np.nan, 1.0], [], [0.5, 0.5, -1e-6]])
def test_smi_rejects_invalid(p):
    with pytest.raises(InvalidDistributionError):
        smi(p)


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.integers(1, 40), elements=st.floats(0.0, 1.0)))
def test_smi_range(w):
    if w.sum() < 1e-6:
        return
    p = w / w.sum()
    h = smi(p)
    assert -1e-12 <= h <= np.log2(p.size) + 1e-9
    assert smi_columns(p[:, None])[0] == pytest.approx(h, abs=1e-9)


def test_as_distribution_rescales():
    p = as_distribution([0.5, 0.5 + 5e-10])
    assert p.sum() == pytest.approx(1.0, abs=1e-15)


def test_s_x_localized_and_uniform():
    e = np.zeros(8)
    e[3] = 1.0
    assert s_x(PureState(e)) == 0.0
    assert s_x(PureState(np.full(8, 1 / np.sqrt(8)))) == pytest.approx(3.0, abs=1e-12)


def test_s_e_of_eigenstate_is_zero():
    rng = np.random.default_rng(5)
    s = diagonalize(Hamiltonian(random_symmetric(16, rng)))
    assert s_e(PureState(s.eigenvectors[:, 4]), s) == pytest.approx(0.0, abs=1e-9)


def test_s_vn_pure_is_zero():
    rng = np.random.default_rng(0)
    psi = PureState(random_state(16, rng))
    assert s_vn(psi) == 0.0
    assert s_vn(DensityMatrix.from_pure(psi)) == pytest.approx(0.0, abs=1e-9)


def test_s_vn_maximally_mixed():
    rho = DensityMatrix(np.eye(16) / 16)
    assert s_vn(rho) == pytest.approx(4.0, abs=1e-12)
    assert s_x(rho) == pytest.approx(4.0, abs=1e-12)


def test_density_matrix_validation():
    with pytest.raises(InvalidDensityMatrixError):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(InvalidDensityMatrixError):
        DensityMatrix(np.eye(2))
    with pytest.raises(InvalidDensityMatrixError):
        DensityMatrix(np.ones(3) / 3)
    not_psd = DensityMatrix(np.array([[1.5, 0.0], [0.0, -0.5]]))
    with pytest.raises(InvalidDensityMatrixError):
        s_vn(not_psd)


def test_density_matrix_keeps_real():
    assert DensityMatrix(np.eye(3) / 3).rho.dtype == float


def test_operator_entropy_site_basis_equals_s_x():
    rng = np.random.default_rng(1)
    rho = DensityMatrix(random_density(12, rng, rank=3))
    assert operator_entropy(rho, np.eye(12)) == pytest.approx(s_x(rho), abs=1e-12)


def test_operator_entropy_rejects_bad_basis():
    rho = DensityMatrix(np.eye(3) / 3)
    with pytest.raises(InvalidArgumentError):
        operator_entropy(rho, 2 * np.eye(3))
    with pytest.raises(InvalidArgumentError):
        operator_entropy(rho, np.eye(4))


@pytest.mark.parametrize("seed", range(10))
def test_von_neumann_is_minimum_over_bases(seed):
    rng = np.random.default_rng(seed)
    n = 10
    rho = DensityMatrix(random_density(n, rng, rank=rng.integers(1, n + 1)))
    svn = s_vn(rho)
    _, eigvecs = np.linalg.eigh(rho.rho)
    assert operator_entropy(rho, eigvecs) == pytest.approx(svn, abs=1e-9)
    for _ in range(5):
        assert operator_entropy(rho, haar_unitary(n, rng)) >= svn - 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_s_vn_unitary_invariance(seed):
    rng = np.random.default_rng(100 + seed)
    rho = random_density(8, rng, rank=4)
    u = haar_unitary(8, rng)
    rotated = u @ rho @ u.conj().T
    rotated = 0.5 * (rotated + rotated.conj().T)
    assert s_vn(DensityMatrix(rotated)) == pytest.approx(s_vn(DensityMatrix(rho)), abs=1e-9)


def test_pure_and_projector_agree_on_every_basis():
    rng = np.random.default_rng(2)
    psi = PureState(random_state(12, rng))
    rho = DensityMatrix.from_pure(psi)
    u = haar_unitary(12, rng)
    assert operator_entropy(rho, np.eye(12)) == pytest.approx(s_x(psi), abs=1e-12)
    assert operator_entropy(rho, u) == pytest.approx(brute_force_entropy(psi, u), abs=1e-10)


def test_matches_brute_force_on_random_states():
    rng = np.random.default_rng(77)
    n = 16
    basis = haar_unitary(n, rng)
    worst = 0.0
    for _ in range(100):
        psi = PureState(random_state(n, rng))
        fast = operator_entropy(DensityMatrix.from_pure(psi), basis)
        worst = max(worst, abs(fast - brute_force_entropy(psi, basis)))
        worst = max(worst, abs(s_x(psi) - brute_force_entropy(psi, np.eye(n))))
    assert worst <= 1e-10
