import numpy as np
import pytest
from hypothesis import given, strategies as st

from fidbound import channels as ch
from fidbound.fidelity import (
    FidelityPair,
    basis_fidelity,
    hofmann_bound,
    measure,
    process_fidelity,
    superposition_fidelity,
)
from fidbound.oracle import random_cptp

seeds = st.integers(0, 2**32 - 1)


def state_form_F(chi, u):
    """Average of per-state output fidelities over the computational basis."""
    d = chi.dim
    total = 0.0
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1.0
        target = u @ e
        rho = ch.apply(chi, np.outer(e, e))
        total += np.real(target.conj() @ rho @ target)
    return total / d


def state_form_G(chi, u):
    s = ch.superposition_state(chi.n_qubits)
    target = u @ s
    return np.real(target.conj() @ ch.apply(chi, np.outer(s, s.conj())) @ target)


def ratio_form_Fchi(chi, u):
    chi_u = ch.choi_from_unitary(u).mat
    return np.real(np.trace(chi_u @ chi.mat)) / (np.trace(chi_u).real * np.trace(chi.mat).real)


def test_perfect_gate(rng):
    u = ch.haar_unitary(2, rng)
    chi = ch.choi_from_unitary(u)
    assert basis_fidelity(chi, u) == pytest.approx(1.0, abs=1e-12)
    assert superposition_fidelity(chi, u) == pytest.approx(1.0, abs=1e-12)
    assert process_fidelity(chi, u) == pytest.approx(1.0, abs=1e-12)


def test_identity_against_cnot():
    chi = ch.choi_from_unitary(np.eye(4))
    assert state_form_F(chi, ch.cnot()) == pytest.approx(0.5)
    assert basis_fidelity(chi, ch.cnot()) == pytest.approx(0.5, abs=1e-12)
    assert process_fidelity(chi, ch.cnot()) == pytest.approx(0.25, abs=1e-12)


def test_phase_flip_kills_superposition_fidelity(rng):
    u = ch.haar_unitary(2, rng)
    zz = np.kron(ch.PAULI_Z, ch.PAULI_Z)
    chi = ch.choi_from_unitary(u @ zz)
    assert superposition_fidelity(chi, u) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 0.1, 0.37, 1.0])
def test_depolarizing_fidelities(p, rng):
    u = ch.haar_unitary(2, rng)
    chi = ch.depolarizing(2, p, u)
    assert basis_fidelity(chi, u) == pytest.approx(1 - p + p / 4, abs=1e-12)
    assert superposition_fidelity(chi, u) == pytest.approx(1 - p + p / 4, abs=1e-12)
    assert process_fidelity(chi, u) == pytest.approx(1 - p + p / 16, abs=1e-12)


@given(seed=seeds)
def test_unitary_process_fidelity_formula(seed):
    rng = np.random.default_rng(seed)
    u, v = ch.haar_unitary(2, rng), ch.haar_unitary(2, rng)
    expected = abs(np.trace(u.conj().T @ v)) ** 2 / 16
    assert process_fidelity(ch.choi_from_unitary(v), u) == pytest.approx(expected, abs=1e-12)


@given(seed=seeds, n=st.integers(1, 3))
def test_trace_form_matches_state_form(seed, n):
    rng = np.random.default_rng(seed)
    chi = random_cptp(n, rank=3, seed=rng)
    u = ch.haar_unitary(n, rng)
    assert basis_fidelity(chi, u) == pytest.approx(state_form_F(chi, u), abs=1e-10)
    assert superposition_fidelity(chi, u) == pytest.approx(state_form_G(chi, u), abs=1e-10)
    assert process_fidelity(chi, u) == pytest.approx(ratio_form_Fchi(chi, u), abs=1e-10)


@given(seed=seeds, p=st.floats(0, 1))
def test_fidelities_are_affine(seed, p):
    rng = np.random.default_rng(seed)
    a, b = random_cptp(2, seed=rng), random_cptp(2, rank=2, seed=rng)
    u = ch.haar_unitary(2, rng)
    m = ch.mix(p, a, b)
    for f in (basis_fidelity, superposition_fidelity, process_fidelity):
        assert f(m, u) == pytest.approx((1 - p) * f(a, u) + p * f(b, u), abs=1e-10)


@given(seed=seeds)
def test_basis_rotation_covariance(seed):
    rng = np.random.default_rng(seed)
    chi = random_cptp(2, rank=4, seed=rng)
    u, v = ch.haar_unitary(2, rng), ch.haar_unitary(2, rng)
    w = ch.lift_output(v)
    rotated = ch.ChoiMatrix(2, w @ chi.mat @ w.conj().T)
    for f in (basis_fidelity, superposition_fidelity, process_fidelity):
        assert f(rotated, v @ u) == pytest.approx(f(chi, u), abs=1e-10)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        basis_fidelity(ch.choi_from_unitary(ch.cnot()), np.eye(2))


def test_measure_and_pair_validation():
    pair = measure(ch.depolarizing(2, 0.2, ch.cz()), ch.cz())
    assert pair.f_basis == pytest.approx(0.85) and pair.n_qubits == 2
    with pytest.raises(ValueError):
        FidelityPair(1.2, 0.5)


def test_hofmann_bound():
    assert hofmann_bound(1, 1) == 1
    assert hofmann_bound(0.98, 0.97) == pytest.approx(0.95, abs=1e-15)
    assert hofmann_bound(0.5, 0.4) == 0.0
    with pytest.raises(ValueError):
        hofmann_bound(1.1, 0.5)
