"""State and process fidelities of a channel relative to a target unitary."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import ChoiMatrix, check_unitary, lift_output, max_entangled, n_qubits_of, superposition_state


@dataclass(frozen=True)
class FidelityPair:
    f_basis: float
    g_super: float
    n_qubits: int = 2

    def __post_init__(self):
        for name in ("f_basis", "g_super"):
            v = getattr(self, name)
            if not -1e-12 <= v <= 1 + 1e-12:
                raise ValueError(f"{name} = {v} lies outside [0, 1]")


@lru_cache(maxsize=None)
def _basis_operator(n: int) -> np.ndarray:
    d = 2**n
    diag = np.zeros(d * d)
    diag[np.arange(d) * (d + 1)] = 1.0 / d
    return np.diag(diag).astype(complex)


@lru_cache(maxsize=None)
def _superposition_operator(n: int) -> np.ndarray:
    ss = np.kron(superposition_state(n), superposition_state(n))
    return np.outer(ss, ss.conj())


def basis_operator(n: int = 2) -> np.ndarray:
    """``R_F = 2^{-N} sum_j |j><j| (x) |j><j|``."""
    return _basis_operator(n).copy()


def superposition_operator(n: int = 2) -> np.ndarray:
    """``R_G = |s><s| (x) |s><s|``."""
    return _superposition_operator(n).copy()


def _rotated_expectation(op: np.ndarray, chi: ChoiMatrix, u) -> float:
    u = check_unitary(u)
    if n_qubits_of(u) != chi.n_qubits:
        raise ValueError(f"unitary acts on {n_qubits_of(u)} qubits, channel on {chi.n_qubits}")
    w = lift_output(u)
    return float(np.real(np.trace(w @ op @ w.conj().T @ chi.mat)))


def basis_fidelity(chi: ChoiMatrix, u) -> float:
    """Average output fidelity over the computational basis."""
    return _rotated_expectation(_basis_operator(chi.n_qubits), chi, u)


def superposition_fidelity(chi: ChoiMatrix, u) -> float:
    """Output fidelity for the balanced superposition input ``|s>``."""
    return _rotated_expectation(_superposition_operator(chi.n_qubits), chi, u)


def process_fidelity(chi: ChoiMatrix, u) -> float:
    """``Tr[chi_U chi] / (Tr[chi_U] Tr[chi])`` for a trace-preserving ``chi``.

    With ``Tr[chi] = 2^N`` this is ``<chi_U| chi |chi_U> / 2^N``.
    """
    u = check_unitary(u)
    if n_qubits_of(u) != chi.n_qubits:
        raise ValueError(f"unitary acts on {n_qubits_of(u)} qubits, channel on {chi.n_qubits}")
    v = lift_output(u) @ max_entangled(chi.n_qubits)
    return float(np.real(v.conj() @ chi.mat @ v)) / chi.dim


def measure(chi: ChoiMatrix, u) -> FidelityPair:
    return FidelityPair(basis_fidelity(chi, u), superposition_fidelity(chi, u), chi.n_qubits)


def hofmann_bound(f: float, f_prime: float) -> float:
    """Process-fidelity bound ``max(F + F' - 1, 0)`` from two mutually unbiased bases."""
    for v in (f, f_prime):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"fidelity {v} lies outside [0, 1]")
    return max(f + f_prime - 1.0, 0.0)
