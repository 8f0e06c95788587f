"""Choi-matrix representation of qubit channels.

The Choi matrix of a channel E on N qubits is
``chi = sum_ij |i><j| (x) E(|i><j|)`` with the input register on the left, so
``rho_out = Tr_in[(rho_in^T (x) I) chi]`` and trace preservation reads
``Tr_out[chi] = I_in``.  Transposition is in the computational basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple

import numpy as np

from .matcore import OUT, eigh, hermitian, partial_trace
from . import matcore

UNITARY_TOL = 1e-10
CP_TOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Choi matrix of an ``n_qubits``-qubit channel (size ``4**n_qubits``)."""

    n_qubits: int
    mat: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        dim = 4**self.n_qubits
        m = hermitian(self.mat, tol=1e-10)
        if m.shape != (dim, dim):
            raise ValueError(f"Choi matrix for {self.n_qubits} qubits must be {dim}x{dim}, got {m.shape}")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension of one register."""
        return 2**self.n_qubits

    def input_marginal(self) -> np.ndarray:
        return partial_trace(self.mat, (self.dim, self.dim), OUT)

    def to_json(self) -> dict:
        return {"n_qubits": self.n_qubits, **matcore.to_json(self.mat)}

    @classmethod
    def from_json(cls, obj: dict) -> "ChoiMatrix":
        if "n_qubits" not in obj:
            raise ValueError("Choi JSON is missing field 'n_qubits'")
        return cls(int(obj["n_qubits"]), matcore.from_json(obj))


class CPTPReport(NamedTuple):
    min_eig: float
    tp_residual: float
    ok: bool


def n_qubits_of(u: np.ndarray) -> int:
    d = u.shape[0]
    n = int(round(np.log2(d)))
    if d < 2 or 2**n != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return n


def check_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``u`` as a complex array after checking ``||U^dagger U - I||_F <= tol``."""
    u = matcore.as_cmat(u)
    if u.shape[0] != u.shape[1]:
        raise ValueError(f"unitary must be square, got {u.shape}")
    n_qubits_of(u)
    err = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))
    if err > tol:
        raise ValueError(f"matrix is not unitary (||U^dagger U - I||_F = {err:.3e})")
    return u


def max_entangled(n: int) -> np.ndarray:
    """``|Phi_N^+> = 2^{-N/2} sum_j |j>|j>`` as a flat vector of length ``4**n``."""
    if n < 1:
        raise ValueError("number of qubits must be >= 1")
    d = 2**n
    return np.eye(d, dtype=complex).ravel() / np.sqrt(d)


def superposition_state(n: int) -> np.ndarray:
    """Balanced superposition ``|s> = 2^{-N/2} sum_j |j>``."""
    d = 2**n
    return np.full(d, 1.0 / np.sqrt(d), dtype=complex)


def lift_output(u: np.ndarray) -> np.ndarray:
    """``I_in (x) U`` for a unitary acting on the output register."""
    return np.kron(np.eye(u.shape[0], dtype=complex), u)


def choi_from_unitary(u) -> ChoiMatrix:
    u = check_unitary(u)
    n = n_qubits_of(u)
    v = lift_output(u) @ max_entangled(n)
    return ChoiMatrix(n, 2**n * np.outer(v, v.conj()))


def apply(chi: ChoiMatrix, rho_in) -> np.ndarray:
    """Output state ``Tr_in[(rho_in^T (x) I) chi]``."""
    rho = matcore.as_cmat(rho_in)
    d = chi.dim
    if rho.shape != (d, d):
        raise ValueError(f"input state of shape {rho.shape} does not match a {chi.n_qubits}-qubit channel")
    t = chi.mat.reshape(d, d, d, d)
    # sum_ij rho_ij * E(|i><j|)
    return np.einsum("ij,iajb->ab", rho, t)


def is_cptp(chi: ChoiMatrix, tol: float = CP_TOL) -> CPTPReport:
    min_eig = float(eigh(chi.mat, tol=1e-9).eigenvalues[0])
    tp_residual = float(np.linalg.norm(chi.input_marginal() - np.eye(chi.dim)))
    return CPTPReport(min_eig, tp_residual, min_eig >= -tol and tp_residual <= tol)


def mix(p: float, chi_a: ChoiMatrix, chi_b: ChoiMatrix) -> ChoiMatrix:
    """Convex mixture ``(1 - p) chi_a + p chi_b``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
    if chi_a.n_qubits != chi_b.n_qubits:
        raise ValueError("cannot mix channels on different numbers of qubits")
    return ChoiMatrix(chi_a.n_qubits, (1.0 - p) * chi_a.mat + p * chi_b.mat)


def fully_depolarizing(n: int) -> ChoiMatrix:
    d = 2**n
    return ChoiMatrix(n, np.eye(d * d, dtype=complex) / d)


def depolarizing(n: int, p: float, u=None) -> ChoiMatrix:
    """Unitary ``u`` followed by depolarizing noise of strength ``p``."""
    if u is None:
        u = np.eye(2**n)
    u = check_unitary(u)
    if n_qubits_of(u) != n:
        raise ValueError(f"unitary acts on {n_qubits_of(u)} qubits, expected {n}")
    return mix(p, choi_from_unitary(u), fully_depolarizing(n))


def unitary_from_choi(chi: ChoiMatrix, tol: float = 1e-8) -> np.ndarray:
    """Recover ``U`` (up to a global phase) from a rank-1 trace-preserving Choi matrix."""
    res = eigh(chi.mat, tol=1e-9)
    lam = res.eigenvalues
    if lam[-2] > tol * lam[-1]:
        raise ValueError("Choi matrix is not rank one; it is not a unitary channel")
    d = chi.dim
    vec = res.eigenvectors[:, -1] * np.sqrt(lam[-1] / d)
    # |chi_U> = (I (x) U)|Phi+>  =>  entry (i, a) is U[a, i] / sqrt(d)
    u = vec.reshape(d, d).T * np.sqrt(d)
    return check_unitary(u, tol=1e-6)


# --- gate library -----------------------------------------------------------

def identity(n: int = 2) -> np.ndarray:
    return np.eye(2**n, dtype=complex)


def cnot() -> np.ndarray:
    u = np.eye(4, dtype=complex)
    u[[2, 3]] = u[[3, 2]]
    return u


def cz() -> np.ndarray:
    return np.diag([1, 1, 1, -1]).astype(complex)


def swap() -> np.ndarray:
    return np.eye(4, dtype=complex)[[0, 2, 1, 3]]


def toffoli() -> np.ndarray:
    u = np.eye(8, dtype=complex)
    u[[6, 7]] = u[[7, 6]]
    return u


def pauli_string(op: np.ndarray, n: int) -> np.ndarray:
    """``op`` applied to every one of ``n`` qubits."""
    return reduce(np.kron, [op] * n)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``n``-qubit unitary via QR of a complex Gaussian matrix."""
    d = 2**n
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


BUILTIN_GATES = {
    "identity": lambda n: identity(n),
    "cnot": lambda n: cnot(),
    "cz": lambda n: cz(),
    "swap": lambda n: swap(),
    "toffoli": lambda n: toffoli(),
}


def gate_by_name(spec: str, n: int = 2) -> np.ndarray:
    """Builtin gate: ``cnot``, ``cz``, ``swap``, ``toffoli``, ``identity`` or ``random:<seed>``."""
    name = spec.strip().lower()
    if name.startswith("random:"):
        try:
            seed = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad random gate seed in {spec!r}") from None
        return haar_unitary(n, np.random.default_rng(seed))
    if name not in BUILTIN_GATES:
        raise ValueError(f"unknown gate {spec!r}; expected one of {sorted(BUILTIN_GATES)} or random:<seed>")
    u = BUILTIN_GATES[name](n)
    if n_qubits_of(u) != n and name != "identity":
        raise ValueError(f"gate {name} acts on {n_qubits_of(u)} qubits, not {n}")
    return u

