"""Two-qubit process-fidelity bound from basis and superposition fidelities.

Given the average computational-basis fidelity ``F`` and the ``|++>`` output
fidelity ``G`` of a two-qubit channel relative to a target ``U``, the process
fidelity obeys ``F_chi >= bound(F, G)``.  The bound is attained by an explicit
rank-4 channel built here, so it cannot be improved.
"""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from math import sqrt

import numpy as np

from .channels import (
    PAULI_X,
    PAULI_Z,
    ChoiMatrix,
    check_unitary,
    choi_from_unitary,
    lift_output,
    max_entangled,
    n_qubits_of,
)
from .fidelity import hofmann_bound

RADICAND_SLACK = 1e-14
THRESHOLD_SLACK = 1e-12

_PLUS = np.array([1.0, 1.0]) / sqrt(2.0)
_MINUS = np.array([1.0, -1.0]) / sqrt(2.0)


class Regime(str, enum.Enum):
    ACTIVE = "Active"
    BELOW_THRESHOLD = "BelowThreshold"


class BoundaryKind(str, enum.Enum):
    FLIP_X = "FlipX"
    FLIP_Z = "FlipZ"
    FLIP_ZX = "FlipZX"


@dataclass(frozen=True)
class BoundReport:
    F: float
    G: float
    bound: float
    f_th: float
    regime: Regime
    hofmann_equiv: float
    n_qubits: int = 2

    def to_dict(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        return d


@dataclass(frozen=True)
class ExtremalParams:
    a: float
    b: float
    c: float
    d: float

    def tp_residuals(self) -> tuple[float, float]:
        a, b, c, d = self.a, self.b, self.c, self.d
        return (a * a + 3 * c * c - 4.0, b * b + a * b + 3 * d * d + 3 * c * d)

    def fidelities(self) -> tuple[float, float, float]:
        """``(F, G, F_chi)`` of the channel built from these coefficients."""
        a, b, c, d = self.a, self.b, self.c, self.d
        f = (2 * a + b) ** 2 / 16 + 3 * (2 * c + d) ** 2 / 16
        return f, (2 * b + a) ** 2 / 4, (2 * a + b) ** 2 / 16


def _sqrt(x: float) -> float:
    # Radicands that vanish analytically on the boundary may come out as -1e-16.
    if x < 0.0:
        if x < -RADICAND_SLACK:
            raise ValueError(f"negative radicand {x:.3e}")
        return 0.0
    return sqrt(x)


def check_fidelity(name: str, v: float) -> float:
    v = float(v)
    if not 0.0 <= v <= 1.0 or np.isnan(v):
        raise ValueError(f"{name} = {v} lies outside [0, 1]")
    return v


def threshold(G: float) -> float:
    """Basis fidelity at which the bound reaches zero."""
    G = check_fidelity("G", G)
    return (5.0 - G + _sqrt(9.0 - 10.0 * G + G * G)) / 8.0


def _bound_value(F: float, G: float) -> float:
    return ((2 * F - 1) * sqrt(G) - _sqrt((4 * F - 1) * (1 - F)) * _sqrt(1 - G)) ** 2


def bound(F: float, G: float) -> BoundReport:
    F = check_fidelity("F", F)
    G = check_fidelity("G", G)
    f_th = threshold(G)
    if F < f_th:
        value, regime = 0.0, Regime.BELOW_THRESHOLD
    else:
        value, regime = min(_bound_value(F, G), 1.0), Regime.ACTIVE
    return BoundReport(F, G, value, f_th, regime, hofmann_bound(F, G))


def params_from_fidelities(F: float, G: float) -> ExtremalParams:
    F = check_fidelity("F", F)
    G = check_fidelity("G", G)
    if F < 0.25:
        raise ValueError(f"F = {F} < 1/4 has no real extremal parameters")
    f_th = threshold(G)
    if F < f_th - THRESHOLD_SLACK:
        raise ValueError(f"F = {F} is below the threshold {f_th} for G = {G}")
    sg = sqrt(G)
    a = (2.0 / 3.0) * ((8 * F - 5) * sg - 4 * _sqrt((1 - F) * (4 * F - 1) * (1 - G)))
    root = _sqrt((4 - a * a) / 3)
    return ExtremalParams(a, sg - a / 2, root, _sqrt((1 - G) / 3) - 0.5 * root)


def _zjk(j: int, k: int) -> np.ndarray:
    zj = PAULI_Z if j else np.eye(2)
    zk = PAULI_Z if k else np.eye(2)
    return np.kron(np.eye(4), np.kron(zj, zk))


def extremal_components(params: ExtremalParams) -> list[np.ndarray]:
    """The four vectors whose projectors sum to the extremal Choi matrix (U = I frame)."""
    phi = max_entangled(2)
    plusplus = np.kron(_PLUS, _PLUS)
    outs = [np.kron(_PLUS, _PLUS), np.kron(_PLUS, _MINUS), np.kron(_MINUS, _PLUS), np.kron(_MINUS, _MINUS)]
    vecs = []
    for m, (j, k) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        ent, prod = (params.a, params.b) if m == 0 else (params.c, params.d)
        vecs.append(ent * (_zjk(j, k) @ phi) + prod * np.kron(plusplus, outs[m]))
    return vecs


def extremal_channel_s(F: float, G: float) -> np.ndarray:
    """Extremal Choi matrix in the U = I frame."""
    vecs = extremal_components(params_from_fidelities(F, G))
    return sum(np.outer(v, v.conj()) for v in vecs)


def _two_qubit(u) -> np.ndarray:
    u = check_unitary(u)
    if n_qubits_of(u) != 2:
        raise ValueError("the two-qubit bound needs a 4x4 unitary")
    return u


def extremal_channel(F: float, G: float, u=None) -> ChoiMatrix:
    """CPTP map with fidelities (F, G) relative to ``u`` and minimal process fidelity."""
    u = np.eye(4) if u is None else _two_qubit(u)
    w = lift_output(u)
    return ChoiMatrix(2, w @ extremal_channel_s(F, G) @ w.conj().T)


def boundary_channel(kind: BoundaryKind | str, u=None) -> ChoiMatrix:
    """Unitary channels U·X, U·Z, U·Z·X with zero process fidelity to U."""
    u = np.eye(4) if u is None else _two_qubit(u)
    xx = np.kron(PAULI_X, PAULI_X)
    zz = np.kron(PAULI_Z, PAULI_Z)
    flips = {BoundaryKind.FLIP_X: xx, BoundaryKind.FLIP_Z: zz, BoundaryKind.FLIP_ZX: zz @ xx}
    return choi_from_unitary(u @ flips[BoundaryKind(kind)])


def expansion_bound(eps: float, delta: float) -> float:
    """First-order form of the bound at ``F = 1 - eps``, ``G = 1 - delta``."""
    return 1.0 - 4.0 * eps - delta - 2.0 * sqrt(3.0) * sqrt(eps * delta)
