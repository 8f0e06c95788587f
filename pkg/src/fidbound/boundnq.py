"""N-qubit generalisation of the extremal construction.

Same structure as the two-qubit channel, with the ``|chi_j>`` obtained from a
common seed vector by the phase operators ``V_j = (x)_k Z^{j_k}``.  For ``N > 2``
the construction gives an achievable process fidelity, not a proven bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.optimize import brentq

from .bound2q import BoundReport, Regime, _sqrt, check_fidelity
from .channels import ChoiMatrix, check_unitary, lift_output, max_entangled, n_qubits_of, superposition_state
from .fidelity import hofmann_bound

MAX_CHANNEL_QUBITS = 4


@dataclass(frozen=True)
class NQubitParams:
    n: int
    a: float
    b: float
    c: float
    d: float

    def tp_residuals(self) -> tuple[float, float]:
        dim = 2**self.n
        k = 2.0 ** (1 - self.n / 2)
        a, b, c, d = self.a, self.b, self.c, self.d
        return (
            a * a + (dim - 1) * c * c - dim,
            b * b + k * a * b + (dim - 1) * (d * d + k * c * d),
        )

    def fidelities(self) -> tuple[float, float, float]:
        """``(F, G, F_chi)`` of the channel built from these coefficients."""
        dim = 2**self.n
        s = sqrt(dim)
        p = self.a + self.b / s
        q = self.c + self.d / s
        return p * p / dim + (1 - 1 / dim) * q * q, (self.a / s + self.b) ** 2, p * p / dim


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"number of qubits must be a positive integer, got {n}")
    return int(n)


def nq_threshold(n: int, G: float) -> float:
    n = _check_n(n)
    G = check_fidelity("G", G)
    dim = 2.0**n
    return (
        1.0
        - 2.0 ** (1 - n)
        + (1 - G) / 2.0 ** (2 * n - 1)
        + 2.0 / dim**2 * _sqrt((1 - G) * ((dim - 1) ** 2 - G))
    )


def _inner(n: int, F: float, G: float) -> float:
    # square root of the bound, signed; zero at threshold
    dim = 2.0**n
    rad = dim - 1 - (1 - F) * 2.0 ** (2 * n - 2)
    return (1 - (1 - F) * 2.0 ** (n - 1)) * sqrt(G) - _sqrt((1 - F) * (1 - G)) * _sqrt(rad)


def nq_bound(n: int, F: float, G: float) -> BoundReport:
    n = _check_n(n)
    F = check_fidelity("F", F)
    G = check_fidelity("G", G)
    f_th = nq_threshold(n, G)
    if F < f_th:
        value, regime = 0.0, Regime.BELOW_THRESHOLD
    else:
        value, regime = min(_inner(n, F, G) ** 2, 1.0), Regime.ACTIVE
    return BoundReport(F, G, value, f_th, regime, hofmann_bound(F, G), n)


def _params_for_a(n: int, a: float, G: float, h_sign: float = 1.0) -> NQubitParams:
    dim = 2**n
    s = sqrt(dim)
    c = _sqrt((dim - a * a) / (dim - 1))
    h = h_sign * _sqrt((1 - G) / (dim - 1))
    return NQubitParams(n, a, sqrt(G) - a / s, c, h - c / s)


def _f_of_a(n: int, a: float, G: float, h_sign: float = 1.0) -> float:
    return _params_for_a(n, a, G, h_sign).fidelities()[0]


def _scan_roots(n: int, F: float, G: float, h_sign: float, points: int = 4001) -> list[float]:
    lim = sqrt(2**n)
    grid = np.linspace(-lim, lim, points)
    vals = np.array([_f_of_a(n, a, G, h_sign) - F for a in grid])
    roots = []
    for i in range(points - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(lambda a: _f_of_a(n, a, G, h_sign) - F, grid[i], grid[i + 1], xtol=1e-15))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def branch_values(n: int, F: float, G: float) -> list[float]:
    """Process fidelities of every real solution branch found by a scan over ``a``.

    Tangential roots (e.g. at ``F = 1``) are not resolved by the scan.
    """
    n = _check_n(n)
    out = []
    for sign in (1.0, -1.0):
        for a in _scan_roots(n, F, G, sign):
            out.append(_params_for_a(n, a, G, sign).fidelities()[2])
    return sorted(out)


def nq_params(n: int, F: float, G: float) -> NQubitParams:
    """Ansatz coefficients reproducing ``(F, G)`` with the smallest process fidelity.

    The root in ``a`` is seeded from the closed-form process fidelity and
    polished with Newton steps on ``F(a) = F``.
    """
    n = _check_n(n)
    F = check_fidelity("F", F)
    G = check_fidelity("G", G)
    if F < nq_threshold(n, G) - 1e-12:
        raise ValueError(f"F = {F} is below the {n}-qubit threshold for G = {G}; no real solution")
    dim = 2**n
    s = sqrt(dim)
    p = sqrt(dim) * max(_inner(n, F, G), 0.0)
    a = (p - sqrt(G) / s) / (1 - 1 / dim)
    a = min(max(a, -s), s)
    for _ in range(20):
        r = _f_of_a(n, a, G) - F
        if abs(r) < 1e-15:
            break
        step = 1e-7
        lo, hi = max(a - step, -s), min(a + step, s)
        slope = (_f_of_a(n, hi, G) - _f_of_a(n, lo, G)) / (hi - lo)
        if abs(slope) < 1e-6:
            break
        a_new = min(max(a - r / slope, -s), s)
        if abs(_f_of_a(n, a_new, G) - F) >= abs(r):
            break
        a = a_new
    params = _params_for_a(n, a, G)
    f_got, g_got, _ = params.fidelities()
    if abs(f_got - F) > 1e-9 or abs(g_got - G) > 1e-9:
        raise ValueError(f"parameter inversion failed at N={n}, F={F}, G={G}")
    return params


def phase_operator_diag(n: int, j: int) -> np.ndarray:
    """Diagonal of ``V_j``; bit ``k`` of ``j`` (most significant first) flips qubit ``k``."""
    m = np.arange(2**n)
    parity = np.array([bin(j & int(v)).count("1") & 1 for v in m])
    return 1.0 - 2.0 * parity


def nq_components(params: NQubitParams) -> list[np.ndarray]:
    n = params.n
    dim = 2**n
    phi = max_entangled(n)
    ss = np.kron(superposition_state(n), superposition_state(n))
    vecs = [params.a * phi + params.b * ss]
    seed = params.c * phi + params.d * ss
    for j in range(1, dim):
        vecs.append(np.tile(phase_operator_diag(n, j), dim) * seed)
    return vecs


def nq_extremal_channel(n: int, F: float, G: float, u=None) -> ChoiMatrix:
    n = _check_n(n)
    if n > MAX_CHANNEL_QUBITS:
        raise ValueError(f"channel construction is capped at N = {MAX_CHANNEL_QUBITS}")
    u = np.eye(2**n) if u is None else check_unitary(u)
    if n_qubits_of(u) != n:
        raise ValueError(f"unitary acts on {n_qubits_of(u)} qubits, expected {n}")
    vecs = np.array(nq_components(nq_params(n, F, G)))
    chi_s = vecs.T @ vecs.conj()
    w = lift_output(u)
    return ChoiMatrix(n, w @ chi_s @ w.conj().T)


@dataclass(frozen=True)
class ScalingRow:
    n: int
    f_th: float
    bound: float
    hofmann: float


def scaling_table(n_range, F: float, G: float) -> list[ScalingRow]:
    rows = []
    for n in n_range:
        rep = nq_bound(n, F, G)
        rows.append(ScalingRow(int(n), rep.f_th, rep.bound, rep.hofmann_equiv))
    return rows


def first_vanishing(n_range, F: float, G: float) -> int | None:
    """Smallest N in ``n_range`` where ``F`` falls below the threshold."""
    for n in n_range:
        if F < nq_threshold(n, G):
            return int(n)
    return None
