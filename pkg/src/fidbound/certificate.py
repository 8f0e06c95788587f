"""Dual certificate proving optimality of the two-qubit bound.

For ``F`` strictly between threshold and 1 and ``0 < G < 1`` the operator

    M = |Phi+><Phi+| / 4 + x R_F + w R_G + y I + z |++><++| (x) I_out

with closed-form multipliers is positive semidefinite and annihilates the
extremal channel.  Hence ``Tr[M chi] >= 0`` for every CPTP ``chi``, which
rearranges to ``F_chi >= -(x F + w G + 4 y + z)``, and the right-hand side equals
the bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import NamedTuple

import numpy as np

from .bound2q import ExtremalParams, bound, extremal_components, params_from_fidelities, threshold
from .channels import max_entangled, superposition_state
from .fidelity import basis_operator, superposition_operator
from .matcore import eigh


class SingularInputError(ValueError):
    """The multipliers diverge at the requested (F, G)."""


class Multipliers(NamedTuple):
    x: float
    w: float
    y: float
    z: float


class AnalyticSpectrum(NamedTuple):
    lambdas: tuple[float, float, float, float, float]
    A: float
    B: float
    C: float
    D: float

    def multiset(self) -> np.ndarray:
        """All 16 eigenvalues with multiplicities 8, 3, 3, 1, 1, sorted."""
        l1, l2, l3, l4, l5 = self.lambdas
        return np.sort(np.array([l1] * 8 + [l2] * 3 + [l3] * 3 + [l4, l5]))


@dataclass(frozen=True, eq=False)
class DualCertificate:
    F: float
    G: float
    x: float
    w: float
    y: float
    z: float
    m: np.ndarray
    abcd: ExtremalParams

    @property
    def recovered_bound(self) -> float:
        return -(self.x * self.F + self.w * self.G + 4.0 * self.y + self.z)

    def slackness_norm(self) -> float:
        """``||M chi_S||_F`` for the extremal channel."""
        chi_s = sum(np.outer(v, v.conj()) for v in extremal_components(self.abcd))
        return float(np.linalg.norm(self.m @ chi_s))

    def spectrum(self, method: str = "lapack") -> np.ndarray:
        return eigh(self.m, method=method).eigenvalues

    def min_eig(self) -> float:
        return float(self.spectrum()[0])

    def report(self) -> dict:
        return {
            "F": self.F,
            "G": self.G,
            "x": self.x,
            "w": self.w,
            "y": self.y,
            "z": self.z,
            "min_eig": self.min_eig(),
            "slackness_norm": self.slackness_norm(),
            "bound_recovered": self.recovered_bound,
            "bound": bound(self.F, self.G).bound,
        }


def _check_interior(F: float, G: float) -> None:
    if not 0.0 < G < 1.0:
        raise SingularInputError(f"G = {G} must lie strictly inside (0, 1)")
    f_th = threshold(G)
    if not f_th < F < 1.0:
        raise SingularInputError(f"F = {F} must lie strictly inside ({f_th}, 1) for G = {G}")


def multipliers(F: float, G: float) -> Multipliers:
    """Closed-form Lagrange multipliers (x, w, y, z)."""
    _check_interior(F, G)
    a = params_from_fidelities(F, G).a
    sg, s1g, s4a = sqrt(G), sqrt(1.0 - G), sqrt(4.0 - a * a)
    den = sg * s4a - a * s1g
    if den <= 0.0:
        raise SingularInputError(f"vanishing denominator at F = {F}, G = {G}")
    k = 3 * a + 2 * sg
    x = s4a * k / (2 * a * s1g - 2 * sg * s4a)
    w = -(3 * s4a + 2 * s1g) * k / (64 * sg * s1g)
    y = k * (3 * s4a + 2 * s1g) / (32 * den)
    z = (s4a - 2 * s1g) / (2 * s1g) * y
    return Multipliers(x, w, y, z)


def slackness_system(p: ExtremalParams) -> tuple[np.ndarray, np.ndarray]:
    """Linear system ``K @ (x, w, y, z) = r`` equivalent to ``M |chi_m> = 0``."""
    a, b, c, d = p.a, p.b, p.c, p.d
    k = np.array(
        [
            [2 * a + b, 0.0, 8 * a, 0.0],
            [0.0, a + 2 * b, 2 * b, a + 2 * b],
            [2 * c + d, 0.0, 8 * c, 0.0],
            [0.0, 0.0, 2 * d, c + 2 * d],
        ]
    )
    return k, np.array([-(2 * a + b), 0.0, 0.0, 0.0])


def slackness_residuals(F: float, G: float, mult: Multipliers | None = None) -> np.ndarray:
    p = params_from_fidelities(F, G)
    if mult is None:
        mult = multipliers(F, G)
    k, r = slackness_system(p)
    return k @ np.asarray(mult) - r


def solve_multipliers(F: float, G: float) -> Multipliers:
    """Multipliers from a direct solve of the slackness system."""
    _check_interior(F, G)
    k, r = slackness_system(params_from_fidelities(F, G))
    return Multipliers(*np.linalg.solve(k, r))


def dual_operator(x: float, w: float, y: float, z: float) -> np.ndarray:
    phi = max_entangled(2)
    s = superposition_state(2)
    return (
        0.25 * np.outer(phi, phi.conj())
        + x * basis_operator(2)
        + w * superposition_operator(2)
        + y * np.eye(16)
        + z * np.kron(np.outer(s, s.conj()), np.eye(4))
    )


def build_m(F: float, G: float) -> DualCertificate:
    mult = multipliers(F, G)
    return DualCertificate(F, G, *mult, dual_operator(*mult), params_from_fidelities(F, G))


def analytic_eigenvalues(x: float, w: float, y: float, z: float) -> AnalyticSpectrum:
    A = x + 8 * y + 4 * z
    B = x * x - 4 * x * z + 16 * z * z
    C = 1 + 4 * w + x + 8 * y + 4 * z
    D = 1 + 16 * w * w + 2 * x + x * x - 4 * w * (1 + x - 8 * z) - 4 * z - 4 * x * z + 16 * z * z
    sb, sd = sqrt(max(B, 0.0)), sqrt(max(D, 0.0))
    lambdas = (y, (A - sb) / 8, (A + sb) / 8, (C - sd) / 8, (C + sd) / 8)
    return AnalyticSpectrum(lambdas, A, B, C, D)


def closed_form_A(a: float, G: float) -> float:
    sg, s1g, s4a = sqrt(G), sqrt(1 - G), sqrt(4 - a * a)
    return (3 * a + 2 * sg) / (16 * s1g) * (16 - 3 * a * a - 4 * G) / (sg * s4a - a * s1g)


def closed_form_C(a: float, G: float) -> float:
    sg, s1g, s4a = sqrt(G), sqrt(1 - G), sqrt(4 - a * a)
    return (3 * a * a + 4 * G) / (16 * sg) * (3 * s4a + 2 * s1g) / (sg * s4a - a * s1g)


def auxiliary_slacks(F: float, G: float) -> dict[str, float]:
    """Slack of each inequality used to show y, A, C >= 0 (all should be >= 0)."""
    a = params_from_fidelities(F, G).a
    sg = sqrt(G)
    return {
        "a_max": 2 * sg - a,
        "a_min": a + 2 * sg / 3,
        "a_squared": 16 - (3 * a * a + 4 * G),
        "denominator": sqrt(G * max(4 - a * a, 0.0)) - a * sqrt(1 - G),
    }


def group_eigenvalues(values, gap: float = 1e-8) -> list[tuple[float, int]]:
    """Cluster sorted eigenvalues closer than ``gap``; returns (mean, multiplicity)."""
    values = np.sort(np.asarray(values))
    groups: list[list[float]] = [[values[0]]]
    for v in values[1:]:
        if v - groups[-1][-1] <= gap:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(float(np.mean(g)), len(g)) for g in groups]
