"""Numerical minimisation of process fidelity at fixed (F, G).

Independent of the closed-form bound: the Choi matrix is written as
``chi = L L^dagger`` (complete positivity for free) and the basis-fidelity,
superposition-fidelity and trace-preservation constraints are enforced by an
augmented-Lagrangian penalty with escalating weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .channels import ChoiMatrix, check_unitary, lift_output, max_entangled, n_qubits_of
from .fidelity import basis_operator, superposition_operator
from .matcore import OUT, partial_trace


@dataclass
class OracleConfig:
    rank: int = 16
    restarts: int = 20
    penalty_start: float = 10.0
    penalty_stop: float = 1e6
    penalty_factor: float = 10.0
    max_iters: int = 2000
    polish_stages: int = 10
    tol: float = 1e-11
    seed: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.penalty_factor <= 1.0:
            raise ValueError("penalty_factor must exceed 1")

    def penalty_schedule(self) -> list[float]:
        out, w = [], self.penalty_start
        while w <= self.penalty_stop * (1 + 1e-12):
            out.append(w)
            w *= self.penalty_factor
        return out


@dataclass
class OracleResult:
    best_fchi: float
    achieved_F: float
    achieved_G: float
    constraint_residuals: tuple[float, float, float]
    converged: bool
    restart_values: list[float] = field(default_factory=list)
    choi: ChoiMatrix | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "best_fchi": self.best_fchi,
            "achieved_F": self.achieved_F,
            "achieved_G": self.achieved_G,
            "constraint_residuals": {
                "tp": self.constraint_residuals[0],
                "F": self.constraint_residuals[1],
                "G": self.constraint_residuals[2],
            },
            "converged": self.converged,
            "restart_values": self.restart_values,
        }


class PenaltyProblem:
    """Augmented-Lagrangian objective in the real coordinates of ``L``.

    With zero multipliers this is the plain quadratic-penalty objective
    ``F_chi + (w/2) [(F(chi) - F)^2 + (G(chi) - G)^2 + ||Tr_out chi - I||_F^2]``.
    """

    def __init__(self, u, F: float, G: float, rank: int):
        u = check_unitary(u)
        self.n = n_qubits_of(u)
        self.d = 2**self.n
        self.rank = rank
        self.F, self.G = F, G
        w = lift_output(u)
        v = w @ max_entangled(self.n)
        self.p_target = np.outer(v, v.conj()) / self.d
        self.r_f = w @ basis_operator(self.n) @ w.conj().T
        self.r_g = w @ superposition_operator(self.n) @ w.conj().T
        self.weight = 1.0
        self.lam_f = 0.0
        self.lam_g = 0.0
        self.lam_tp = np.zeros((self.d, self.d), dtype=complex)

    @property
    def size(self) -> int:
        return 2 * self.d * self.d * self.rank

    def unpack(self, theta: np.ndarray) -> np.ndarray:
        half = self.size // 2
        shape = (self.d * self.d, self.rank)
        return theta[:half].reshape(shape) + 1j * theta[half:].reshape(shape)

    @staticmethod
    def pack(l: np.ndarray) -> np.ndarray:
        return np.concatenate([l.real.ravel(), l.imag.ravel()])

    def residuals(self, chi: np.ndarray) -> tuple[float, float, np.ndarray]:
        c_f = np.real(np.vdot(self.r_f, chi)) - self.F
        c_g = np.real(np.vdot(self.r_g, chi)) - self.G
        c_tp = partial_trace(chi, (self.d, self.d), OUT) - np.eye(self.d)
        return c_f, c_g, c_tp

    def value_and_grad(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        l = self.unpack(theta)
        chi = l @ l.conj().T
        c_f, c_g, c_tp = self.residuals(chi)
        mu = self.weight
        value = (
            np.real(np.vdot(self.p_target, chi))
            + self.lam_f * c_f
            + self.lam_g * c_g
            + np.real(np.vdot(self.lam_tp, c_tp))
            + 0.5 * mu * (c_f**2 + c_g**2 + np.linalg.norm(c_tp) ** 2)
        )
        # dvalue/dchi as a Hermitian matrix; gradient in L is 2 H L
        h = (
            self.p_target
            + (self.lam_f + mu * c_f) * self.r_f
            + (self.lam_g + mu * c_g) * self.r_g
            + np.kron(self.lam_tp + mu * c_tp, np.eye(self.d))
        )
        return float(value), self.pack(2.0 * h @ l)

    def update_multipliers(self, chi: np.ndarray) -> None:
        c_f, c_g, c_tp = self.residuals(chi)
        self.lam_f += self.weight * c_f
        self.lam_g += self.weight * c_g
        self.lam_tp = self.lam_tp + self.weight * c_tp


def tp_normalize(mat: np.ndarray, d: int) -> np.ndarray:
    """Conjugate by ``S^{-1/2} (x) I`` so that ``Tr_out`` becomes the identity."""
    s = partial_trace(mat, (d, d), OUT)
    s = 0.5 * (s + s.conj().T)
    w, v = np.linalg.eigh(s)
    if w[0] <= 1e-12 * max(w[-1], 1e-300):
        raise np.linalg.LinAlgError("input marginal is singular")
    k = np.kron((v / np.sqrt(w)) @ v.conj().T, np.eye(d))
    return k @ mat @ k.conj().T


def random_cptp(n: int, rank: int | None = None, seed: int | np.random.Generator = 0) -> ChoiMatrix:
    """Random CPTP map: Gaussian factor ``L L^dagger`` normalised to trace preservation."""
    d = 2**n
    rank = d * d if rank is None else rank
    if rank < 1:
        raise ValueError("rank must be >= 1")
    rng = np.random.default_rng(seed)
    while True:
        l = rng.standard_normal((d * d, rank)) + 1j * rng.standard_normal((d * d, rank))
        try:
            mat = tp_normalize(l @ l.conj().T, d)
        except np.linalg.LinAlgError:
            continue
        return ChoiMatrix(n, mat)


def _single_run(prob: PenaltyProblem, cfg: OracleConfig, rng: np.random.Generator) -> np.ndarray:
    d = prob.d
    l = rng.standard_normal((d * d, prob.rank)) + 1j * rng.standard_normal((d * d, prob.rank))
    # start from a trace-preserving point
    s = partial_trace(l @ l.conj().T, (d, d), OUT)
    w, v = np.linalg.eigh(0.5 * (s + s.conj().T))
    l = np.kron((v / np.sqrt(w)) @ v.conj().T, np.eye(d)) @ l
    theta = prob.pack(l)
    prob.lam_f = prob.lam_g = 0.0
    prob.lam_tp = np.zeros((d, d), dtype=complex)

    def stage(theta):
        res = minimize(
            prob.value_and_grad,
            theta,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "gtol": 1e-13, "ftol": 1e-16, "maxcor": 30},
        )
        chi = prob.unpack(res.x) @ prob.unpack(res.x).conj().T
        prob.update_multipliers(chi)
        return res.x, chi

    schedule = cfg.penalty_schedule()
    for mu in schedule:
        prob.weight = mu
        theta, chi = stage(theta)
    for _ in range(cfg.polish_stages):
        c_f, c_g, c_tp = prob.residuals(chi)
        if max(abs(c_f), abs(c_g), np.linalg.norm(c_tp)) <= cfg.tol:
            break
        theta, chi = stage(theta)
    return chi


def minimize_fchi(u, F: float, G: float, cfg: OracleConfig | None = None) -> OracleResult:
    """Smallest process fidelity found over CPTP maps with the given ``(F, G)``."""
    cfg = OracleConfig() if cfg is None else cfg
    u = check_unitary(u)
    prob = PenaltyProblem(u, F, G, cfg.rank)
    d = prob.d
    root = np.random.default_rng(cfg.seed)
    best = None
    values = []
    for child in root.spawn(cfg.restarts):
        chi = _single_run(prob, cfg, child)
        try:
            chi = tp_normalize(chi, d)
        except np.linalg.LinAlgError:
            continue
        c_f, c_g, c_tp = prob.residuals(chi)
        fchi = float(np.real(np.vdot(prob.p_target, chi)))
        resid = (float(np.linalg.norm(c_tp)), abs(float(c_f)), abs(float(c_g)))
        values.append(fchi)
        ok = max(resid) <= 1e-6
        key = (not ok, fchi)
        if best is None or key < best[0]:
            best = (key, fchi, chi, resid, ok, c_f, c_g)
    if best is None:
        return OracleResult(float("nan"), float("nan"), float("nan"), (np.inf,) * 3, False, values)
    _, fchi, chi, resid, ok, c_f, c_g = best
    return OracleResult(
        fchi,
        float(F + c_f),
        float(G + c_g),
        resid,
        ok,
        values,
        ChoiMatrix(prob.n, chi),
    )
