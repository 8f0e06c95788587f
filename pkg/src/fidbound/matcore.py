"""Dense complex matrix utilities.

Matrices are plain ``numpy`` arrays of ``complex128``.  Composite systems are
ordered input-first, and within a register qubit 1 is the most significant
(leftmost) factor.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12

IN = "in"
OUT = "out"


class EigResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_cmat(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def hermitian_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation ``max |M - M^dagger|``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``m`` as a complex matrix, checked to be Hermitian within ``tol``."""
    a = as_cmat(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"Hermitian matrix must be square, got {a.shape}")
    defect = hermitian_defect(a)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (max |M - M^dagger| = {defect:.3e})")
    return a


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(m, dims: tuple[int, int], subsystem: str) -> np.ndarray:
    """Trace out ``subsystem`` ("in" or "out") of a bipartite operator.

    ``dims = (d_in, d_out)``; the input factor is the left one.
    """
    d_in, d_out = dims
    a = as_cmat(m)
    if a.shape != (d_in * d_out, d_in * d_out):
        raise ValueError(f"matrix of shape {a.shape} does not match dims {dims}")
    t = a.reshape(d_in, d_out, d_in, d_out)
    if subsystem == IN:
        return np.einsum("iaib->ab", t)
    if subsystem == OUT:
        return np.einsum("iaja->ij", t)
    raise ValueError(f"subsystem must be {IN!r} or {OUT!r}, got {subsystem!r}")


def _jacobi_eigh(a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100) -> EigResult:
    # Cyclic complex Jacobi: each rotation zeroes a[p, q] by a unitary acting
    # on rows/columns p, q.
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return EigResult(np.zeros(n), v)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # columns p, q of the rotation: [c, -s*conj(phase)]; [s*phase, c]
                jp = c
                jq = s * phase
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = jp * col_p - np.conj(jq) * col_q
                a[:, q] = jq * col_p + jp * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = jp * row_p - jq * row_q
                a[q, :] = np.conj(jq) * row_p + jp * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = jp * vp - np.conj(jq) * vq
                v[:, q] = jq * vp + jp * vq
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return EigResult(w[order], v[:, order])


def eigh(m, method: str = "lapack", tol: float = HERMITIAN_TOL) -> EigResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    ``method="jacobi"`` runs a cyclic Jacobi sweep (sizes up to ~64);
    ``method="lapack"`` defers to ``numpy.linalg.eigh``.
    """
    a = hermitian(m, tol=tol)
    a = 0.5 * (a + a.conj().T)
    if method == "jacobi":
        return _jacobi_eigh(a)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
        return EigResult(w, v)
    raise ValueError(f"unknown eigensolver {method!r}")


def min_eigenvalue(m) -> float:
    return float(eigh(m, tol=1e-9).eigenvalues[0])


def ket(bits: str) -> np.ndarray:
    """Computational-basis column vector, e.g. ``ket("01")``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def proj(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def to_json(m) -> dict:
    a = as_cmat(m)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except KeyError as exc:
        raise ValueError(f"matrix JSON is missing field {exc}") from None
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise ValueError(f"matrix JSON has {len(entries)} entries for a {rows}x{cols} matrix")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return flat.reshape(rows, cols)
