"""Exit criteria, one test per criterion; a PASS/FAIL line per criterion is
printed in the pytest terminal summary.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""
import sys
import time
from math import sqrt

import numpy as np
import pytest

from fidbound import bound2q as b2
from fidbound import boundnq as bn
from fidbound import certificate as ce
from fidbound import channels as ch
from fidbound.fidelity import basis_fidelity, measure, process_fidelity, superposition_fidelity
from fidbound.oracle import OracleConfig, PenaltyProblem, minimize_fchi, random_cptp

from conftest import ACCEPTANCE_LINES


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def active_grid(n, g_lo, g_hi, f_hi):
    for g in np.linspace(g_lo, g_hi, n):
        th = b2.threshold(g)
        margin = min(0.01, (f_hi - th) / 2)
        for f in np.linspace(th + margin, f_hi, n):
            yield float(f), float(g)


def test_1_tightness_reproduction():
    t0 = time.perf_counter()
    u = ch.cnot()
    worst_fid = worst_bound = worst_tp = 0.0
    count = 0
    for F, G in active_grid(50, 0.02, 0.98, 1.0):
        chi = b2.extremal_channel(F, G, u)
        worst_tp = max(worst_tp, np.linalg.norm(chi.input_marginal() - np.eye(4)))
        worst_fid = max(worst_fid, abs(basis_fidelity(chi, u) - F), abs(superposition_fidelity(chi, u) - G))
        worst_bound = max(worst_bound, abs(process_fidelity(chi, u) - b2.bound(F, G).bound))
        count += 1
    elapsed = time.perf_counter() - t0
    ok = count == 2500 and worst_fid <= 1e-9 and worst_bound <= 1e-9 and worst_tp <= 1e-9 and elapsed < 30
    record(1, "tightness on 50x50 grid", ok,
           f"max |F,G err| {worst_fid:.1e}, max |F_chi - bound| {worst_bound:.1e}, TP {worst_tp:.1e}, {elapsed:.1f}s")


def test_2_dual_certificate_suite():
    t0 = time.perf_counter()
    w = dict(min_eig=np.inf, slack=0.0, system=0.0, ab=0.0, cd=0.0, recovered=0.0)
    for F, G in active_grid(40, 0.01, 0.99, 1 - 1e-6):
        cert = ce.build_m(F, G)
        s = ce.analytic_eigenvalues(cert.x, cert.w, cert.y, cert.z)
        w["min_eig"] = min(w["min_eig"], cert.min_eig())
        w["slack"] = max(w["slack"], cert.slackness_norm())
        w["system"] = max(w["system"], float(np.max(np.abs(ce.slackness_residuals(F, G, ce.Multipliers(cert.x, cert.w, cert.y, cert.z))))))
        w["ab"] = max(w["ab"], abs(s.A**2 - s.B) / abs(s.B))
        w["cd"] = max(w["cd"], abs(s.C**2 - s.D) / abs(s.D))
        w["recovered"] = max(w["recovered"], abs(cert.recovered_bound - b2.bound(F, G).bound))
    elapsed = time.perf_counter() - t0
    ok = (
        w["min_eig"] >= -1e-9
        and w["slack"] <= 1e-9
        and w["system"] <= 1e-9
        and w["ab"] <= 1e-8
        and w["cd"] <= 1e-8
        and w["recovered"] <= 1e-9
        and elapsed < 60
    )
    record(2, "dual certificate on 40x40 grid", ok,
           ", ".join(f"{k} {v:.1e}" for k, v in w.items()) + f", {elapsed:.1f}s")


def test_3_paper_point_values():
    u = ch.cnot()
    exact = b2.bound(1, 1).bound == 1.0
    cnot_id = process_fidelity(ch.choi_from_unitary(np.eye(4)), u)
    triples = {}
    for kind in ("FlipX", "FlipZ", "FlipZX"):
        chi = b2.boundary_channel(kind, u)
        triples[kind] = (basis_fidelity(chi, u), superposition_fidelity(chi, u), process_fidelity(chi, u))
    expected = {"FlipX": (0, 1, 0), "FlipZ": (1, 0, 0), "FlipZX": (0, 0, 0)}
    tri_err = max(abs(a - b) for k in expected for a, b in zip(triples[k], expected[k]))
    ok = exact and abs(cnot_id - 0.25) <= 1e-12 and tri_err <= 1e-12
    record(3, "paper point values", ok,
           f"bound(1,1)={b2.bound(1, 1).bound!r}, CNOT vs I={cnot_id:.15f}, boundary triples err {tri_err:.1e}")


def test_4_lower_bound_validity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2013)
    worst = np.inf
    active = 0
    for _ in range(1000):
        u = ch.haar_unitary(2, rng)
        noise = random_cptp(2, rank=int(rng.integers(1, 17)), seed=rng)
        # bias toward the target so a good share of samples lands above threshold
        chi = ch.mix(float(rng.uniform() ** 3), ch.choi_from_unitary(u), noise)
        pair = measure(chi, u)
        F, G = (min(max(v, 0.0), 1.0) for v in (pair.f_basis, pair.g_super))
        rep = b2.bound(F, G)
        if rep.regime is b2.Regime.ACTIVE:
            active += 1
        worst = min(worst, process_fidelity(chi, u) - rep.bound)
    oracle_lines = []
    oracle_ok = True
    for F, G in [(0.9, 0.9), (0.95, 0.95), (0.99, 0.95)]:
        res = minimize_fchi(ch.cnot(), F, G, OracleConfig(seed=17))
        bound = b2.bound(F, G).bound
        inside = res.converged and bound - 1e-9 <= res.best_fchi <= bound + 5e-3
        oracle_ok &= inside
        oracle_lines.append(f"({F},{G}): oracle-bound {res.best_fchi - bound:+.1e}")
    elapsed = time.perf_counter() - t0
    ok = worst >= -1e-9 and oracle_ok and elapsed < 300
    record(4, "lower-bound validity and oracle", ok,
           f"min(F_chi - bound) over 1000 maps ({active} active) {worst:.2e}; " + "; ".join(oracle_lines) + f"; {elapsed:.1f}s")


def test_5_hofmann_comparison():
    worst = -np.inf
    for F in np.linspace(0.75, 1.0, 251):
        worst = max(worst, b2.bound(F, F).bound - max(2 * F - 1, 0.0))
    gap = 0.9 - b2.bound(0.95, 0.95).bound
    eps = delta = 1e-3
    lin = abs(b2.bound(1 - eps, 1 - delta).bound - (1 - 4 * eps - delta - 2 * sqrt(3) * sqrt(eps * delta)))
    ok = worst <= 1e-12 and gap >= 0.25 and lin <= 1e-2
    record(5, "Hofmann comparison", ok,
           f"max(bound - Hofmann) {worst:.2e}, gap at 0.95 = {gap:.6f}, linearization err {lin:.2e}")


def test_6_n_qubit_consistency():
    err = 0.0
    for G in np.linspace(0, 1, 51):
        closed = (5 - G + sqrt(9 - 10 * G + G * G)) / 8
        err = max(err, abs(bn.nq_threshold(2, G) - b2.threshold(G)), abs(bn.nq_threshold(2, G) - closed))
        for F in np.linspace(0, 1, 51):
            err = max(err, abs(bn.nq_bound(2, F, G).bound - b2.bound(F, G).bound))
    u = ch.toffoli()
    chi = bn.nq_extremal_channel(3, 0.99, 0.95, u)
    n3 = abs(process_fidelity(chi, u) - bn.nq_bound(3, 0.99, 0.95).bound)
    rows = bn.scaling_table(range(2, 9), 0.999, 0.999)
    decreasing = bool(np.all(np.diff([r.bound for r in rows]) < 0))
    constant = len({r.hofmann for r in rows}) == 1
    ok = err <= 1e-12 and n3 <= 1e-8 and decreasing and constant
    record(6, "N-qubit consistency", ok,
           f"N=2 reduction err {err:.1e}, N=3 channel err {n3:.1e}, decreasing={decreasing}, constant Hofmann={constant}")


def test_7_oracle_hygiene():
    rng = np.random.default_rng(7)
    prob = PenaltyProblem(ch.haar_unitary(2, rng), 0.9, 0.9, rank=16)
    prob.weight = 100.0
    worst = 0.0
    for _ in range(10):
        theta = rng.standard_normal(prob.size) * 0.3
        _, grad = prob.value_and_grad(theta)
        idx = rng.choice(prob.size, size=40, replace=False)
        fd = np.empty(idx.size)
        for k, i in enumerate(idx):
            e = np.zeros(prob.size)
            e[i] = 1e-5
            fd[k] = (prob.value_and_grad(theta + e)[0] - prob.value_and_grad(theta - e)[0]) / 2e-5
        worst = max(worst, np.linalg.norm(grad[idx] - fd) / np.linalg.norm(fd))
    cfg = OracleConfig(restarts=2, seed=99)
    r1, r2 = minimize_fchi(ch.cnot(), 0.93, 0.9, cfg), minimize_fchi(ch.cnot(), 0.93, 0.9, cfg)
    same = r1.to_dict() == r2.to_dict()
    ok = worst <= 1e-4 and same
    record(7, "oracle hygiene", ok, f"gradient rel err {worst:.1e}, deterministic={same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
