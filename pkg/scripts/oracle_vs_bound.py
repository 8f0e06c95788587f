"""Compare the numerical minimum of process fidelity with the closed-form bound."""
import argparse

import numpy as np

from fidbound import bound2q, channels
from fidbound.oracle import OracleConfig, minimize_fchi

POINTS = [(0.9, 0.9), (0.95, 0.95), (0.99, 0.95), (0.97, 0.7), (0.999, 0.3)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--restarts", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--gate", default="cnot")
    args = parser.parse_args()

    u = channels.gate_by_name(args.gate)
    cfg = OracleConfig(restarts=args.restarts, seed=args.seed)
    print(f"{'F':>6} {'G':>6} {'bound':>10} {'oracle':>10} {'diff':>10}  converged")
    for f, g in POINTS:
        res = minimize_fchi(u, f, g, cfg)
        b = bound2q.bound(f, g).bound
        print(f"{f:6.3f} {g:6.3f} {b:10.6f} {res.best_fchi:10.6f} {res.best_fchi - b:+10.2e}  {res.converged}")
    spread = np.ptp(res.restart_values)
    print(f"restart spread at last point: {spread:.2e}")


if __name__ == "__main__":
    main()
