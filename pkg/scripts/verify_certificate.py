"""Check the dual certificate over a grid of (F, G) and print the worst deviations."""
import argparse

import numpy as np

from fidbound import bound2q, certificate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=40)
    args = parser.parse_args()

    worst_eig, worst_slack, worst_gap = np.inf, 0.0, 0.0
    for g in np.linspace(0.01, 0.99, args.n):
        th = bound2q.threshold(g)
        margin = min(0.01, (1 - 1e-6 - th) / 2)
        for f in np.linspace(th + margin, 1 - 1e-6, args.n):
            cert = certificate.build_m(f, g)
            worst_eig = min(worst_eig, cert.min_eig())
            worst_slack = max(worst_slack, cert.slackness_norm())
            worst_gap = max(worst_gap, abs(cert.recovered_bound - bound2q.bound(f, g).bound))
    print(f"grid {args.n}x{args.n}")
    print(f"  min eigenvalue of M       {worst_eig:.3e}")
    print(f"  max ||M chi_S||_F         {worst_slack:.3e}")
    print(f"  max |dual value - bound|  {worst_gap:.3e}")


if __name__ == "__main__":
    main()
