"""How the N-qubit bound decays with N at fixed state fidelities."""
import argparse

from fidbound import boundnq


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--F", type=float, default=0.999)
    parser.add_argument("--G", type=float, default=0.999)
    parser.add_argument("--nmax", type=int, default=12)
    args = parser.parse_args()

    ns = range(1, args.nmax + 1)
    print(f"{'N':>3} {'f_th':>10} {'bound':>10} {'Hofmann':>8} {'1-2^(1-N)':>10}")
    for row in boundnq.scaling_table(ns, args.F, args.G):
        print(f"{row.n:3d} {row.f_th:10.6f} {row.bound:10.6f} {row.hofmann:8.4f} {1 - 2.0 ** (1 - row.n):10.6f}")
    first = boundnq.first_vanishing(ns, args.F, args.G)
    print(f"bound vanishes first at N = {first}")


if __name__ == "__main__":
    main()
