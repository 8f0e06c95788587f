"""Write the bound surface over (F, G) and the diagonal F = G comparison with Hofmann.

    python scripts/figure_data.py --outdir results/
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from fidbound import bound2q


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--steps", type=int, default=51)
    args = parser.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    grid = np.linspace(0, 1, args.steps)
    with open(out / "surface.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["F", "G", "bound", "f_th", "hofmann"])
        for f in grid:
            for g in grid:
                r = bound2q.bound(f, g)
                w.writerow([f, g, r.bound, r.f_th, r.hofmann_equiv])

    with open(out / "diagonal.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["F", "bound", "hofmann"])
        for f in np.linspace(0.75, 1.0, 101):
            r = bound2q.bound(f, f)
            w.writerow([f, r.bound, r.hofmann_equiv])

    for f in (0.9, 0.95, 0.99, 0.999):
        r = bound2q.bound(f, f)
        print(f"F = G = {f:<6} bound {r.bound:.6f}   Hofmann {r.hofmann_equiv:.6f}")
    print(f"wrote {out / 'surface.csv'} and {out / 'diagonal.csv'}")


if __name__ == "__main__":
    main()
