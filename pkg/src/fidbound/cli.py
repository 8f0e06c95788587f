"""Command-line interface: ``fidbound <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import boundnq, bound2q, certificate, channels, fidelity, matcore, oracle

EXIT_INPUT = 2
EXIT_NUMERIC = 3


class NumericalFailure(RuntimeError):
    pass


def load_gate(spec: str, n: int = 2) -> np.ndarray:
    """Builtin gate name, ``random:<seed>``, or a JSON file holding a unitary or a unitary Choi matrix."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        try:
            obj = json.loads(path.read_text())
        except OSError as exc:
            raise ValueError(f"cannot read gate file {spec}: {exc}") from None
        if "n_qubits" in obj:
            return channels.unitary_from_choi(channels.ChoiMatrix.from_json(obj))
        return channels.check_unitary(matcore.from_json(obj))
    return channels.gate_by_name(spec, n)


def _emit_json(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str | None, header: list[str], rows) -> None:
    if path:
        try:
            fh = open(path, "w", newline="")
        except OSError as exc:
            raise ValueError(f"cannot write {path}: {exc}") from None
    else:
        fh = sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _report(n: int, F: float, G: float) -> bound2q.BoundReport:
    return bound2q.bound(F, G) if n == 2 else boundnq.nq_bound(n, F, G)


def cmd_bound(args) -> int:
    if args.choi:
        chi = channels.ChoiMatrix.from_json(json.loads(Path(args.choi).read_text()))
        u = load_gate(args.gate, chi.n_qubits)
        pair = fidelity.measure(chi, u)
        F, G = min(max(pair.f_basis, 0.0), 1.0), min(max(pair.g_super, 0.0), 1.0)
        out = _report(chi.n_qubits, F, G).to_dict()
        out["true_fchi"] = fidelity.process_fidelity(chi, u)
    else:
        if args.F is None or args.G is None:
            raise ValueError("bound needs --F and --G, or --choi")
        out = _report(args.N, args.F, args.G).to_dict()
    _emit_json(out, args.out)
    return 0


def _frange(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
        raise ValueError("sweep ranges must lie within [0, 1]")
    return np.linspace(lo, hi, steps)


GNUPLOT_TEMPLATE = """set datafile separator ','
set key autotitle columnhead
set xlabel 'F'
set ylabel 'process fidelity'
{body}
"""


def cmd_sweep(args) -> int:
    fs = _frange(*args.f_range, int(args.f_steps))
    if args.diagonal:
        pairs = [(f, f) for f in fs]
    else:
        gs = _frange(*args.g_range, int(args.g_steps))
        pairs = [(f, g) for f in fs for g in gs]
    rows = []
    for f, g in pairs:
        f, g = float(f), float(g)
        rep = _report(args.N, f, g)
        rows.append((f, g, rep.bound, rep.f_th, rep.hofmann_equiv))
    _write_csv(args.out, ["F", "G", "bound", "f_th", "hofmann"], rows)
    if args.gnuplot:
        if not args.out:
            raise ValueError("--gnuplot needs --out")
        if args.diagonal:
            body = f"plot '{args.out}' using 1:3 with lines title 'bound', '' using 1:5 with lines dt 2 title 'Hofmann'"
        else:
            body = (
                "set ylabel 'G'\nset zlabel 'bound'\nset dgrid3d "
                f"{int(args.f_steps)},{int(args.g_steps)}\nsplot '{args.out}' using 1:2:3 with pm3d title 'bound'"
            )
        Path(args.out).with_suffix(".gp").write_text(GNUPLOT_TEMPLATE.format(body=body))
    return 0


def cmd_extremal(args) -> int:
    u = load_gate(args.gate, args.N)
    if args.N == 2:
        chi = bound2q.extremal_channel(args.F, args.G, u)
    else:
        chi = boundnq.nq_extremal_channel(args.N, args.F, args.G, u)
    _emit_json(chi.to_json(), args.out)
    return 0


def cmd_certificate(args) -> int:
    cert = certificate.build_m(args.F, args.G)
    report = cert.report()
    _emit_json(report, args.out)
    failed = (
        report["min_eig"] < -1e-9
        or report["slackness_norm"] > 1e-9
        or abs(report["bound_recovered"] - report["bound"]) > 1e-9
    )
    if failed:
        raise NumericalFailure("certificate invariants violated")
    return 0


def cmd_simulate(args) -> int:
    if not 0.0 <= args.p <= 1.0:
        raise ValueError(f"noise strength {args.p} lies outside [0, 1]")
    u = load_gate(args.gate, args.N)
    n = channels.n_qubits_of(u)
    chi = channels.depolarizing(n, args.p, u)
    pair = fidelity.measure(chi, u)
    F, G = min(max(pair.f_basis, 0.0), 1.0), min(max(pair.g_super, 0.0), 1.0)
    rep = _report(n, F, G)
    true_fchi = fidelity.process_fidelity(chi, u)
    _emit_json(
        {
            "F": F,
            "G": G,
            "bound": rep.bound,
            "regime": rep.regime.value,
            "hofmann_FG": rep.hofmann_equiv,
            "true_fchi": true_fchi,
            "gap": true_fchi - rep.bound,
        },
        args.out,
    )
    return 0


def parse_n_range(text: str) -> list[int]:
    """``"2..8"`` or ``"2,3,5"``."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split(".."))
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad qubit range {text!r}") from None


def cmd_scaling(args) -> int:
    rows = boundnq.scaling_table(args.n, args.F, args.G)
    _write_csv(args.out, ["N", "f_th", "bound", "hofmann"], [(r.n, r.f_th, r.bound, r.hofmann) for r in rows])
    return 0


def cmd_oracle(args) -> int:
    u = load_gate(args.unitary, 2)
    cfg = oracle.OracleConfig(restarts=args.restarts, seed=args.seed, rank=args.rank)
    res = oracle.minimize_fchi(u, args.F, args.G, cfg)
    out = res.to_dict()
    out["bound"] = bound2q.bound(args.F, args.G).bound
    _emit_json(out, args.out)
    if not res.converged:
        raise NumericalFailure("oracle did not converge")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fidbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fg=True, need_fg=True, n=True):
        if fg:
            p.add_argument("--F", type=float, required=need_fg, help="average computational-basis fidelity")
            p.add_argument("--G", type=float, required=need_fg, help="superposition-state fidelity")
        if n:
            p.add_argument("--N", type=int, default=2, help="number of qubits (default 2)")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bound", help="evaluate the process-fidelity bound")
    common(p, need_fg=False)
    p.add_argument("--choi", help="measure F and G from a Choi JSON file instead")
    p.add_argument("--gate", default="cnot", help="target gate when --choi is given")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="tabulate the bound over a grid or the diagonal F = G")
    common(p, fg=False)
    p.add_argument("--f-range", nargs=2, type=float, default=(0.0, 1.0), metavar=("MIN", "MAX"))
    p.add_argument("--f-steps", type=int, default=51)
    p.add_argument("--g-range", nargs=2, type=float, default=(0.0, 1.0), metavar=("MIN", "MAX"))
    p.add_argument("--g-steps", type=int, default=51)
    p.add_argument("--diagonal", action="store_true", help="sweep G = F only")
    p.add_argument("--gnuplot", action="store_true", help="also write a .gp plot script next to --out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("extremal", help="write the extremal channel as Choi JSON")
    common(p)
    p.add_argument("--gate", default="cnot")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("certificate", help="build and check the dual certificate")
    common(p, n=False)
    p.set_defaults(func=cmd_certificate)

    p = sub.add_parser("simulate", help="depolarized gate: measured fidelities against the bound")
    common(p, fg=False)
    p.add_argument("--gate", default="cnot")
    p.add_argument("--p", type=float, default=0.0, help="depolarizing strength")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scaling", help="N-qubit threshold and bound table as CSV")
    common(p, n=False)
    p.add_argument("--n", type=parse_n_range, default=list(range(2, 9)), help="qubit range, e.g. 2..8")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("oracle", help="numerically minimize process fidelity at fixed (F, G)")
    common(p, n=False)
    p.add_argument("--unitary", default="cnot")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--rank", type=int, default=16)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
