"""Command-line entry point: ``qreading {bounds,sweep,figure,verify}``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .discrimination import bound_report
from .errors import QReadingError
from .experiments import FIGURES, load_config, reproduce_figure, run_sweep, write_outputs
from .metrics import info_report
from .scenario import ReadoutScenario
from .states import TransmitterSpec
from .verification import verify


def _transmitter(args) -> TransmitterSpec:
    kind = args.transmitter
    if kind in ("mandm", "noon"):
        if args.m is None:
            raise ValueError(f"--transmitter {kind} needs --m")
        if kind == "noon":
            return TransmitterSpec.noon(args.m)
        m_prime = args.m_prime
        if m_prime is None:
            if args.N_S is None:
                raise ValueError("give --m-prime or --N-S")
            m_prime = 2.0 * args.N_S - args.m
            if m_prime != int(m_prime):
                raise ValueError(f"2*N_S - m = {m_prime} is not an integer")
        return TransmitterSpec.mandm(args.m, int(m_prime))
    if kind == "psi":
        if args.alpha is not None:
            return TransmitterSpec.photon_coherent(args.alpha)
        if args.N_S is None:
            raise ValueError("--transmitter psi needs --alpha or --N-S")
        return TransmitterSpec.photon_coherent_for_intensity(args.N_S)
    return TransmitterSpec.single_fock()


def cmd_bounds(args) -> int:
    spec = _transmitter(args)
    n_s = spec.signal_intensity if args.N_S is None else args.N_S
    scenario = ReadoutScenario(args.M, n_s, args.N_B)
    report = bound_report(scenario, spec, method=args.method, with_helstrom=args.helstrom)
    info = info_report(scenario, spec, method=args.method)
    lines = [
        f"transmitter={spec.label}",
        f"M={scenario.M}",
        f"N_S={scenario.N_S:.12g}",
        f"N_B={scenario.N_B:.12g}",
        *report.as_lines(),
        f"J_min_quantum={info.j_min_quantum:.12g}",
        f"J_max_classical={info.j_max_classical:.12g}",
        f"gain={info.gain:.12g}",
    ]
    print("\n".join(lines))
    return 0


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    if args.out_dir is not None:
        config = replace(config, out_dir=Path(args.out_dir))
    for path in write_outputs(config, run_sweep(config)):
        print(path)
    return 0


def cmd_figure(args) -> int:
    for path in reproduce_figure(args.id, out_dir=args.out_dir, svg=args.svg, M_stop=args.M_stop):
        print(path)
    return 0


def cmd_verify(args) -> int:
    status, report = verify(args.report)
    print(report.to_text(), end="")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qreading",
        description="Error bounds and information yield for reading an optical memory cell.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="bounds for one scenario as key=value lines")
    b.add_argument("--transmitter", choices=["mandm", "noon", "psi", "fock"], default="mandm")
    b.add_argument("--m", type=int)
    b.add_argument("--m-prime", dest="m_prime", type=int)
    b.add_argument("--alpha", type=complex)
    b.add_argument("--M", type=int, default=1, help="number of copies")
    b.add_argument("--N-S", dest="N_S", type=float, help="signal intensity (derived if omitted)")
    b.add_argument("--N-B", dest="N_B", type=float, default=0.0, help="thermal noise photons")
    b.add_argument("--method", choices=["pure", "numeric"], default="pure")
    b.add_argument("--helstrom", action="store_true", help="add the exact error (M <= 2)")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sweep", help="run a sweep described by an INI config file")
    s.add_argument("config")
    s.add_argument("--out-dir", dest="out_dir")
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("figure", help="regenerate one figure's data")
    f.add_argument("id", choices=sorted(FIGURES))
    f.add_argument("--svg", action="store_true")
    f.add_argument("--out-dir", dest="out_dir")
    f.add_argument("--M-stop", dest="M_stop", type=int)
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="run the oracle self-checks")
    v.add_argument("--report", help="write the report to this path")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QReadingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
