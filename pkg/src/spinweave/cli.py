"""Command-line interface: ``spinweave run|preset|reduce|check|peaks``.

Exit codes: 0 success, 1 usage or parse error, 2 numerical-validity failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .couplings import effective_chain
from .errors import NumericalValidityError, SpinweaveError
from .network import network_from_text
from .observables import find_peaks
from .oracle import cross_check, validation_networks
from .scenarios import PRESETS, PRESET_GROUPS, ResultTable, parse_scenario, preset_group, preset_names, run_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

ORACLE_TOL = 1e-10
LEAKAGE_TOL = 1e-20


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(table: ResultTable, out: str | None) -> None:
    if out:
        table.write_csv(out)
        print(f"wrote {len(table.times)} rows to {out}", file=sys.stderr)
    else:
        sys.stdout.write(table.to_csv_text())


def cmd_run(args) -> int:
    text = Path(args.scenario).read_text()
    scenario = parse_scenario(text, name=Path(args.scenario).stem)
    _emit(run_scenario(scenario), args.out or scenario.output)
    return EXIT_OK


def cmd_preset(args) -> int:
    scenarios = preset_group(args.name)
    if not args.run:
        for i, s in enumerate(scenarios):
            if len(scenarios) > 1:
                print(f"# ---- preset {s.name} ----")
            sys.stdout.write(PRESETS[s.name])
            if i < len(scenarios) - 1:
                print()
        return EXIT_OK
    for s in scenarios:
        out = args.out
        if out and len(scenarios) > 1:
            p = Path(out)
            out = str(p.with_name(f"{p.stem}_{s.name}{p.suffix or '.csv'}"))
        _emit(run_scenario(s), out)
    return EXIT_OK


def cmd_reduce(args) -> int:
    net = network_from_text(Path(args.network).read_text())
    chain = effective_chain(net)
    print(chain.length)
    for J in chain.couplings:
        print(format(J, ".17g"))
    return EXIT_OK


def cmd_check(args) -> int:
    nets = validation_networks(args.max_n)
    worst_dev = worst_leak = 0.0
    print(f"{'network':<20} {'N':>3} {'max |dc|':>12} {'leakage':>12}")
    for r in cross_check(nets, n_times=args.times):
        print(f"{r.name:<20} {r.n_sites:>3} {r.max_deviation:12.3e} {r.max_leakage:12.3e}")
        worst_dev = max(worst_dev, r.max_deviation)
        worst_leak = max(worst_leak, r.max_leakage)
    ok = worst_dev <= ORACLE_TOL and worst_leak < LEAKAGE_TOL
    print(f"max deviation {worst_dev:.3e} (tol {ORACLE_TOL:g}), max leakage {worst_leak:.3e}: "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_NUMERICAL


def cmd_peaks(args) -> int:
    table = ResultTable.read_csv(args.results)
    try:
        values = table.column(args.column)
    except KeyError as exc:
        raise SpinweaveError(str(exc.args[0])) from None
    print("time,value,fwhm")
    for p in find_peaks(table.times, values, args.threshold):
        print(f"{p.time:.17g},{p.value:.17g},{p.fwhm:.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinweave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a scenario config and write CSV")
    p.add_argument("scenario")
    p.add_argument("--out", help="CSV path (default: [run] output, else stdout)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("preset", help="print or run a named preset")
    p.add_argument("name", choices=preset_names(), metavar="name",
                   help=", ".join(sorted(PRESET_GROUPS)) + " (and their members)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--print", action="store_true", help="print the scenario text (default)")
    mode.add_argument("--run", action="store_true", help="run it and emit CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("reduce", help="print the equivalent 1D chain of a network file")
    p.add_argument("network")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("check", help="cross-check subspace and full-space engines")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--times", type=int, default=20)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("peaks", help="list revival peaks in a CSV column")
    p.add_argument("results")
    p.add_argument("--column", required=True)
    p.add_argument("--threshold", type=float, default=0.99)
    p.set_defaults(func=cmd_peaks)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalValidityError as exc:
        print(f"spinweave: numerical validity failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SpinweaveError, OSError) as exc:
        print(f"spinweave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
