"""Command line driver.

One-shot commands run against a ring context taken from a scenario file
(or a builtin scenario name); `scenario run` executes a scenario's own
command list.  Exit codes: 0 = ran, 1 = parse/configuration error,
2 = internal inconsistency detected between methods.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from .ring import DegreeCapExceeded, ParseError
from .scenario import (
    Options,
    Report,
    ScenarioError,
    build_context,
    parse_scenario,
    run_command,
    run_scenario,
)

BUILTIN_NAMES = (
    "example61",
    "example62",
    "singh",
    "twoplane",
    "cusp",
    "nonreduced",
    "explore_p1",
)

COMMANDS = (
    "gb", "nf", "dim", "depth", "fclosure", "limclosure", "isfclosed",
    "fedder", "finj", "finj-evidence", "reduced", "profile", "standard",
    "buchsbaum", "pfc", "unmixed", "explore-p1",
)


def builtin_scenarios():
    """Name -> scenario text for every shipped scenario file."""
    out = {}
    root = resources.files("fpsing.scenarios")
    for name in BUILTIN_NAMES:
        out[name] = (root / f"{name}.fcl").read_text()
    return out


def load_scenario(name_or_path):
    """Accept a builtin name or a file path."""
    builtins = builtin_scenarios()
    if name_or_path in builtins:
        return parse_scenario(builtins[name_or_path])
    try:
        with open(name_or_path) as fh:
            text = fh.read()
    except OSError as ex:
        raise ScenarioError(f"cannot read scenario {name_or_path!r}: {ex}")
    return parse_scenario(text)


def make_parser():
    parser = argparse.ArgumentParser(
        prog="fpsing",
        description="Characteristic-p singularity checks for local rings "
                    "presented as F_p[x..]/J at the origin.")
    parser.add_argument("command",
                        help="one of: scenario, " + ", ".join(COMMANDS))
    parser.add_argument("target", nargs="?",
                        help="scenario name/path (or 'run' for the "
                             "scenario command)")
    parser.add_argument("args", nargs="*",
                        help="command arguments (ideal/polynomial names)")
    parser.add_argument("--p", type=int, default=None,
                        help="override the scenario characteristic")
    parser.add_argument("--emax", type=int, default=4)
    parser.add_argument("--nmax", type=int, default=6)
    parser.add_argument("--window", type=int, default=2)
    parser.add_argument("--samples", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--degcap", type=int, default=256)
    parser.add_argument("--format", choices=("text", "json"),
                        default="text")
    parser.add_argument("--verify-witnesses", action="store_true")
    return parser


def main(argv=None):
    parser = make_parser()
    ns = parser.parse_args(argv)
    opts = Options(e_max=ns.emax, n_max=ns.nmax, window=ns.window,
                   samples=ns.samples, seed=ns.seed,
                   verify_witnesses=ns.verify_witnesses)
    try:
        if ns.command == "scenario":
            if ns.target != "run" or not ns.args:
                print("usage: fpsing scenario run <name|path>",
                      file=sys.stderr)
                return 1
            sc = load_scenario(ns.args[0])
            report = run_scenario(sc, opts, p=ns.p, degcap=ns.degcap)
        elif ns.command in COMMANDS:
            if ns.target is None:
                print("a scenario name or path is required to supply the "
                      "ring", file=sys.stderr)
                return 1
            sc = load_scenario(ns.target)
            ctx = build_context(sc, p=ns.p, degcap=ns.degcap)
            report = Report()
            report.add(run_command(ctx, ns.command, ns.args, opts))
        else:
            print(f"unknown command {ns.command!r}", file=sys.stderr)
            return 1
    except (ScenarioError, ParseError, DegreeCapExceeded) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    if ns.format == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    if report.has_inconsistency():
        print("internal inconsistency detected between methods",
              file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
