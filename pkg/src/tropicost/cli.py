"""Command-line entry point: ``tropicost SUBCOMMAND ...``.

A failed check exits with status 1; usage and input errors exit with 2.
``--json`` replaces the human output with a single JSON report.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field

from .galois import (
    LatticeError,
    check_closure,
    check_linear_galois,
    check_residuated_pair,
    even_interval_lift,
    find_additivity_counterexample,
    lift_from_lattice_file,
)
from .harness import run_verification
from .longrun import cycle_means_oracle, long_run_cost
from .oracle import WalkBudgetExceeded
from .partition import best_abstract_system, find_abstraction_violation, lift_for_system, parse_partition
from .semantics import ParseError, TransitionSystem, global_cost, parse_system, serialize_system

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class AnalysisReport:
    subcommand: str
    inputs: dict[str, str] = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    duration: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "values": self.values,
            "verdicts": self.verdicts,
            "counterexamples": self.counterexamples,
            "duration": self.duration,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls(**json.loads(text))


def _read(path: str, report: AnalysisReport) -> str:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    report.inputs[path] = hashlib.sha256(data).hexdigest()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        raise UsageError(f"{path} is not UTF-8 text") from None


def _load(path: str, report: AnalysisReport, merge: bool = False) -> TransitionSystem:
    text = _read(path, report)
    try:
        return parse_system(text, merge_edges=merge)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


# subcommands ------------------------------------------------------------------


def cmd_global(args, report: AnalysisReport, out: list[str]):
    P = _load(args.system, report, args.merge_edges)
    gc = P.dioid.format(global_cost(P))
    report.values["gc"] = gc
    out.append(f"gc = {gc}")


def cmd_longrun(args, report: AnalysisReport, out: list[str]):
    P = _load(args.system, report, args.merge_edges)
    d = P.dioid
    rho = long_run_cost(P)
    report.values["rho"] = d.format(rho)
    out.append(f"rho = {d.format(rho)}")
    if args.oracle:
        oracle = cycle_means_oracle(P)
        report.values["rho_oracle"] = d.format(oracle)
        agree = d.eq(rho, oracle)
        report.verdicts["oracle_agrees"] = agree
        out.append(f"oracle = {d.format(oracle)} ({'agrees' if agree else 'DISAGREES'})")


def cmd_abstract(args, report: AnalysisReport, out: list[str]):
    P = _load(args.system, report, args.merge_edges)
    try:
        alpha = parse_partition(_read(args.partition, report))
        L = lift_for_system(P, alpha)
    except ParseError as exc:
        raise UsageError(f"{args.partition}: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    Pa = _load(args.against, report) if args.against else best_abstract_system(P, L)
    if args.against and set(Pa.states) != set(L.abstract):
        raise UsageError("abstract system states do not match the partition blocks")
    if Pa.dioid != P.dioid:
        raise UsageError(f"dioid mismatch: {P.dioid.name} against {Pa.dioid.name}")
    if args.against:
        order = [Pa.states.index(a) for a in L.abstract]
        Pa = TransitionSystem(L.abstract, Pa.matrix.submatrix(order), Pa.init, Pa.final)
    d = P.dioid
    report.values["abstract_system"] = serialize_system(Pa)
    out.append(serialize_system(Pa).rstrip("\n"))
    if args.check:
        bad = find_abstraction_violation(P, Pa, L)
        report.verdicts["correct_abstraction"] = bad is None
        if bad is None:
            out.append("correct abstraction: yes")
        else:
            report.counterexamples.append(bad)
            out.append(f"correct abstraction: NO ({bad})")
    if args.global_cost:
        gc, gca = global_cost(P), global_cost(Pa)
        report.values.update(gc=d.format(gc), gc_abstract=d.format(gca))
        report.verdicts["gc_over_approximated"] = d.leq(gc, gca)
        out.append(f"gc = {d.format(gc)}")
        out.append(f"gc# = {d.format(gca)}")
    if args.longrun:
        rho, rhoa = long_run_cost(P), long_run_cost(Pa)
        report.values.update(rho=d.format(rho), rho_abstract=d.format(rhoa))
        if d.selective:
            report.verdicts["rho_over_approximated"] = d.leq(rho, rhoa)
        out.append(f"rho = {d.format(rho)}")
        out.append(f"rho# = {d.format(rhoa)}")


def cmd_galois(args, report: AnalysisReport, out: list[str]):
    if args.source == "even-intervals":
        if args.n is None:
            raise UsageError("even-intervals needs --n")
        try:
            G = even_interval_lift(args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        report.values["lattice"] = f"even-intervals n={args.n}"
    else:
        try:
            G = lift_from_lattice_file(_read(args.source, report))
        except (ParseError, LatticeError) as exc:
            raise UsageError(f"{args.source}: {exc}") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    report.values["alpha1"] = G.alpha_pattern()
    report.values["dimensions"] = [len(G.basis), len(G.concrete.atoms)]
    if args.show_matrix or not args.verify:
        out.append(G.render())
    if args.verify:
        try:
            checks = {
                "galois_laws": check_linear_galois(G),
                "pi_closure": check_closure(G),
                "residuated_pair": check_residuated_pair(G),
            }
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for name, rep in checks.items():
            report.verdicts[name] = rep.ok
            out.append(f"{name}: {'pass' if rep.ok else 'FAIL'}")
            for law, witness in rep.witnesses.items():
                report.counterexamples.append(f"{name}: {law} at {witness}")
                out.append(f"  {law} fails at {witness}")
        linear = find_additivity_counterexample(G) is None
        report.values["pi_alpha1_additive"] = linear
        out.append(f"pi.alpha1 additive: {'yes' if linear else 'no'}")


def cmd_verify(args, report: AnalysisReport, out: list[str]):
    universe = tuple(args.universe.split(",")) if args.universe else ("x", "y", "z")
    if args.states < 1 or args.trials < 0:
        raise UsageError("--states must be positive and --trials nonnegative")
    try:
        res = run_verification(args.dioid, args.states, args.trials, args.seed, lemmas=args.lemmas, universe=universe)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = res.as_dict()
    report.values.update(dioid=data["dioid"], trials=data["trials"], seed=data["seed"], checks=data["checks"])
    if data["explored"]:
        report.values["explored"] = data["explored"]
    for name, tally in res.checks.items():
        report.verdicts[name] = tally.failed == 0
    report.counterexamples.extend(data["counterexamples"])
    out.append(f"dioid {data['dioid']}, {args.trials} trials, seed {args.seed}")
    for name, t in sorted(res.checks.items()):
        extra = f", {t.skipped} skipped" if t.skipped else ""
        out.append(f"  {name}: {t.passed}/{t.passed + t.failed} passed{extra}")
    for name, t in sorted(res.explored.items()):
        out.append(f"  (explored) {name}: {t.passed} held, {t.failed} violated")
    for cx in data["counterexamples"]:
        out.append(f"counterexample for {cx['check']} (trial {cx['trial']}):")
        out.append(cx["system"].rstrip("\n"))


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropicost", description="Cost analysis of weighted transition systems over dioids.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="print a JSON report")
        p.set_defaults(func=func)
        return p

    def add_system(p):
        p.add_argument("system")
        p.add_argument("--merge-edges", action="store_true", help="combine repeated edges with oplus")

    p = add("global", cmd_global, "global cost of a system")
    add_system(p)

    p = add("longrun", cmd_longrun, "long-run cost of a system")
    add_system(p)
    p.add_argument("--oracle", action="store_true", help="cross-check against closed-walk enumeration")

    p = add("abstract", cmd_abstract, "abstract a system through a state partition")
    add_system(p)
    p.add_argument("--partition", required=True, help="file of 'map STATE -> BLOCK' lines")
    p.add_argument("--against", help="abstract system to check instead of the best one")
    p.add_argument("--check", action="store_true", help="check the correctness conditions")
    p.add_argument("--global", dest="global_cost", action="store_true", help="compare global costs")
    p.add_argument("--longrun", action="store_true", help="compare long-run costs")

    p = add("galois", cmd_galois, "lift a Galois connection between lattices")
    p.add_argument("source", help="'even-intervals' or a lattice file")
    p.add_argument("--n", type=int, help="bound of the even-interval lattice")
    p.add_argument("--show-matrix", action="store_true")
    p.add_argument("--verify", action="store_true", help="check the Galois and closure laws exhaustively")

    p = add("verify", cmd_verify, "randomized theorem and oracle checks")
    p.add_argument("--dioid", required=True)
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lemmas", action="store_true", help="also check the correct-linear lemmas")
    p.add_argument("--universe", help="comma-separated universe for set dioids")
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> tuple[int, AnalysisReport | None]:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), None
    report = AnalysisReport(args.command)
    out: list[str] = []
    start = time.perf_counter()
    try:
        args.func(args, report, out)
    except UsageError as exc:
        print(f"tropicost {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE, None
    except WalkBudgetExceeded as exc:
        print(f"tropicost {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE, None
    report.duration = round(time.perf_counter() - start, 6)
    if args.json:
        print(report.to_json(), file=stdout)
    else:
        print("\n".join(out), file=stdout)
    return (EXIT_OK if report.ok else EXIT_FAIL), report


def main(argv: list[str] | None = None) -> int:
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
