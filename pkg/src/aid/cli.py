"""Command line interface: ``aid check|measure|implies|counterexample|falsify|replay``.

Exit codes: ``check`` 0/1 for true/false, ``implies`` 0/1/2 for
IMPLIED/NOT_IMPLIED/UNKNOWN, 64 for usage errors, 74 for unreadable or
malformed files, 75 when the search budget runs out.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .derivation import Derivation, replay_derivation
from .errors import (
    AidError,
    CertificateError,
    CertificateTooLarge,
    DerivableGoal,
    GoalBoundIsOne,
    InvalidRuleInstance,
    NonUnaryAtoms,
    ResourceBudgetExceeded,
    TeamFormatError,
    VariableCapExceeded,
)
from .implication import Implied, NotImplied, decide
from .io import parse_atom, read_assumptions, read_team, team_to_dict, write_team
from .model import format_ratio, varseq
from .semantics import minimal_quantity, minimal_ratio, satisfies

EX_USAGE = 64
EX_IOERR = 74
EX_TEMPFAIL = 75

log = logging.getLogger("aid")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, default=str))
    else:
        print(text)


def _atom_arg(text: str, kind: str | None = None):
    try:
        atom = parse_atom(text)
    except AidError as exc:
        raise UsageError(str(exc)) from None
    if kind and atom.kind != kind:
        raise UsageError(f"--kind {kind} does not match the goal {atom}")
    return atom


def _assumptions(path, kind):
    try:
        sigma = read_assumptions(path)
    except OSError:
        raise
    except AidError as exc:
        raise UsageError(f"{path}: {exc}") from None
    wrong = [a for a in sigma if a.kind != kind]
    if wrong:
        raise UsageError(f"{path}: {wrong[0]} is not of kind {kind}")
    return sigma


def _team(args):
    team = read_team(args.team, args.format)
    if team.duplicates_dropped:
        log.warning("%s: dropped %d duplicate row(s)", args.team, team.duplicates_dropped)
    return team


def cmd_check(args):
    team = _team(args)
    atom = _atom_arg(args.atom)
    result = satisfies(team, atom)
    _emit(args, {"atom": str(atom), "satisfied": result, "rows": len(team)}, "true" if result else "false")
    return 0 if result else 1


def cmd_measure(args):
    team = _team(args)
    try:
        lhs, rhs = varseq(args.lhs), varseq(args.rhs)
    except AidError as exc:
        raise UsageError(str(exc)) from None
    n = minimal_quantity(team, lhs, rhs)
    p = minimal_ratio(team, lhs, rhs)
    _emit(
        args,
        {"lhs": list(lhs), "rhs": list(rhs), "quantity": n, "ratio": format_ratio(p), "rows": len(team)},
        f"quantity {n}\nratio {format_ratio(p)}",
    )
    return 0


def _write_derivation(derivation: Derivation, path: str):
    text = derivation.to_json() if path.lower().endswith(".json") else derivation.render() + "\n"
    Path(path).write_text(text, encoding="utf-8")


def cmd_implies(args):
    goal = _atom_arg(args.goal, args.kind)
    sigma = _assumptions(args.assumptions, args.kind)
    verdict = decide(sigma, goal, var_cap=args.var_cap, node_budget=args.node_budget)
    payload = {"status": verdict.status, "goal": str(goal)}
    if verdict.weight is not None:
        payload["path_weight"] = str(verdict.weight)
    lines = [verdict.status]
    if isinstance(verdict, Implied):
        payload["derivation"] = verdict.derivation.to_dict()["steps"]
        if args.derivation:
            _write_derivation(verdict.derivation, args.derivation)
        elif not args.json:
            lines.append(verdict.derivation.render())
    elif isinstance(verdict, NotImplied) and verdict.certificate is None:
        payload["certificate_rows"] = None
        lines.append("counterexample team too large to build")
    elif isinstance(verdict, NotImplied):
        payload["certificate_rows"] = len(verdict.certificate)
        if args.certificate:
            write_team(verdict.certificate, args.certificate)
        elif args.json:
            payload["certificate"] = team_to_dict(verdict.certificate)
    else:
        payload["reason"] = verdict.reason
        lines.append(verdict.reason)
    _emit(args, payload, "\n".join(lines))
    return verdict.exit_code


def cmd_counterexample(args):
    from .counterexample import counterexample

    goal = _atom_arg(args.goal, args.kind)
    sigma = _assumptions(args.assumptions, args.kind)
    try:
        team = counterexample(
            sigma,
            goal,
            var_cap=args.var_cap,
            node_budget=args.node_budget,
            allow_over_arity=args.allow_over_arity,
        )
    except DerivableGoal as exc:
        _emit(args, {"status": "DERIVABLE", "goal": str(goal), "reason": str(exc)}, f"DERIVABLE: {exc}")
        return 1
    except (CertificateError, CertificateTooLarge, VariableCapExceeded, NonUnaryAtoms, GoalBoundIsOne) as exc:
        _emit(args, {"status": "FAILED", "goal": str(goal), "reason": str(exc)}, f"FAILED: {exc}")
        return 2
    write_team(team, args.out)
    _emit(
        args,
        {"status": "WRITTEN", "goal": str(goal), "rows": len(team), "out": args.out},
        f"wrote {len(team)} rows to {args.out}",
    )
    return 0


def cmd_falsify(args):
    from .oracle import falsify_by_enumeration

    goal = _atom_arg(args.goal)
    sigma = _assumptions(args.assumptions, goal.kind)
    try:
        team = falsify_by_enumeration(sigma, goal, args.max_rows, args.max_values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if team is None:
        _emit(args, {"found": False}, "none")
        return 1
    if args.out:
        write_team(team, args.out)
    from .io import team_to_csv

    _emit(args, {"found": True, "team": team_to_dict(team)}, team_to_csv(team).rstrip("\n"))
    return 0


def cmd_replay(args):
    goal = _atom_arg(args.goal) if args.goal else None
    text = Path(args.derivation).read_text(encoding="utf-8")
    try:
        derivation = Derivation.from_dict(json.loads(text))
    except (ValueError, KeyError, AidError) as exc:
        raise UsageError(f"{args.derivation}: not a JSON derivation ({exc})") from None
    kind = derivation.conclusion.kind if derivation.steps else "q"
    sigma = _assumptions(args.assumptions, kind)
    try:
        replay_derivation(sigma, derivation, goal)
    except InvalidRuleInstance as exc:
        _emit(args, {"ok": False, "step": exc.step, "reason": exc.reason}, f"invalid: {exc}")
        return 1
    _emit(args, {"ok": True, "steps": len(derivation)}, "ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aid", description="Approximate inclusion dependencies over teams.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("check", help="does a team satisfy an atom?")
    p.add_argument("--team", required=True)
    p.add_argument("--atom", required=True)
    p.add_argument("--format", choices=["csv", "json"])
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("measure", help="least quantity and ratio bounds an atom admits")
    p.add_argument("--team", required=True)
    p.add_argument("--lhs", required=True, help="comma separated variables")
    p.add_argument("--rhs", required=True)
    p.add_argument("--format", choices=["csv", "json"])
    common(p)
    p.set_defaults(func=cmd_measure)

    def solver_opts(p):
        p.add_argument("--kind", choices=["q", "r"], required=True)
        p.add_argument("--assumptions", required=True, help="one atom per line, '#' comments")
        p.add_argument("--goal", required=True)
        p.add_argument("--var-cap", type=int, default=None)
        p.add_argument("--node-budget", type=int, default=None)

    p = sub.add_parser("implies", help="decide whether the assumptions imply the goal")
    solver_opts(p)
    p.add_argument("--certificate", help="write the counterexample team here")
    p.add_argument("--derivation", help="write the derivation here (.json for JSON)")
    common(p)
    p.set_defaults(func=cmd_implies)

    p = sub.add_parser("counterexample", help="build the certificate team for a non-implied goal")
    solver_opts(p)
    p.add_argument("--out", required=True)
    p.add_argument("--allow-over-arity", action="store_true")
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("falsify", help="brute-force search for a small falsifying team")
    p.add_argument("--assumptions", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--max-rows", type=int, default=4)
    p.add_argument("--max-values", type=int, default=3)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("replay", help="check a JSON derivation step by step")
    p.add_argument("--assumptions", required=True)
    p.add_argument("--derivation", required=True)
    p.add_argument("--goal")
    common(p)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="aid: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"aid: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (OSError, TeamFormatError) as exc:
        print(f"aid: error: {exc}", file=sys.stderr)
        return EX_IOERR
    except ResourceBudgetExceeded as exc:
        print(f"aid: error: {exc}", file=sys.stderr)
        return EX_TEMPFAIL
    except AidError as exc:
        print(f"aid: error: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
