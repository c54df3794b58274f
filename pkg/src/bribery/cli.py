"""Command-line front end.

Exit status: 0 when a finite-cost answer was found (or a check passed),
1 when the answer is infeasible (or a check failed), 2 on usage and input
errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .approx import approx_spav_single_peaked
from .election import Rule, apply_push, apply_shift, is_single_peaked, winners
from .election import PushAction, ShiftAction
from .fileio import (InstanceFile, InstanceParseError, format_cost, from_support_instance,
                     parse_instance, serialize_instance)
from .instances import (gen_random, gen_single_peaked, parse_graph, reduce_dominating_set,
                        reduce_multicolored_clique)
from .kernels import EnumerationLimitError
from .shift import INF, ShiftCostProfile, shift_cost, solve_shift
from .support import (MixedSignError, SupportCostProfile, compute_parameters,
                      solve_destructive_support, solve_support_fpt, support_cost)


class UsageError(Exception):
    pass


def _load(path) -> InstanceFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_instance(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _rule(f: InstanceFile, text) -> Rule:
    if text is None:
        return f.rule
    try:
        return Rule.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _ints(xs) -> str:
    return " ".join(str(int(x)) for x in xs)


def _round(rule: Rule, r) -> str:
    if r is not None:
        return str(r)
    return "approval" if rule.uses_approvals else "-"


def _report(lines: list[tuple[str, object]]) -> str:
    return "".join(f"{k}: {v}\n" for k, v in lines)


def _solution_lines(command, rule, kind, target, sol, election):
    feasible = sol.cost != INF
    vec = sol.action.shifts if kind == "shift" else sol.action.deltas
    cert = sol.certificate
    out = [("command", command), ("rule", rule), ("kind", kind), ("target", target),
           ("status", "success" if feasible else "infeasible"),
           ("cost", format_cost(sol.cost)), ("action", _ints(vec)),
           ("winners", _ints(sorted(cert.winners))),
           ("winner-names", " ".join(election.candidates[c] for c in sorted(cert.winners))),
           ("round", _round(rule, cert.winning_round))]
    info = sol.info or {}
    if "seed" in info:
        out.append(("seed", info["seed"]))
        out.append(("trial", "-" if info.get("trial") is None else info["trial"]))
    return out


def _finish(lines, sol) -> int:
    sys.stdout.write(_report(lines))
    return 0 if sol.cost != INF else 1


# ---------------------------------------------------------------------------

def cmd_winners(args) -> int:
    f = _load(args.file)
    rule = _rule(f, args.rule)
    rep = winners(f.election, rule)
    e = f.election
    lines = [("command", "winners"), ("rule", rule),
             ("winners", _ints(sorted(rep.winners))),
             ("winner-names", " ".join(e.candidates[c] for c in sorted(rep.winners))),
             ("round", _round(rule, rep.winning_round)),
             ("scores", _ints(rep.scores)),
             ("designated-wins", "yes" if e.designated in rep.winners else "no")]
    sys.stdout.write(_report(lines))
    return 0


def cmd_shift(args) -> int:
    f = _load(args.file)
    rule = _rule(f, args.rule)
    sol = solve_shift(f.shift_instance(rule))
    return _finish(_solution_lines("shift-solve", rule, "shift", "constructive", sol,
                                   f.election), sol)


def _max_change(costs: SupportCostProfile) -> int:
    return sum(max(abs(a - c) for a, x in enumerate(row) if x != INF)
               for row, c in zip(costs.rows, costs.centers))


def cmd_support(args) -> int:
    f = _load(args.file)
    rule = _rule(f, args.rule)
    inst = f.support_instance(rule)
    top = args.beta_prime if args.beta_prime is not None else _max_change(inst.costs)
    try:
        sol = solve_support_fpt(inst, top, seed=args.seed, trials=args.trials)
    except MixedSignError as exc:
        raise UsageError(f"mixed-sign cost profile: {exc}") from None
    lines = _solution_lines("support-solve", rule, "push", "constructive", sol, f.election)
    if not any(k == "seed" for k, _ in lines) and inst.costs.is_positive \
            and not inst.costs.is_negative:
        lines += [("seed", args.seed), ("trial", "-")]
    return _finish(lines, sol)


def cmd_approx(args) -> int:
    f = _load(args.file)
    inst = f.support_instance(Rule("spav"))
    budget = args.budget if args.budget is not None else f.budget
    if budget is None:
        raise UsageError("no budget given on the command line or in the file")
    sol = approx_spav_single_peaked(inst, args.epsilon, budget, beta_prime=args.beta_prime,
                                    seed=args.seed, trials=args.trials)
    lines = _solution_lines("support-approx", inst.rule, "push", "constructive", sol,
                            f.election)
    lines.insert(4, ("epsilon", args.epsilon))
    lines.insert(5, ("budget", format_cost(budget)))
    return _finish(lines, sol)


def cmd_destructive(args) -> int:
    f = _load(args.file)
    rule = _rule(f, args.rule)
    inst = f.support_instance(rule)
    sol = solve_destructive_support(inst.election, inst.costs, rule)
    return _finish(_solution_lines("destructive", rule, "push", "destructive", sol,
                                   f.election), sol)


def cmd_params(args) -> int:
    f = _load(args.file)
    rule = _rule(f, args.rule)
    stats = compute_parameters(f.support_instance(rule))
    lines = [("command", "params"), ("rule", rule)]
    if stats is None:
        lines.append(("status", "infeasible"))
        sys.stdout.write(_report(lines))
        return 1
    lines += [("status", "success"), ("alpha", stats.alpha), ("beta", stats.beta),
              ("beta-prime", stats.beta_prime)]
    sys.stdout.write(_report(lines))
    return 0


def cmd_axis(args) -> int:
    f = _load(args.file)
    axis = is_single_peaked(f.election)
    lines = [("command", "axis")]
    if axis is None:
        lines.append(("single-peaked", "no"))
        sys.stdout.write(_report(lines))
        return 1
    lines += [("single-peaked", "yes"), ("axis", _ints(axis.order)),
              ("axis-names", " ".join(f.election.candidates[c] for c in axis.order))]
    sys.stdout.write(_report(lines))
    return 0


def cmd_gen(args) -> int:
    if args.family in ("random", "sp"):
        if args.m is None or args.n is None:
            raise UsageError("gen random/sp need --m and --n")
        if args.family == "random":
            e = gen_random(args.m, args.n, args.seed, args.law, args.designated or 0)
        else:
            e, _ = gen_single_peaked(args.m, args.n, args.seed, args.designated)
        rule = Rule.parse(args.rule or "spav")
        shift = support = None
        if args.costs == "unit":
            shift = ShiftCostProfile.unit(e.n, e.m)
            support = SupportCostProfile.unit(e)
        f = InstanceFile(e, rule, shift, support, args.budget)
    else:
        if args.graph is None:
            raise UsageError(f"gen {args.family} needs a graph file")
        try:
            g = parse_graph(Path(args.graph).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read {args.graph}: {exc.strerror}") from None
        if args.family == "domset":
            if args.k is None:
                raise UsageError("gen domset needs --k")
            rule = Rule.parse(args.rule or "fallback")
            inst = reduce_dominating_set(g, args.k, args.variant, rule)
        else:
            rule = Rule.parse(args.rule or "spav")
            inst, _ = reduce_multicolored_clique(g, args.k, rule)
        f = from_support_instance(inst)
    sys.stdout.write(serialize_instance(f))
    return 0


def _read_action(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    fields = {}
    for raw in text.splitlines():
        key, sep, val = raw.partition(":")
        if sep:
            fields[key.strip()] = val.strip()
    for key in ("kind", "action"):
        if key not in fields:
            raise UsageError(f"{path}: missing '{key}:' line")
    return fields


def cmd_verify(args) -> int:
    f = _load(args.file)
    fields = _read_action(args.action)
    rule = _rule(f, fields.get("rule"))
    try:
        vec = tuple(int(x) for x in fields["action"].split())
    except ValueError:
        raise UsageError("action vector must be integers") from None
    e = f.election
    if len(vec) != e.n:
        raise UsageError(f"action has {len(vec)} entries for {e.n} voters")
    kind = fields["kind"]
    try:
        if kind == "shift":
            act = ShiftAction(vec)
            after = apply_shift(e, act)
            cost = shift_cost(f.shift_instance().costs, act)
        elif kind == "push":
            act = PushAction(vec)
            after = apply_push(e, act)
            cost = support_cost(f.support_instance().costs, act)
        else:
            raise UsageError(f"unknown action kind {kind!r}")
    except ValueError as exc:
        raise UsageError(f"action does not apply: {exc}") from None
    rep = winners(after, rule)
    destructive = fields.get("target") == "destructive"
    won = e.designated in rep.winners
    goal = (not won) if destructive else won
    claimed = fields.get("cost")
    cost_ok = claimed is None or claimed == format_cost(cost)
    ok = goal and cost != INF and cost_ok
    lines = [("command", "verify"), ("rule", rule), ("kind", kind),
             ("target", "destructive" if destructive else "constructive"),
             ("cost", format_cost(cost)), ("winners", _ints(sorted(rep.winners))),
             ("goal-reached", "yes" if goal else "no"),
             ("cost-matches", "yes" if cost_ok else "no"),
             ("verified", "yes" if ok else "no")]
    sys.stdout.write(_report(lines))
    return 0 if ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bribery", description="Campaign-management bribery solvers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, func, rule=True, help=None):
        sp = sub.add_parser(name, help=help)
        if rule:
            sp.add_argument("--rule", help="override the rule named in the file")
        sp.add_argument("file")
        sp.set_defaults(func=func)
        return sp

    with_file("winners", cmd_winners, help="winner determination")
    with_file("shift-solve", cmd_shift, help="optimal shift bribery")
    sp = with_file("support-solve", cmd_support, help="parameterized support bribery")
    sp.add_argument("--beta-prime", type=int, help="largest total change to try")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int)
    sp = with_file("support-approx", cmd_approx, rule=False,
                   help="(1+eps)-approximate SP-AV support bribery on single-peaked votes")
    sp.add_argument("--epsilon", type=Fraction, required=True)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--beta-prime", type=int)
    sp.add_argument("--trials", type=int)
    with_file("destructive", cmd_destructive, help="cheapest way to defeat the designated candidate")
    with_file("params", cmd_params, help="alpha, beta, beta' by exhaustive search")
    with_file("axis", cmd_axis, rule=False, help="single-peaked axis recognition")

    sp = sub.add_parser("gen", help="write a generated instance to standard output")
    sp.add_argument("family", choices=["random", "sp", "domset", "mcclique"])
    sp.add_argument("graph", nargs="?", help="edge-list file (domset, mcclique)")
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--law", default="uniform", help="uniform or fixed(L)")
    sp.add_argument("--rule")
    sp.add_argument("--designated", type=int)
    sp.add_argument("--costs", choices=["none", "unit"], default="none")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--variant", choices=["negative", "positive"], default="negative")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("verify", help="replay a reported action")
    sp.add_argument("file")
    sp.add_argument("action", help="a report produced by one of the solver commands")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InstanceParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run(argv=None) -> int:
    """Like :func:`main` but returns argparse's usage-error status too."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
