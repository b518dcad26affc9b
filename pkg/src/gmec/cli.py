"""Command-line interface.

Exit codes: 0 success, 1 inequivalence finding (compare-orders only),
2 input error, 3 resource limit, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from gmec import analysis, docio
from gmec.constraints import (
    LinearConstraint,
    MarkingSets,
    is_admissible,
    is_weakly_admissible,
    transition_gain,
)
from gmec.errors import (
    CapExceededError,
    DocumentError,
    GmecError,
    LikelyUnboundedError,
    NoConstraintError,
    NonConvergenceError,
    PermutationCapExceededError,
)
from gmec.net import validate
from gmec.reachability import DEFAULT_LIMITS, ExploreLimits, reach, reach_complete
from gmec.transform import apply_sequence, prune_zero, transform_to_weak_admissible

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_MISMATCH = 4


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return docio.parse_net_document(text)


def _pick_constraint(constraints: list[LinearConstraint], index: int) -> LinearConstraint:
    if not 0 <= index < len(constraints):
        raise NoConstraintError(index, len(constraints))
    return constraints[index]


def _limits(args) -> ExploreLimits:
    return ExploreLimits(
        max_markings=args.max_markings,
        max_tokens_per_place=args.max_tokens,
    )


def _emit(args, payload: dict, text: str, out: Optional[str] = None) -> None:
    rendered = docio.json_text(payload) if args.json else text + "\n"
    if out:
        docio.write_text(out, rendered)
    else:
        sys.stdout.write(rendered)


def _cmd_validate(args) -> int:
    net, _, _ = _load(args.net_file)
    issues = validate(net)
    payload = {
        "valid": not issues,
        "issues": [
            {"kind": i.kind, "subject": i.subject, "detail": i.detail}
            for i in issues
        ],
    }
    if issues:
        text = "\n".join(str(i) for i in issues)
        _emit(args, payload, text)
        return EXIT_INPUT
    _emit(args, payload, "ok")
    return EXIT_OK


def _cmd_reach(args) -> int:
    net, m0, _ = _load(args.net_file)
    allowed = net.uncontrollable_ids() if args.uncontrollable_only else None
    try:
        graph = reach(net, m0, allowed, _limits(args))
    except LikelyUnboundedError as exc:
        _emit(args, {"error": "likely-unbounded", "detail": str(exc)}, str(exc))
        return EXIT_RESOURCE
    if args.dot:
        docio.write_text(args.dot, docio.graph_to_dot(graph))
    status = "complete" if graph.complete else f"incomplete ({graph.stop_reason})"
    payload = {
        "markings": len(graph),
        "edges": len(graph.edges),
        "complete": graph.complete,
        "stop_reason": graph.stop_reason,
    }
    _emit(args, payload, f"{len(graph)} markings, {status}")
    return EXIT_OK if graph.complete else EXIT_RESOURCE


def _cmd_gain(args) -> int:
    net, _, constraints = _load(args.net_file)
    c = _pick_constraint(constraints, args.constraint)
    gains = transition_gain(net, c)
    lines = [f"constraint: {c}"]
    rows = []
    for i, t in enumerate(net.transitions):
        kind = "controllable" if t.controllable else "uncontrollable"
        rows.append({"id": t.tid, "gain": gains[i], "controllable": t.controllable})
        lines.append(f"  {t.tid}: gain {gains[i]:+d} ({kind})")
    adm = is_admissible(net, c)
    weak = is_weakly_admissible(net, c)
    lines.append(f"admissible: {'yes' if adm else 'no'}")
    lines.append(f"weakly admissible: {'yes' if weak else 'no'}")
    payload = {
        "constraint": docio.constraint_dict(c),
        "gains": rows,
        "admissible": adm,
        "weakly_admissible": weak,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _cmd_sets(args) -> int:
    net, m0, constraints = _load(args.net_file)
    c = _pick_constraint(constraints, args.constraint)
    sets = MarkingSets(net, reach_complete(net, m0, None, _limits(args)))
    legal = sets.legal(c)
    admissible = sets.admissible(c)
    lines = [
        f"constraint: {c}",
        f"reachable: {len(sets.reachable())} markings",
        f"legal: {len(legal)} markings",
        f"admissible: {len(admissible)} markings",
    ]
    if args.list:
        lines.append("legal set:")
        lines.extend(f"  {docio.fmt_marking(m)}" for m in sorted(legal))
        lines.append("admissible set:")
        lines.extend(f"  {docio.fmt_marking(m)}" for m in sorted(admissible))
    payload = {
        "constraint": docio.constraint_dict(c),
        "reachable": len(sets.reachable()),
        "legal": docio.marking_list(legal),
        "admissible": docio.marking_list(admissible),
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _cmd_transform(args) -> int:
    net, m0, constraints = _load(args.net_file)
    c = _pick_constraint(constraints, args.constraint)
    if args.order:
        order = [t.strip() for t in args.order.split(",") if t.strip()]
        trace = apply_sequence(net, c, order)
    else:
        trace = transform_to_weak_admissible(
            net, c, args.policy, max_rounds=args.max_rounds
        )
    text = docio.trace_text(trace)
    payload = docio.trace_dict(trace)
    if args.prune_zero != "off":
        survivors = prune_zero(
            trace.final, m0, args.prune_zero, net, _limits(args)
        )
        payload["pruned"] = docio.constraint_set_list(survivors)
        payload["prune_mode"] = args.prune_zero
        text += (
            f"\nafter {args.prune_zero} zero pruning:"
            f" {docio.constraint_set_text(survivors)}"
        )
    _emit(args, payload, text)
    return EXIT_OK


def _cmd_compare_orders(args) -> int:
    net, m0, constraints = _load(args.net_file)
    c = _pick_constraint(constraints, args.constraint)
    report = analysis.order_sensitivity(
        net,
        m0,
        c,
        limits=_limits(args),
        mode=args.mode,
        witness_cap=args.witnesses,
    )
    _emit(args, docio.order_report_dict(report), docio.order_report_text(report))
    found = not report.orders_all_equal or report.any_original_mismatch
    return EXIT_FINDING if found else EXIT_OK


def _cmd_verify_paper(args) -> int:
    report = analysis.verify_counterexample(mode=args.mode)
    _emit(args, docio.verification_dict(report), docio.verification_text(report))
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _cmd_hunt(args) -> int:
    config = analysis.HuntConfig(
        seed=args.seed,
        trials=args.trials,
        max_places=args.max_places,
        max_transitions=args.max_transitions,
        max_initial_tokens=args.max_initial_tokens,
        arc_density=args.arc_density,
        uncontrollable_fraction=args.uncontrollable_fraction,
        weight_cap=args.weight_cap,
        bound_cap=args.bound_cap,
        include_reference=args.include_reference,
    )
    report = analysis.hunt(config)
    _emit(
        args,
        docio.hunt_report_dict(report),
        docio.hunt_report_text(report),
        out=args.out,
    )
    return EXIT_OK


def _add_common(sub, constraint: bool = False, limits: bool = False) -> None:
    sub.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                     help="machine-readable output")
    if constraint:
        sub.add_argument("--constraint", type=int, default=0, metavar="INDEX",
                         help="constraint index in the document (default 0)")
    if limits:
        sub.add_argument("--max-markings", type=int,
                         default=DEFAULT_LIMITS.max_markings, metavar="N")
        sub.add_argument("--max-tokens", type=int,
                         default=DEFAULT_LIMITS.max_tokens_per_place, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmec",
        description=(
            "Linear marking constraints on ordinary Petri nets with"
            " uncontrollable transitions: reachability, admissible sets,"
            " constraint transformation, and order-sensitivity analysis."
        ),
    )
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("validate", help="structural net check")
    sub.add_argument("net_file")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_validate)

    sub = commands.add_parser("reach", help="enumerate reachable markings")
    sub.add_argument("net_file")
    sub.add_argument("--uncontrollable-only", action="store_true",
                     help="fire only uncontrollable transitions")
    sub.add_argument("--dot", metavar="FILE", help="write the graph in DOT form")
    _add_common(sub, limits=True)
    sub.set_defaults(handler=_cmd_reach)

    sub = commands.add_parser("gain", help="per-transition gains of a constraint")
    sub.add_argument("net_file")
    _add_common(sub, constraint=True)
    sub.set_defaults(handler=_cmd_gain)

    sub = commands.add_parser("sets", help="legal and admissible marking sets")
    sub.add_argument("net_file")
    sub.add_argument("--list", action="store_true", help="print every marking")
    _add_common(sub, constraint=True, limits=True)
    sub.set_defaults(handler=_cmd_sets)

    sub = commands.add_parser("transform", help="run the constraint transformation")
    sub.add_argument("net_file")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--order", metavar="T1,T2,...",
                       help="apply once at each listed transition, in order")
    group.add_argument("--policy", choices=("declaration", "reverse"),
                       default="declaration",
                       help="sweep policy for iterating to weak admissibility")
    sub.add_argument("--max-rounds", type=int, default=100, metavar="N")
    sub.add_argument("--prune-zero", choices=("syntactic", "semantic", "off"),
                     default="off", help="drop zero members from the final set")
    _add_common(sub, constraint=True, limits=True)
    sub.set_defaults(handler=_cmd_transform)

    sub = commands.add_parser(
        "compare-orders",
        help="transform under every transition order and compare admissible sets",
    )
    sub.add_argument("net_file")
    sub.add_argument("--mode", choices=("syntactic", "semantic"),
                     default="syntactic", help="zero-pruning mode")
    sub.add_argument("--witnesses", type=int, default=10, metavar="N",
                     help="witness markings kept per verdict")
    _add_common(sub, constraint=True, limits=True)
    sub.set_defaults(handler=_cmd_compare_orders)

    sub = commands.add_parser(
        "verify-paper",
        help="re-derive the bundled order-sensitivity counterexample",
    )
    sub.add_argument("--mode", choices=("syntactic", "semantic"),
                     default="syntactic")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_verify_paper)

    sub = commands.add_parser("hunt", help="randomized counterexample search")
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--trials", type=int, required=True)
    sub.add_argument("--max-places", type=int, default=6)
    sub.add_argument("--max-transitions", type=int, default=6)
    sub.add_argument("--max-initial-tokens", type=int, default=6)
    sub.add_argument("--arc-density", type=float, default=0.35)
    sub.add_argument("--uncontrollable-fraction", type=float, default=0.7)
    sub.add_argument("--weight-cap", type=int, default=3)
    sub.add_argument("--bound-cap", type=int, default=6)
    sub.add_argument("--include-reference", action="store_true",
                     help="run the bundled counterexample as trial 0")
    sub.add_argument("--out", metavar="FILE", help="write the report to a file")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_hunt)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (NonConvergenceError, CapExceededError, LikelyUnboundedError,
            PermutationCapExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except GmecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
