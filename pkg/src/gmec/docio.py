"""Net document format, DOT export, and report rendering.

A net document is a small versioned JSON object:

    {
      "format": "gmec-net/1",
      "places": ["p1", "p2"],
      "transitions": [
        {"id": "t1", "controllable": false, "pre": ["p1"], "post": ["p2"]}
      ],
      "initial_marking": {"p1": 1},
      "constraints": [{"weights": {"p1": 1}, "k": 3}]
    }

Omitted marking entries and weights default to 0; unknown fields are
rejected so typos fail loudly.  Structural problems (duplicate ids,
dangling arcs) are reported by net validation, not by the parser.
"""

from __future__ import annotations

import json
from typing import Iterable

from gmec.analysis import (
    HuntReport,
    OrderSensitivityReport,
    TrialRecord,
    Verdict,
    VerificationReport,
)
from gmec.constraints import LinearConstraint, sorted_constraints
from gmec.errors import DocumentError, NegativeWeightError
from gmec.net import Marking, OrdinaryNet, Transition
from gmec.reachability import ReachGraph
from gmec.transform import TransformTrace

FORMAT_TAG = "gmec-net/1"

_TOP_KEYS = {"format", "places", "transitions", "initial_marking", "constraints"}
_TRANSITION_KEYS = {"id", "controllable", "pre", "post"}
_CONSTRAINT_KEYS = {"weights", "k"}


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise DocumentError(message)


def _place_map(doc_places, section: str, mapping) -> dict[str, int]:
    _expect(isinstance(mapping, dict), f"{section} must be an object")
    out: dict[str, int] = {}
    for name, value in mapping.items():
        _expect(
            name in doc_places, f"{section} names undeclared place {name!r}"
        )
        _expect(
            isinstance(value, int) and not isinstance(value, bool),
            f"{section}[{name!r}] must be an integer",
        )
        out[name] = value
    return out


def parse_net_document(
    text: str,
) -> tuple[OrdinaryNet, Marking, list[LinearConstraint]]:
    """Parse a net document into net, initial marking and constraint list."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    _expect(isinstance(doc, dict), "document root must be an object")
    unknown = set(doc) - _TOP_KEYS
    _expect(not unknown, f"unknown document fields: {sorted(unknown)}")
    _expect(doc.get("format") == FORMAT_TAG, f"format must be {FORMAT_TAG!r}")

    places = doc.get("places")
    _expect(
        isinstance(places, list) and all(isinstance(p, str) for p in places),
        "places must be a list of names",
    )
    place_set = set(places)

    raw_transitions = doc.get("transitions")
    _expect(isinstance(raw_transitions, list), "transitions must be a list")
    transitions: list[Transition] = []
    for pos, row in enumerate(raw_transitions):
        where = f"transitions[{pos}]"
        _expect(isinstance(row, dict), f"{where} must be an object")
        unknown = set(row) - _TRANSITION_KEYS
        _expect(not unknown, f"{where} has unknown fields: {sorted(unknown)}")
        tid = row.get("id")
        _expect(isinstance(tid, str) and tid != "", f"{where} needs a string id")
        controllable = row.get("controllable", True)
        _expect(
            isinstance(controllable, bool), f"{where}.controllable must be a boolean"
        )
        pre = row.get("pre", [])
        post = row.get("post", [])
        for side, arcs in (("pre", pre), ("post", post)):
            _expect(
                isinstance(arcs, list) and all(isinstance(p, str) for p in arcs),
                f"{where}.{side} must be a list of place names",
            )
        transitions.append(
            Transition(tid, controllable, frozenset(pre), frozenset(post))
        )
    net = OrdinaryNet(tuple(places), tuple(transitions))

    marking_map = _place_map(
        place_set, "initial_marking", doc.get("initial_marking", {})
    )
    for name, value in marking_map.items():
        _expect(value >= 0, f"initial_marking[{name!r}] must be nonnegative")
    m0 = tuple(marking_map.get(p, 0) for p in places)

    raw_constraints = doc.get("constraints", [])
    _expect(isinstance(raw_constraints, list), "constraints must be a list")
    constraints: list[LinearConstraint] = []
    for pos, row in enumerate(raw_constraints):
        where = f"constraints[{pos}]"
        _expect(isinstance(row, dict), f"{where} must be an object")
        unknown = set(row) - _CONSTRAINT_KEYS
        _expect(not unknown, f"{where} has unknown fields: {sorted(unknown)}")
        weights = _place_map(place_set, f"{where}.weights", row.get("weights", {}))
        for name, value in weights.items():
            if value < 0:
                raise NegativeWeightError(
                    f"{where}.weights[{name!r}] is negative ({value})"
                )
        bound = row.get("k")
        _expect(
            isinstance(bound, int) and not isinstance(bound, bool),
            f"{where} needs an integer bound k",
        )
        constraints.append(
            LinearConstraint(tuple(weights.get(p, 0) for p in places), bound)
        )
    return net, m0, constraints


def emit_net_document(
    net: OrdinaryNet,
    m0: Marking,
    constraints: Iterable[LinearConstraint] = (),
) -> str:
    """Canonical document text; parse(emit(...)) round-trips exactly."""
    by_place_order = {p: i for i, p in enumerate(net.places)}
    doc = {
        "format": FORMAT_TAG,
        "places": list(net.places),
        "transitions": [
            {
                "id": t.tid,
                "controllable": t.controllable,
                "pre": sorted(t.pre, key=by_place_order.get),
                "post": sorted(t.post, key=by_place_order.get),
            }
            for t in net.transitions
        ],
        "initial_marking": {
            p: tokens for p, tokens in zip(net.places, m0) if tokens
        },
        "constraints": [
            {
                "weights": {
                    p: w for p, w in zip(net.places, c.weights) if w
                },
                "k": c.bound,
            }
            for c in constraints
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# DOT export.


def graph_to_dot(graph: ReachGraph) -> str:
    """Reachability graph in DOT text form, nodes in discovery order."""
    lines = ["digraph reach {", "  rankdir=LR;"]
    for i, m in enumerate(graph.nodes):
        label = "(" + ",".join(str(x) for x in m) + ")"
        extra = ", peripheries=2" if i == 0 else ""
        lines.append(f'  n{i} [label="{label}"{extra}];')
    for src, t, dst in graph.edges:
        lines.append(f'  n{src} -> n{dst} [label="{graph.transition_ids[t]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Report rendering: every report gets a plain-dict form (stable keys, sorted
# sets) for --json and a human text form.


def marking_list(markings: Iterable[Marking]) -> list[list[int]]:
    return [list(m) for m in sorted(markings)]


def constraint_dict(c: LinearConstraint) -> dict:
    return {"weights": list(c.weights), "k": c.bound}


def constraint_set_list(members) -> list[dict]:
    return [constraint_dict(c) for c in sorted_constraints(members)]


def fmt_marking(m: Marking) -> str:
    return "(" + ",".join(str(x) for x in m) + ")"


def verdict_dict(v: Verdict) -> dict:
    return {
        "left": v.left_label,
        "right": v.right_label,
        "equal": v.equal,
        "mode": v.mode,
        "left_size": len(v.left),
        "right_size": len(v.right),
        "witnesses": [
            {"marking": list(m), "side": side} for m, side in v.witness_sides()
        ],
    }


def trace_dict(trace: TransformTrace) -> dict:
    return {
        "initial": constraint_set_list(trace.initial),
        "stages": [
            {
                "transition": s.transition,
                "before": constraint_set_list(s.before),
                "after": constraint_set_list(s.after),
                "steps": [
                    {
                        "source": constraint_dict(step.source),
                        "place": step.place,
                        "result": constraint_dict(step.result),
                    }
                    for step in s.steps
                ],
            }
            for s in trace.stages
        ],
        "final": constraint_set_list(trace.final),
    }


def trace_text(trace: TransformTrace) -> str:
    lines = [f"step 0: {constraint_set_text(trace.initial)}"]
    for i, stage in enumerate(trace.stages):
        lines.append(f"apply {stage.transition}:")
        for step in stage.steps:
            if step.place is None:
                lines.append(f"  {step.source}  [gain <= 0, unchanged]")
            else:
                lines.append(f"  {step.source}  --{step.place}-->  {step.result}")
        tag = " (final)" if i == len(trace.stages) - 1 else ""
        lines.append(f"step {i + 1}{tag}: {constraint_set_text(stage.after)}")
    return "\n".join(lines)


def constraint_set_text(members) -> str:
    if not members:
        return "{}"
    return "{" + ", ".join(str(c) for c in sorted_constraints(members)) + "}"


def order_report_dict(report: OrderSensitivityReport, max_pairs: int = 50) -> dict:
    pairs = report.inequivalent_pairs(limit=max_pairs)
    return {
        "mode": report.mode,
        "orders": [list(o) for o in report.orders],
        "admissible_sizes": [len(s) for s in report.admissible],
        "set_ids": list(report.set_ids),
        "distinct_outcomes": len(set(report.set_ids)),
        "orders_all_equal": report.orders_all_equal,
        "original_admissible_size": len(report.original_admissible),
        "vs_original": [verdict_dict(v) for v in report.vs_original],
        "inequivalent_pairs": [
            verdict_dict(report.verdict(i, j)) for i, j in pairs
        ],
    }


def order_report_text(report: OrderSensitivityReport) -> str:
    lines = [f"mode: {report.mode}"]
    lines.append(
        f"original constraint: admissible set has "
        f"{len(report.original_admissible)} markings"
    )
    for i, order in enumerate(report.orders):
        name = ",".join(order) or "-"
        v = report.vs_original[i]
        status = "matches original" if v.equal else "DIFFERS from original"
        lines.append(
            f"order {name}: {len(report.pruned[i])} constraints after pruning, "
            f"admissible set has {len(report.admissible[i])} markings, {status}"
        )
    if report.orders_all_equal:
        lines.append("all orders yield the same admissible set")
    else:
        lines.append("orders yield different admissible sets:")
        for i, j in report.inequivalent_pairs(limit=10):
            v = report.verdict(i, j)
            w = ", ".join(fmt_marking(m) for m in v.witnesses[:5])
            lines.append(
                f"  {','.join(report.orders[i])} vs {','.join(report.orders[j])}"
                f" - witnesses: {w}"
            )
    return "\n".join(lines)


def verification_dict(report: VerificationReport) -> dict:
    return {
        "mode": report.mode,
        "passed": report.passed,
        "items": [
            {
                "name": i.name,
                "passed": i.passed,
                "expected": i.expected,
                "actual": i.actual,
            }
            for i in report.items
        ],
    }


def verification_text(report: VerificationReport) -> str:
    lines = []
    for item in report.items:
        mark = "PASS" if item.passed else "FAIL"
        lines.append(f"[{mark}] {item.name}")
        if not item.passed:
            lines.append(f"       expected: {item.expected}")
            lines.append(f"       actual:   {item.actual}")
    lines.append(
        f"{sum(i.passed for i in report.items)}/{len(report.items)} checks passed"
        f" (mode: {report.mode})"
    )
    return "\n".join(lines)


def trial_dict(t: TrialRecord) -> dict:
    return {
        "index": t.index,
        "seed": t.seed,
        "places": t.places,
        "transitions": t.transitions,
        "status": t.status,
        "admissible_input": t.admissible_input,
        "orders_checked": t.orders_checked,
        "order_sensitive": t.order_sensitive,
        "original_mismatch": t.original_mismatch,
        "weak_admissibility_violation": t.weak_admissibility_violation,
        "nonconvergent": t.nonconvergent,
        "witness": list(t.witness) if t.witness is not None else None,
        "error": t.error,
    }


def hunt_report_dict(report: HuntReport) -> dict:
    cfg = report.config
    return {
        "config": {
            "seed": cfg.seed,
            "trials": cfg.trials,
            "max_places": cfg.max_places,
            "max_transitions": cfg.max_transitions,
            "max_initial_tokens": cfg.max_initial_tokens,
            "arc_density": cfg.arc_density,
            "uncontrollable_fraction": cfg.uncontrollable_fraction,
            "weight_cap": cfg.weight_cap,
            "bound_cap": cfg.bound_cap,
            "max_markings": cfg.limits.max_markings,
            "max_tokens_per_place": cfg.limits.max_tokens_per_place,
            "max_permuted": cfg.max_permuted,
            "witness_cap": cfg.witness_cap,
            "include_reference": cfg.include_reference,
        },
        "summary": report.counts(),
        "trials": [trial_dict(t) for t in report.trials],
    }


def hunt_report_text(report: HuntReport) -> str:
    counts = report.counts()
    lines = [
        f"hunt: {counts['trials']} trials, seed {report.config.seed}",
        (
            f"  ok {counts['ok']}, skipped (unbounded {counts['skipped-unbounded']},"
            f" cap {counts['skipped-cap']},"
            f" permutations {counts['skipped-permutations']}),"
            f" errors {counts['errors']}"
        ),
        (
            f"  flagged {counts['flagged']}"
            f" (order-sensitive {counts['order_sensitive']},"
            f" original-mismatch {counts['original_mismatch']})"
        ),
        (
            f"  weak-admissibility violations"
            f" {counts['weak_admissibility_violations']},"
            f" nonconvergent {counts['nonconvergent']}"
        ),
    ]
    for t in report.flagged():
        witness = fmt_marking(t.witness) if t.witness is not None else "-"
        lines.append(
            f"  trial {t.index} (seed {t.seed}): places {t.places},"
            f" transitions {t.transitions}, orders {t.orders_checked},"
            f" witness {witness}"
        )
    return "\n".join(lines)


def json_text(payload: dict) -> str:
    """Stable machine-readable rendering (sorted keys, fixed layout)."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
