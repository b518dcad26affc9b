"""Equivalence verdicts, order-sensitivity exploration, and the randomized
counterexample hunter.

The question throughout: does transforming a constraint at the
uncontrollable transitions preserve its admissible marking set, and does
the answer depend on the order in which the transitions are visited?  The
bundled instance answers no and yes respectively; ``hunt`` searches random
nets for further instances.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from gmec.constraints import (
    LinearConstraint,
    MarkingSets,
    is_admissible,
    is_weakly_admissible,
    is_zero_syntactic,
    sorted_constraints,
    transition_gain,
)
from gmec.errors import (
    CapExceededError,
    GmecError,
    LikelyUnboundedError,
    NonConvergenceError,
    PermutationCapExceededError,
)
from gmec.fixtures import counterexample_instance
from gmec.net import Marking, OrdinaryNet, make_net
from gmec.reachability import DEFAULT_LIMITS, ExploreLimits, reach_complete
from gmec.transform import apply_sequence, transform_to_weak_admissible

MODES = ("syntactic", "semantic")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, not {mode!r}")


@dataclass(frozen=True)
class Verdict:
    """Outcome of comparing two marking sets, with witnesses from the
    symmetric difference (sorted, capped)."""

    left_label: str
    right_label: str
    left: frozenset
    right: frozenset
    equal: bool
    witnesses: tuple[Marking, ...]
    mode: str

    def witness_sides(self) -> tuple[tuple[Marking, str], ...]:
        return tuple(
            (m, "left" if m in self.left else "right") for m in self.witnesses
        )


def make_verdict(
    left_label: str,
    left: frozenset,
    right_label: str,
    right: frozenset,
    mode: str,
    witness_cap: int = 10,
) -> Verdict:
    witnesses = tuple(sorted(left ^ right)[:witness_cap])
    return Verdict(
        left_label=left_label,
        right_label=right_label,
        left=left,
        right=right,
        equal=left == right,
        witnesses=witnesses,
        mode=mode,
    )


def _pruned(sets: MarkingSets, members: frozenset, m0, mode: str) -> frozenset:
    """Zero-member pruning backed by the cached marking sets."""
    if mode == "syntactic":
        return frozenset(c for c in members if not is_zero_syntactic(c, m0))
    return frozenset(c for c in members if sets.admissible(c))


def equivalence_check(
    net: OrdinaryNet,
    m0,
    c: LinearConstraint,
    members: Iterable,
    limits: ExploreLimits = DEFAULT_LIMITS,
    mode: str = "syntactic",
    witness_cap: int = 10,
) -> Verdict:
    """Compare the constraint's admissible set against the admissible set of
    a constraint disjunction, after zero-member pruning in the given mode."""
    _check_mode(mode)
    members = frozenset(members)
    sets = MarkingSets(net, reach_complete(net, m0, None, limits))
    survivors = _pruned(sets, members, m0, mode)
    left = sets.admissible(c)
    right = sets.disjunction_admissible(survivors)
    return make_verdict(
        f"A[{c}]",
        left,
        f"A[or-of-{len(members)}]",
        right,
        mode,
        witness_cap,
    )


@dataclass(frozen=True)
class OrderSensitivityReport:
    """Admissible sets of every transformation order, plus comparisons.

    The pairwise matrix is available through :meth:`verdict`; materializing
    all O(n!^2) cells up front would be wasteful, so the report stores the
    per-order sets and builds cells on demand.  ``set_ids`` assigns equal
    sets the same id, which makes the all-equal summary and the search for
    differing pairs cheap.
    """

    mode: str
    orders: tuple[tuple[str, ...], ...]
    finals: tuple[frozenset, ...]
    pruned: tuple[frozenset, ...]
    admissible: tuple[frozenset, ...]
    set_ids: tuple[int, ...]
    original_admissible: frozenset
    vs_original: tuple[Verdict, ...]
    witness_cap: int

    def order_count(self) -> int:
        return len(self.orders)

    @property
    def orders_all_equal(self) -> bool:
        return len(set(self.set_ids)) <= 1

    @property
    def any_original_mismatch(self) -> bool:
        return any(not v.equal for v in self.vs_original)

    def verdict(self, i: int, j: int) -> Verdict:
        return make_verdict(
            f"A[order {','.join(self.orders[i])}]",
            self.admissible[i],
            f"A[order {','.join(self.orders[j])}]",
            self.admissible[j],
            self.mode,
            self.witness_cap,
        )

    def inequivalent_pairs(self, limit: Optional[int] = None) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        for i, j in itertools.combinations(range(len(self.orders)), 2):
            if self.set_ids[i] != self.set_ids[j]:
                out.append((i, j))
                if limit is not None and len(out) >= limit:
                    return out
        return out

    def first_witness(self) -> Optional[Marking]:
        for v in self.vs_original:
            if not v.equal and v.witnesses:
                return v.witnesses[0]
        pairs = self.inequivalent_pairs(limit=1)
        if pairs:
            v = self.verdict(*pairs[0])
            if v.witnesses:
                return v.witnesses[0]
        return None


def order_sensitivity(
    net: OrdinaryNet,
    m0,
    c: LinearConstraint,
    limits: ExploreLimits = DEFAULT_LIMITS,
    mode: str = "syntactic",
    max_permuted: int = 6,
    witness_cap: int = 10,
    max_members: int = 20_000,
) -> OrderSensitivityReport:
    """Transform the constraint under every permutation of its positive-gain
    uncontrollable transitions and compare the resulting admissible sets,
    both pairwise and against the original constraint's."""
    _check_mode(mode)
    gains = transition_gain(net, c)
    base = tuple(
        t.tid
        for i, t in enumerate(net.transitions)
        if not t.controllable and gains[i] > 0
    )
    if len(base) > max_permuted:
        raise PermutationCapExceededError(len(base), max_permuted)
    sets = MarkingSets(net, reach_complete(net, m0, None, limits))
    # Both sides of every comparison get the same zero-member treatment, so
    # an identity transformation always compares equal to its input.
    original = sets.disjunction_admissible(
        _pruned(sets, frozenset((c,)), m0, mode)
    )

    orders: list[tuple[str, ...]] = []
    finals: list[frozenset] = []
    pruned: list[frozenset] = []
    admissible: list[frozenset] = []
    set_ids: list[int] = []
    vs_original: list[Verdict] = []
    interned: dict[frozenset, int] = {}
    for perm in itertools.permutations(base):
        trace = apply_sequence(net, c, perm, max_members=max_members)
        survivors = _pruned(sets, trace.final, m0, mode)
        adm = sets.disjunction_admissible(survivors)
        orders.append(perm)
        finals.append(trace.final)
        pruned.append(survivors)
        admissible.append(adm)
        set_ids.append(interned.setdefault(adm, len(interned)))
        vs_original.append(
            make_verdict(
                f"A[{c}]",
                original,
                f"A[order {','.join(perm) or '-'}]",
                adm,
                mode,
                witness_cap,
            )
        )
    return OrderSensitivityReport(
        mode=mode,
        orders=tuple(orders),
        finals=tuple(finals),
        pruned=tuple(pruned),
        admissible=tuple(admissible),
        set_ids=tuple(set_ids),
        original_admissible=original,
        vs_original=tuple(vs_original),
        witness_cap=witness_cap,
    )


# ---------------------------------------------------------------------------
# Re-derivation of the bundled counterexample.

_VEC = {
    "original": (1, 0, 0, 1, 1),
    "t1@p2": (1, 2, 0, 1, 1),
    "t1@p3": (1, 0, 2, 1, 1),
    "t1@p2,t2@p3": (1, 2, 1, 1, 1),
    "t2@p3": (1, 0, 1, 1, 1),
    "t2@p3,t1@p2": (1, 1, 1, 1, 1),
}
_BOUND = 3
_PRODUCTS = {
    "t1@p2": 2,
    "t1@p3": 4,
    "t1@p2,t2@p3": 4,
    "t2@p3": 2,
    "t2@p3,t1@p2": 3,
}
_SYNTACTIC_ZEROS = ("t1@p3", "t1@p2,t2@p3")  # t2@p3,t1@p3 collapses onto t1@p3


def _c(tag: str) -> LinearConstraint:
    return LinearConstraint(_VEC[tag], _BOUND)


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    expected: str
    actual: str


@dataclass(frozen=True)
class VerificationReport:
    mode: str
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> tuple[CheckItem, ...]:
        return tuple(item for item in self.items if not item.passed)


def _fmt_set(members: Iterable) -> str:
    return "{" + ", ".join(str(c) for c in sorted_constraints(members)) + "}"


def _fmt_marking(m: Marking) -> str:
    return "(" + ",".join(str(x) for x in m) + ")"


def verify_counterexample(
    mode: str = "syntactic",
    limits: ExploreLimits = DEFAULT_LIMITS,
    instance=None,
) -> VerificationReport:
    """Re-derive the bundled counterexample step by step.

    Checks the transformed constraint sets of both orders, the weight
    products at the initial marking, the zero flags, the admissible-set
    unions, and finally that the two orders disagree - i.e. that the
    transformation is not order-independent and in particular not
    equivalence-preserving.  ``instance`` overrides the bundled net for
    negative controls in tests.
    """
    _check_mode(mode)
    net, m0, c = instance if instance is not None else counterexample_instance()
    items: list[CheckItem] = []

    def item(name: str, expected, actual) -> None:
        exp_s = expected if isinstance(expected, str) else str(expected)
        act_s = actual if isinstance(actual, str) else str(actual)
        items.append(CheckItem(name, exp_s == act_s, exp_s, act_s))

    trace_a = apply_sequence(net, c, ("t1", "t2"))
    trace_b = apply_sequence(net, c, ("t2", "t1"))
    expected_a_mid = frozenset((_c("t1@p2"), _c("t1@p3")))
    expected_a_fin = frozenset((_c("t1@p2,t2@p3"), _c("t1@p3")))
    expected_b_mid = frozenset((_c("t2@p3"),))
    expected_b_fin = frozenset((_c("t1@p3"), _c("t2@p3,t1@p2")))
    item(
        "order t1,t2: intermediate constraints",
        _fmt_set(expected_a_mid),
        _fmt_set(trace_a.stages[0].after),
    )
    item(
        "order t1,t2: final constraints",
        _fmt_set(expected_a_fin),
        _fmt_set(trace_a.final),
    )
    item(
        "order t2,t1: intermediate constraints",
        _fmt_set(expected_b_mid),
        _fmt_set(trace_b.stages[0].after),
    )
    item(
        "order t2,t1: final constraints",
        _fmt_set(expected_b_fin),
        _fmt_set(trace_b.final),
    )

    products = {tag: _c(tag).dot(m0) for tag in _PRODUCTS}
    item(
        "weight products at initial marking",
        str(dict(sorted(_PRODUCTS.items()))),
        str(dict(sorted(products.items()))),
    )

    sets = MarkingSets(net, reach_complete(net, m0, None, limits))
    if mode == "syntactic":
        zeros = tuple(
            tag for tag in sorted(_VEC) if is_zero_syntactic(_c(tag), m0)
        )
        item(
            "syntactic zero flags",
            str(tuple(sorted(_SYNTACTIC_ZEROS))),
            str(zeros),
        )
    else:
        zeros = tuple(
            tag for tag in sorted(_VEC) if not sets.admissible(_c(tag))
        )
        item("semantic zero flags", str(()), str(zeros))

    pruned_a = _pruned(sets, trace_a.final, m0, mode)
    pruned_b = _pruned(sets, trace_b.final, m0, mode)
    adm_a = sets.disjunction_admissible(pruned_a)
    adm_b = sets.disjunction_admissible(pruned_b)
    adm_original = sets.admissible(c)

    if mode == "syntactic":
        item("admissible union, order t1,t2: empty", "0 markings", f"{len(adm_a)} markings")
        surviving = sets.admissible(_c("t2@p3,t1@p2"))
        item(
            "admissible union, order t2,t1: equals surviving member's set",
            "equal and nonempty",
            "equal and nonempty"
            if adm_b == surviving and adm_b
            else f"union {len(adm_b)} vs member {len(surviving)}",
        )
    item(
        "initial marking lost under order t1,t2",
        "absent",
        "absent" if m0 not in adm_a else "present",
    )
    item(
        "initial marking kept under order t2,t1",
        "present",
        "present" if m0 in adm_b else "absent",
    )
    item(
        "original constraint admits initial marking",
        "present",
        "present" if m0 in adm_original else "absent",
    )
    disagreement = make_verdict(
        "A[order t1,t2]", adm_a, "A[order t2,t1]", adm_b, mode
    )
    item(
        "transformation orders disagree, initial marking is a witness",
        "unequal, witness " + _fmt_marking(m0),
        (
            "unequal, witness " + _fmt_marking(m0)
            if not disagreement.equal and m0 in set(disagreement.witnesses)
            else ("equal" if disagreement.equal else "unequal, other witnesses")
        ),
    )
    return VerificationReport(mode=mode, items=tuple(items))


# ---------------------------------------------------------------------------
# Randomized hunter.


@dataclass(frozen=True)
class HuntConfig:
    """Generator caps and resource limits for one hunt.

    ``include_reference`` swaps the bundled counterexample in as trial 0.
    """

    seed: int = 0
    trials: int = 100
    max_places: int = 6
    max_transitions: int = 6
    max_initial_tokens: int = 6
    arc_density: float = 0.35
    uncontrollable_fraction: float = 0.7
    weight_cap: int = 3
    bound_cap: int = 6
    limits: ExploreLimits = field(default_factory=lambda: ExploreLimits(4000, 64))
    max_permuted: int = 6
    witness_cap: int = 5
    include_reference: bool = False

    def __post_init__(self):
        if min(
            self.trials,
            self.max_places,
            self.max_transitions,
            self.weight_cap,
            self.bound_cap,
            self.max_permuted,
            self.witness_cap,
        ) < 1:
            raise ValueError("hunt caps must be >= 1")
        if self.max_initial_tokens < 0:
            raise ValueError("max_initial_tokens must be >= 0")
        for name, frac in (
            ("arc_density", self.arc_density),
            ("uncontrollable_fraction", self.uncontrollable_fraction),
        ):
            if not 0.0 <= frac <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def trial_seed(master_seed: int, index: int) -> int:
    digest = hashlib.blake2b(
        f"{master_seed}:{index}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big") >> 1


def random_instance(
    rng: random.Random, config: HuntConfig
) -> tuple[OrdinaryNet, Marking, LinearConstraint]:
    """Draw a connected-ish random instance: every transition gets at least
    one input and one output arc so the net is not trivially dead."""
    n_places = rng.randint(1, config.max_places)
    n_transitions = rng.randint(1, config.max_transitions)
    places = tuple(f"p{i + 1}" for i in range(n_places))
    rows = []
    for j in range(n_transitions):
        controllable = rng.random() >= config.uncontrollable_fraction
        pre = [p for p in places if rng.random() < config.arc_density]
        if not pre:
            pre = [places[rng.randrange(n_places)]]
        post = [p for p in places if rng.random() < config.arc_density]
        if not post:
            post = [places[rng.randrange(n_places)]]
        rows.append((f"t{j + 1}", controllable, pre, post))
    net = make_net(places, rows)
    m0 = tuple(rng.randint(0, config.max_initial_tokens) for _ in places)
    weights = tuple(rng.randint(0, config.weight_cap) for _ in places)
    bound = rng.randint(0, config.bound_cap)
    return net, m0, LinearConstraint(weights, bound)


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    places: int
    transitions: int
    status: str  # ok | skipped-unbounded | skipped-cap | skipped-permutations | error
    admissible_input: bool = False
    orders_checked: int = 0
    order_sensitive: bool = False
    original_mismatch: bool = False
    weak_admissibility_violation: bool = False
    nonconvergent: bool = False
    witness: Optional[Marking] = None
    error: Optional[str] = None

    @property
    def flagged(self) -> bool:
        return self.order_sensitive or self.original_mismatch


@dataclass(frozen=True)
class HuntReport:
    config: HuntConfig
    trials: tuple[TrialRecord, ...]

    def flagged(self) -> tuple[TrialRecord, ...]:
        return tuple(t for t in self.trials if t.flagged)

    def counts(self) -> dict[str, int]:
        out = {
            "trials": len(self.trials),
            "flagged": len(self.flagged()),
            "order_sensitive": sum(t.order_sensitive for t in self.trials),
            "original_mismatch": sum(t.original_mismatch for t in self.trials),
            "weak_admissibility_violations": sum(
                t.weak_admissibility_violation for t in self.trials
            ),
            "nonconvergent": sum(t.nonconvergent for t in self.trials),
            "errors": sum(t.status == "error" for t in self.trials),
        }
        for status in (
            "ok",
            "skipped-unbounded",
            "skipped-cap",
            "skipped-permutations",
        ):
            out[status] = sum(t.status == status for t in self.trials)
        return out


def _run_trial(config: HuntConfig, index: int) -> TrialRecord:
    seed = trial_seed(config.seed, index)
    rng = random.Random(seed)
    if index == 0 and config.include_reference:
        net, m0, c = counterexample_instance()
    else:
        net, m0, c = random_instance(rng, config)
    record = TrialRecord(
        index=index,
        seed=seed,
        places=net.place_count,
        transitions=len(net.transitions),
        status="ok",
    )
    try:
        graph = reach_complete(net, m0, None, config.limits)
    except LikelyUnboundedError:
        return replace(record, status="skipped-unbounded")
    except CapExceededError:
        return replace(record, status="skipped-cap")

    sets = MarkingSets(net, graph)
    problem = _self_check(net, graph, sets, c)
    if problem:
        return replace(record, status="error", error=problem)

    record = replace(record, admissible_input=is_admissible(net, c))

    # Tight member caps: a trial whose transformation blows up into thousands
    # of constraints is recorded and skipped rather than ground through.
    try:
        trace = transform_to_weak_admissible(
            net, c, "declaration", max_rounds=25, max_members=500
        )
        violation = any(not is_weakly_admissible(net, m) for m in trace.final)
        record = replace(record, weak_admissibility_violation=violation)
    except (NonConvergenceError, CapExceededError):
        record = replace(record, nonconvergent=True)

    try:
        report = order_sensitivity(
            net,
            m0,
            c,
            limits=config.limits,
            mode="syntactic",
            max_permuted=config.max_permuted,
            witness_cap=config.witness_cap,
            max_members=2000,
        )
    except PermutationCapExceededError:
        return replace(record, status="skipped-permutations")
    except CapExceededError as exc:
        return replace(record, status="skipped-cap", error=str(exc))
    except GmecError as exc:
        return replace(record, status="error", error=str(exc))
    return replace(
        record,
        orders_checked=report.order_count(),
        order_sensitive=not report.orders_all_equal,
        original_mismatch=report.any_original_mismatch,
        witness=report.first_witness(),
    )


def _self_check(net, graph, sets: MarkingSets, c: LinearConstraint) -> Optional[str]:
    """Internal consistency checks; a failure indicates a bug, not a finding."""
    legal = sets.legal(c)
    admissible = sets.admissible(c)
    if not admissible <= legal:
        return "admissible set not contained in legal set"
    gains = transition_gain(net, c)
    for src, t, dst in graph.edges:
        delta = c.dot(graph.nodes[dst]) - c.dot(graph.nodes[src])
        if delta != gains[t]:
            return (
                f"edge gain mismatch at {graph.transition_ids[t]}: "
                f"{delta} != {gains[t]}"
            )
    return None


def hunt(config: HuntConfig) -> HuntReport:
    """Run seeded random trials and record every instance where the
    transformation's outcome depends on the order, or fails to match the
    original constraint.  Deterministic for a fixed config; per-trial
    errors are recorded, never raised."""
    trials = tuple(_run_trial(config, i) for i in range(config.trials))
    return HuntReport(config=config, trials=trials)


def replay_trial(config: HuntConfig, index: int) -> TrialRecord:
    """Re-run a single trial of a hunt; flags must reproduce exactly."""
    if not 0 <= index < config.trials:
        raise ValueError(f"trial index {index} out of range")
    return _run_trial(config, index)
