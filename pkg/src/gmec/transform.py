"""Constraint transformation at uncontrollable transitions.

The basic move shifts a transition's positive gain onto one of its input
places, raising that place's weight so the transition can no longer push
the weighted sum over the bound unnoticed.  Taking that move at every
input place yields the transition's complement weight set; applying it
member-wise walks a whole constraint set forward.  Iterating over the
uncontrollable transitions drives every member towards weak
admissibility, but the outcome depends on the order in which transitions
are visited - the analysis module explores exactly that sensitivity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from gmec.constraints import (
    LinearConstraint,
    is_weakly_admissible,
    is_zero_semantic,
    is_zero_syntactic,
    sorted_constraints,
    transition_gain,
)
from gmec.errors import (
    CapExceededError,
    GainNotPositiveError,
    NonConvergenceError,
    NotUncontrollableError,
)
from gmec.net import OrdinaryNet
from gmec.reachability import DEFAULT_LIMITS, ExploreLimits


@dataclass(frozen=True)
class TransformStep:
    """One elementary application: either a gain shift onto ``place`` or,
    when ``place`` is None, the identity branch (gain not positive)."""

    source: LinearConstraint
    transition: str
    place: Optional[str]
    result: LinearConstraint


@dataclass(frozen=True)
class TraceStage:
    transition: str
    before: frozenset
    after: frozenset
    steps: tuple[TransformStep, ...]


@dataclass(frozen=True)
class TransformTrace:
    initial: frozenset
    stages: tuple[TraceStage, ...]

    @property
    def final(self) -> frozenset:
        return self.stages[-1].after if self.stages else self.initial

    def order(self) -> tuple[str, ...]:
        return tuple(stage.transition for stage in self.stages)


def _require_uncontrollable(net: OrdinaryNet, tid: str) -> int:
    idx = net.transition_index(tid)
    if net.transitions[idx].controllable:
        raise NotUncontrollableError(tid)
    return idx


def gain_shift(
    net: OrdinaryNet, c: LinearConstraint, tid: str, pid: str
) -> LinearConstraint:
    """Add the transition's current gain to the weight of input place ``pid``.

    Leaves the constraint untouched when ``pid`` is not an input place of
    the transition; the bound never changes.
    """
    idx = _require_uncontrollable(net, tid)
    t = net.transitions[idx]
    p = net.place_index(pid)
    if pid not in t.pre:
        return c
    gain = transition_gain(net, c)[idx]
    weights = list(c.weights)
    weights[p] += gain
    return LinearConstraint(tuple(weights), c.bound)


def complement_weight_set(
    net: OrdinaryNet, c: LinearConstraint, tid: str
) -> frozenset:
    """Gain shifts at every input place of a positive-gain transition."""
    idx = _require_uncontrollable(net, tid)
    gain = transition_gain(net, c)[idx]
    if gain <= 0:
        raise GainNotPositiveError(tid, gain)
    t = net.transitions[idx]
    return frozenset(
        gain_shift(net, c, tid, pid)
        for pid in sorted(t.pre, key=net.place_index)
    )


def transform_at(net: OrdinaryNet, c: LinearConstraint, tid: str) -> frozenset:
    """Complement weight set when the gain is positive, identity otherwise."""
    idx = _require_uncontrollable(net, tid)
    if transition_gain(net, c)[idx] <= 0:
        return frozenset((c,))
    return complement_weight_set(net, c, tid)


def transform_set_at(net: OrdinaryNet, members: Iterable, tid: str) -> frozenset:
    """Member-wise transformation of a whole constraint set at ``tid``."""
    out: frozenset = frozenset()
    for c in frozenset(members):
        out |= transform_at(net, c, tid)
    return out


def _stage(net: OrdinaryNet, members: frozenset, tid: str) -> TraceStage:
    idx = _require_uncontrollable(net, tid)
    t = net.transitions[idx]
    places = sorted(t.pre, key=net.place_index)
    steps: list[TransformStep] = []
    after: frozenset = frozenset()
    for c in sorted_constraints(members):
        if transition_gain(net, c)[idx] <= 0:
            steps.append(TransformStep(c, tid, None, c))
            after |= frozenset((c,))
        else:
            for pid in places:
                shifted = gain_shift(net, c, tid, pid)
                steps.append(TransformStep(c, tid, pid, shifted))
                after |= frozenset((shifted,))
    return TraceStage(tid, members, after, tuple(steps))


def apply_sequence(
    net: OrdinaryNet,
    c: LinearConstraint,
    order: Sequence[str],
    max_members: Optional[int] = None,
) -> TransformTrace:
    """Transform ``{c}`` at each listed uncontrollable transition in turn.

    ``order`` may repeat transitions.  ``max_members`` guards against the
    multiplicative blowup of the member set (CapExceededError).
    """
    members = frozenset((c,))
    stages: list[TraceStage] = []
    for tid in order:
        stage = _stage(net, members, tid)
        members = stage.after
        stages.append(stage)
        if max_members is not None and len(members) > max_members:
            raise CapExceededError(
                "max-members", f"{len(members)} constraints after {tid}"
            )
    return TransformTrace(frozenset((c,)), tuple(stages))


def _resolve_policy(net: OrdinaryNet, policy: Union[str, Iterable[str]]) -> tuple[str, ...]:
    if policy == "declaration":
        return net.uncontrollable_ids()
    if policy == "reverse":
        return tuple(reversed(net.uncontrollable_ids()))
    if isinstance(policy, str):
        raise ValueError(
            f"policy must be 'declaration', 'reverse' or an explicit transition"
            f" list, not {policy!r}"
        )
    order = tuple(policy)
    for tid in order:
        _require_uncontrollable(net, tid)
    return order


def transform_to_weak_admissible(
    net: OrdinaryNet,
    c: LinearConstraint,
    policy: Union[str, Iterable[str]] = "declaration",
    max_rounds: int = 100,
    max_members: Optional[int] = None,
) -> TransformTrace:
    """Sweep the transformation until every member is weakly admissible.

    Each sweep visits the policy's transitions in order and transforms the
    whole set at any transition showing a positive gain under some member
    that is not yet weakly admissible.  Termination is not guaranteed in
    general - raising one place's weight can create positive gains at the
    transitions feeding that place - so the sweep count is capped and a
    recurring member set is reported instead of looping.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    order = _resolve_policy(net, policy)
    members = frozenset((c,))
    stages: list[TraceStage] = []
    seen = {members}
    for _ in range(max_rounds):
        if all(is_weakly_admissible(net, m) for m in members):
            return TransformTrace(frozenset((c,)), tuple(stages))
        for tid in order:
            idx = net.transition_index(tid)
            triggered = any(
                not is_weakly_admissible(net, m)
                and transition_gain(net, m)[idx] > 0
                for m in members
            )
            if not triggered:
                continue
            stage = _stage(net, members, tid)
            members = stage.after
            stages.append(stage)
            if max_members is not None and len(members) > max_members:
                raise CapExceededError(
                    "max-members", f"{len(members)} constraints after {tid}"
                )
        if members in seen:
            raise NonConvergenceError(len(stages), members, cycle=True)
        seen.add(members)
    if all(is_weakly_admissible(net, m) for m in members):
        return TransformTrace(frozenset((c,)), tuple(stages))
    raise NonConvergenceError(max_rounds, members, cycle=False)


def prune_zero(
    members: Iterable,
    m0,
    mode: str = "syntactic",
    net: Optional[OrdinaryNet] = None,
    limits: ExploreLimits = DEFAULT_LIMITS,
) -> frozenset:
    """Drop zero members; the disjunction's meaning is unchanged.

    ``syntactic`` drops members the initial marking already violates;
    ``semantic`` drops members whose admissible set is empty (needs the
    net for reachability).
    """
    members = frozenset(members)
    if mode == "syntactic":
        return frozenset(c for c in members if not is_zero_syntactic(c, m0))
    if mode == "semantic":
        if net is None:
            raise ValueError("semantic pruning needs the net")
        return frozenset(
            c for c in members if not is_zero_semantic(net, m0, c, limits)
        )
    raise ValueError(f"mode must be 'syntactic' or 'semantic', not {mode!r}")
