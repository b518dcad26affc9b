"""Ordinary Petri net structure, validation, and token-game semantics.

Every arc has weight 1.  Places and transitions keep their declaration
order, which fixes the index order of markings, weight vectors and gain
vectors everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from gmec.errors import NotEnabledError, UnknownPlaceError, UnknownTransitionError

Marking = tuple[int, ...]


@dataclass(frozen=True)
class Transition:
    tid: str
    controllable: bool
    pre: frozenset[str]
    post: frozenset[str]


@dataclass(frozen=True)
class OrdinaryNet:
    places: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        # Lookup tables tolerate duplicate ids (last one wins) so that
        # validate() can still run on malformed nets.
        object.__setattr__(
            self, "_place_index", {p: i for i, p in enumerate(self.places)}
        )
        object.__setattr__(
            self, "_tid_index", {t.tid: i for i, t in enumerate(self.transitions)}
        )

    @property
    def place_count(self) -> int:
        return len(self.places)

    def place_index(self, pid: str) -> int:
        try:
            return self._place_index[pid]
        except KeyError:
            raise UnknownPlaceError(pid) from None

    def transition_index(self, tid: str) -> int:
        try:
            return self._tid_index[tid]
        except KeyError:
            raise UnknownTransitionError(tid) from None

    def transition(self, tid: str) -> Transition:
        return self.transitions[self.transition_index(tid)]

    def transition_ids(self) -> tuple[str, ...]:
        return tuple(t.tid for t in self.transitions)

    def uncontrollable_ids(self) -> tuple[str, ...]:
        return tuple(t.tid for t in self.transitions if not t.controllable)


def make_net(
    places: Iterable[str],
    transitions: Iterable[tuple[str, bool, Iterable[str], Iterable[str]]],
) -> OrdinaryNet:
    """Build a net from ``(tid, controllable, pre, post)`` rows."""
    rows = tuple(
        Transition(tid, bool(ctrl), frozenset(pre), frozenset(post))
        for tid, ctrl, pre, post in transitions
    )
    return OrdinaryNet(tuple(places), rows)


@dataclass(frozen=True)
class StructuralIssue:
    kind: str  # "empty-places" | "empty-transitions" | "duplicate-id" | "dangling-arc"
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}({self.subject}): {self.detail}"


def validate(net: OrdinaryNet) -> list[StructuralIssue]:
    """Check the structural invariants; an empty list means the net is valid."""
    issues: list[StructuralIssue] = []
    if not net.places:
        issues.append(StructuralIssue("empty-places", "", "net declares no places"))
    if not net.transitions:
        issues.append(
            StructuralIssue("empty-transitions", "", "net declares no transitions")
        )

    seen: set[str] = set()
    for pid in net.places:
        if pid in seen:
            issues.append(
                StructuralIssue("duplicate-id", pid, f"place {pid!r} declared twice")
            )
        seen.add(pid)
    for t in net.transitions:
        if t.tid in seen:
            issues.append(
                StructuralIssue(
                    "duplicate-id", t.tid, f"id {t.tid!r} declared more than once"
                )
            )
        seen.add(t.tid)

    declared = set(net.places)
    for t in net.transitions:
        for side, members in (("pre", t.pre), ("post", t.post)):
            for pid in sorted(members):
                if pid not in declared:
                    issues.append(
                        StructuralIssue(
                            "dangling-arc",
                            pid,
                            f"{side} arc of {t.tid!r} names undeclared place {pid!r}",
                        )
                    )
    return issues


def preset(net: OrdinaryNet, tid: str) -> frozenset[str]:
    """Input places of a transition."""
    return net.transition(tid).pre


def postset(net: OrdinaryNet, tid: str) -> frozenset[str]:
    """Output places of a transition."""
    return net.transition(tid).post


def incidence(net: OrdinaryNet) -> tuple[tuple[int, ...], ...]:
    """Token-change matrix, places x transitions.

    Entry (p, t) is +1 when t produces into p, -1 when t consumes from p,
    and 0 otherwise; a self-loop contributes 0.  A column therefore gives
    the marking change caused by firing that transition.
    """
    rows = []
    for pid in net.places:
        rows.append(
            tuple(
                int(pid in t.post) - int(pid in t.pre) for t in net.transitions
            )
        )
    return tuple(rows)


def check_marking(net: OrdinaryNet, marking: Sequence[int]) -> Marking:
    """Normalize and validate a marking against the net's place list."""
    m = tuple(int(x) for x in marking)
    if len(m) != net.place_count:
        raise ValueError(
            f"marking has {len(m)} entries, net declares {net.place_count} places"
        )
    if any(x < 0 for x in m):
        raise ValueError(f"marking {m} has a negative token count")
    return m


def is_enabled(net: OrdinaryNet, tid: str, marking: Sequence[int]) -> bool:
    m = check_marking(net, marking)
    t = net.transition(tid)
    return all(m[net.place_index(p)] >= 1 for p in t.pre)


def fire(net: OrdinaryNet, tid: str, marking: Sequence[int]) -> Marking:
    """Fire an enabled transition: consume one token per input place, produce
    one per output place."""
    m = check_marking(net, marking)
    t = net.transition(tid)
    if not all(m[net.place_index(p)] >= 1 for p in t.pre):
        raise NotEnabledError(tid, m)
    out = list(m)
    for p in t.pre:
        out[net.place_index(p)] -= 1
    for p in t.post:
        out[net.place_index(p)] += 1
    return tuple(out)
