"""Linear marking constraints and their legal/admissible marking sets.

A constraint bounds a weighted token sum: a marking m satisfies (w, k)
when w·m <= k.  Place weights are nonnegative; the bound may be any
integer.  A finite set of constraints is read disjunctively: a marking is
acceptable when at least one member admits it, so legal and admissible
sets of a disjunction are member-wise unions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from gmec.errors import NegativeWeightError
from gmec.net import Marking, OrdinaryNet
from gmec.reachability import (
    DEFAULT_LIMITS,
    ExploreLimits,
    ReachGraph,
    reach_complete,
)


@dataclass(frozen=True)
class LinearConstraint:
    """Requirement ``weights·m <= bound`` with nonnegative place weights."""

    weights: tuple[int, ...]
    bound: int

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise NegativeWeightError(
                f"constraint weights must be nonnegative, got {self.weights}"
            )

    def dot(self, marking: Sequence[int]) -> int:
        return sum(w * x for w, x in zip(self.weights, marking))

    def satisfied_by(self, marking: Sequence[int]) -> bool:
        return self.dot(marking) <= self.bound

    def __str__(self) -> str:
        return f"({','.join(str(w) for w in self.weights)})*m <= {self.bound}"


ConstraintSet = frozenset  # of LinearConstraint


def make_constraint(weights: Iterable[int], bound: int) -> LinearConstraint:
    return LinearConstraint(tuple(int(w) for w in weights), int(bound))


def constraint_sort_key(c: LinearConstraint) -> tuple:
    return (c.weights, c.bound)


def sorted_constraints(members: Iterable[LinearConstraint]) -> list[LinearConstraint]:
    return sorted(members, key=constraint_sort_key)


def _check_conformant(net: OrdinaryNet, c: LinearConstraint) -> None:
    if len(c.weights) != net.place_count:
        raise ValueError(
            f"constraint has {len(c.weights)} weights, net declares "
            f"{net.place_count} places"
        )


@lru_cache(maxsize=1 << 16)
def _gain_vector(net: OrdinaryNet, c: LinearConstraint) -> tuple[int, ...]:
    # Memoized: the transformation sweeps re-query the same (net, constraint)
    # pairs constantly.
    w = c.weights
    gains = []
    for t in net.transitions:
        delta = 0
        for p in t.post:
            delta += w[net.place_index(p)]
        for p in t.pre:
            delta -= w[net.place_index(p)]
        gains.append(delta)
    return tuple(gains)


def transition_gain(net: OrdinaryNet, c: LinearConstraint) -> tuple[int, ...]:
    """Per-transition change of the weighted token sum.

    Entry t equals the weight of t's output places minus the weight of its
    input places, i.e. the amount w·m moves when t fires; equivalently the
    product of the weight vector with the incidence matrix.
    """
    _check_conformant(net, c)
    return _gain_vector(net, c)


def is_admissible(net: OrdinaryNet, c: LinearConstraint) -> bool:
    """No uncontrollable firing can increase the weighted sum."""
    gains = transition_gain(net, c)
    return all(
        gains[i] <= 0
        for i, t in enumerate(net.transitions)
        if not t.controllable
    )


@lru_cache(maxsize=1 << 16)
def _weakly_admissible(net: OrdinaryNet, c: LinearConstraint) -> bool:
    gains = _gain_vector(net, c)
    for i, t in enumerate(net.transitions):
        if t.controllable or gains[i] <= 0:
            continue
        if not any(c.weights[net.place_index(p)] > c.bound for p in t.pre):
            return False
    return True


def is_weakly_admissible(net: OrdinaryNet, c: LinearConstraint) -> bool:
    """Every positive-gain uncontrollable transition has an input place whose
    weight alone exceeds the bound, so it is dead at satisfying markings."""
    _check_conformant(net, c)
    return _weakly_admissible(net, c)


def legal_markings(graph: ReachGraph, c: LinearConstraint) -> frozenset[Marking]:
    """Nodes of the reachability graph satisfying the constraint."""
    return frozenset(m for m in graph.nodes if c.satisfied_by(m))


def admissible_markings(
    net: OrdinaryNet, graph: ReachGraph, c: LinearConstraint
) -> frozenset[Marking]:
    """Nodes from which every uncontrollable run stays legal.

    Computed by seeding the illegal nodes and closing backwards over the
    uncontrollable edges of the full graph: one linear pass instead of a
    forward closure per node.
    """
    return MarkingSets(net, graph).admissible(c)


class MarkingSets:
    """Legal and admissible sets over one complete reachability graph.

    Builds the reverse uncontrollable-edge adjacency once and caches the
    per-constraint results, which matters when a disjunction or an
    order-sensitivity sweep revisits the same members.
    """

    def __init__(self, net: OrdinaryNet, graph: ReachGraph):
        if not graph.complete:
            raise ValueError("marking sets need a complete reachability graph")
        self.net = net
        self.graph = graph
        uncontrollable = set(net.uncontrollable_ids())
        rev: list[list[int]] = [[] for _ in graph.nodes]
        for src, t, dst in graph.edges:
            if graph.transition_ids[t] in uncontrollable:
                rev[dst].append(src)
        self._reverse_uc = rev
        self._legal: dict[LinearConstraint, frozenset] = {}
        self._admissible: dict[LinearConstraint, frozenset] = {}

    def reachable(self) -> frozenset[Marking]:
        return self.graph.node_set()

    def legal(self, c: LinearConstraint) -> frozenset[Marking]:
        got = self._legal.get(c)
        if got is None:
            _check_conformant(self.net, c)
            got = legal_markings(self.graph, c)
            self._legal[c] = got
        return got

    def admissible(self, c: LinearConstraint) -> frozenset[Marking]:
        got = self._admissible.get(c)
        if got is None:
            got = self._compute_admissible(c)
            self._admissible[c] = got
        return got

    def _compute_admissible(self, c: LinearConstraint) -> frozenset[Marking]:
        _check_conformant(self.net, c)
        nodes = self.graph.nodes
        doomed = bytearray(len(nodes))
        stack = [i for i, m in enumerate(nodes) if not c.satisfied_by(m)]
        for i in stack:
            doomed[i] = 1
        while stack:
            i = stack.pop()
            for j in self._reverse_uc[i]:
                if not doomed[j]:
                    doomed[j] = 1
                    stack.append(j)
        return frozenset(m for i, m in enumerate(nodes) if not doomed[i])

    def disjunction_legal(self, members: Iterable[LinearConstraint]) -> frozenset:
        out: frozenset = frozenset()
        for c in members:
            out |= self.legal(c)
        return out

    def disjunction_admissible(self, members: Iterable[LinearConstraint]) -> frozenset:
        out: frozenset = frozenset()
        for c in members:
            out |= self.admissible(c)
        return out


def legal_set(
    net: OrdinaryNet, m0, c: LinearConstraint, limits: ExploreLimits = DEFAULT_LIMITS
) -> frozenset[Marking]:
    """Reachable markings satisfying the constraint."""
    return legal_markings(reach_complete(net, m0, None, limits), c)


def admissible_set(
    net: OrdinaryNet, m0, c: LinearConstraint, limits: ExploreLimits = DEFAULT_LIMITS
) -> frozenset[Marking]:
    """Reachable markings from which no uncontrollable run leaves the legal set."""
    graph = reach_complete(net, m0, None, limits)
    return admissible_markings(net, graph, c)


def disjunction_legal(
    net: OrdinaryNet, m0, members, limits: ExploreLimits = DEFAULT_LIMITS
) -> frozenset[Marking]:
    members = frozenset(members)
    if not members:
        return frozenset()
    sets = MarkingSets(net, reach_complete(net, m0, None, limits))
    return sets.disjunction_legal(members)


def disjunction_admissible(
    net: OrdinaryNet, m0, members, limits: ExploreLimits = DEFAULT_LIMITS
) -> frozenset[Marking]:
    members = frozenset(members)
    if not members:
        return frozenset()
    sets = MarkingSets(net, reach_complete(net, m0, None, limits))
    return sets.disjunction_admissible(members)


def is_zero_syntactic(c: LinearConstraint, m0) -> bool:
    """Cheap zero test: the initial marking already violates the constraint.

    This is the rule disjunction pruning conventionally applies; it implies
    the initial marking is inadmissible, but see :func:`is_zero_semantic`
    for the literal reading.
    """
    return c.dot(m0) > c.bound


def is_zero_semantic(
    net: OrdinaryNet, m0, c: LinearConstraint, limits: ExploreLimits = DEFAULT_LIMITS
) -> bool:
    """Literal zero test: the admissible set is empty.

    The two tests can disagree: an initially violated constraint may still
    admit markings deeper in the state space, so the syntactic test being
    true does not force this one to be true.
    """
    return not admissible_set(net, m0, c, limits)
