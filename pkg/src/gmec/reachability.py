"""Explicit-state reachability: exhaustive marking enumeration with guards.

``reach`` computes the closure of a marking under a chosen transition set;
restricting that set to the uncontrollable transitions gives the runs a
supervisor cannot prevent.  Exploration is plain breadth-first search over
exact markings; state spaces in this problem domain are small, so no
reduction techniques are applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from gmec import _kernel
from gmec.errors import (
    CapExceededError,
    InvalidNetError,
    LikelyUnboundedError,
    UnknownTransitionError,
)
from gmec.net import Marking, OrdinaryNet, check_marking, validate


@dataclass(frozen=True)
class ExploreLimits:
    """Resource caps for one exploration run."""

    max_markings: int = 100_000
    max_tokens_per_place: int = 255

    def __post_init__(self):
        if self.max_markings < 1 or self.max_tokens_per_place < 1:
            raise ValueError("exploration limits must be >= 1")


DEFAULT_LIMITS = ExploreLimits()


@dataclass(frozen=True)
class ReachGraph:
    """Explicit marking graph rooted at ``root``.

    ``nodes`` are in breadth-first discovery order; ``edges`` are
    ``(source node index, transition index, target node index)`` triples in
    generation order.  ``complete`` is false when a resource cap stopped the
    exploration, in which case ``stop_reason`` names the cap.
    """

    root: Marking
    nodes: tuple[Marking, ...]
    edges: tuple[tuple[int, int, int], ...]
    transition_ids: tuple[str, ...]
    complete: bool
    stop_reason: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {m: i for i, m in enumerate(self.nodes)}
        )

    def __contains__(self, marking: Marking) -> bool:
        return marking in self._index

    def __len__(self) -> int:
        return len(self.nodes)

    def node_index(self, marking: Marking) -> int:
        return self._index[marking]

    def node_set(self) -> frozenset[Marking]:
        return frozenset(self.nodes)

    def edge_triples(self) -> Iterator[tuple[Marking, str, Marking]]:
        """Edges as (source marking, transition id, target marking)."""
        for src, t, dst in self.edges:
            yield self.nodes[src], self.transition_ids[t], self.nodes[dst]


@lru_cache(maxsize=256)
def _compiled_arcs(net: OrdinaryNet) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    issues = validate(net)
    if issues:
        raise InvalidNetError(issues)
    pre = tuple(
        tuple(sorted(net.place_index(p) for p in t.pre)) for t in net.transitions
    )
    post = tuple(
        tuple(sorted(net.place_index(p) for p in t.post)) for t in net.transitions
    )
    return pre, post


def reach(
    net: OrdinaryNet,
    marking,
    allowed: Optional[Iterable[str]] = None,
    limits: ExploreLimits = DEFAULT_LIMITS,
) -> ReachGraph:
    """Breadth-first closure of ``marking`` under firings of ``allowed``.

    ``allowed`` defaults to every transition.  When the marking cap or the
    per-place token cap is hit the partial graph is returned with
    ``complete=False``; a marking that strictly dominates one of its
    search-tree ancestors raises :class:`LikelyUnboundedError` instead,
    since waiting for the cap would only delay the same bad news.
    """
    root = check_marking(net, marking)
    pre, post = _compiled_arcs(net)
    if allowed is None:
        allowed_idx = tuple(range(len(net.transitions)))
    else:
        ids = set(allowed)
        for tid in ids:
            if tid not in net.transition_ids():
                raise UnknownTransitionError(tid)
        allowed_idx = tuple(
            i for i, t in enumerate(net.transitions) if t.tid in ids
        )
    nodes, edges, status, witness = _kernel.explore(
        net.place_count,
        pre,
        post,
        allowed_idx,
        root,
        limits.max_markings,
        limits.max_tokens_per_place,
    )
    if status == _kernel.STATUS_DOMINATION:
        child, ancestor = witness
        raise LikelyUnboundedError(child, ancestor)
    reason = {
        _kernel.STATUS_MARKING_CAP: "max-markings",
        _kernel.STATUS_TOKEN_CAP: "max-tokens",
    }.get(status)
    return ReachGraph(
        root=root,
        nodes=tuple(nodes),
        edges=tuple(edges),
        transition_ids=net.transition_ids(),
        complete=status == _kernel.STATUS_COMPLETE,
        stop_reason=reason,
    )


def uc_reach(
    net: OrdinaryNet, marking, limits: ExploreLimits = DEFAULT_LIMITS
) -> ReachGraph:
    """Closure under uncontrollable firings only."""
    return reach(net, marking, net.uncontrollable_ids(), limits)


def reach_complete(
    net: OrdinaryNet,
    marking,
    allowed: Optional[Iterable[str]] = None,
    limits: ExploreLimits = DEFAULT_LIMITS,
) -> ReachGraph:
    """Like :func:`reach`, but a capped exploration raises CapExceededError."""
    graph = reach(net, marking, allowed, limits)
    if not graph.complete:
        raise CapExceededError(
            graph.stop_reason or "unknown",
            f"exploration stopped after {len(graph)} markings",
        )
    return graph
