"""Shared fixtures and independent oracles.

The oracle helpers re-implement the token game and the set definitions
directly from the net structure (dict/deque breadth-first search, per-node
forward closures) so that library results are checked against a second,
unrelated code path.
"""

from __future__ import annotations

import random
from collections import deque

import pytest
from hypothesis import HealthCheck, settings

from gmec.analysis import HuntConfig, random_instance, trial_seed
from gmec.fixtures import (
    counterexample_constraint,
    counterexample_instance,
    counterexample_marking,
    counterexample_net,
)

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("suite")


# The full state space of the bundled instance, found by hand and confirmed
# by brute_reach below.
REF_MARKINGS = frozenset(
    {
        (0, 1, 2, 0, 0),
        (1, 0, 1, 1, 0),
        (0, 1, 1, 0, 1),
        (1, 0, 0, 1, 1),
        (1, 0, 1, 0, 1),
        (0, 1, 0, 0, 2),
        (1, 1, 1, 0, 0),
        (1, 0, 0, 0, 2),
        (2, 0, 0, 1, 0),
        (2, 0, 1, 0, 0),
        (1, 1, 0, 0, 1),
        (2, 0, 0, 0, 1),
        (2, 1, 0, 0, 0),
        (3, 0, 0, 0, 0),
    }
)


@pytest.fixture(scope="session")
def ref_net():
    return counterexample_net()


@pytest.fixture(scope="session")
def ref_m0():
    return counterexample_marking()


@pytest.fixture(scope="session")
def ref_constraint():
    return counterexample_constraint()


@pytest.fixture(scope="session")
def ref_instance():
    return counterexample_instance()


# ---------------------------------------------------------------------------
# Brute-force oracles (independent of the library's kernels and closures).


def brute_fire(net, marking, t):
    index = {p: i for i, p in enumerate(net.places)}
    if any(marking[index[p]] < 1 for p in t.pre):
        return None
    out = list(marking)
    for p in t.pre:
        out[index[p]] -= 1
    for p in t.post:
        out[index[p]] += 1
    return tuple(out)


def brute_reach(net, m0, allowed=None):
    """Plain set-based closure; ``allowed`` is a set of transition ids."""
    seen = {tuple(m0)}
    frontier = deque([tuple(m0)])
    while frontier:
        m = frontier.popleft()
        for t in net.transitions:
            if allowed is not None and t.tid not in allowed:
                continue
            child = brute_fire(net, m, t)
            if child is not None and child not in seen:
                seen.add(child)
                frontier.append(child)
    return seen


def brute_uc_reach(net, m0):
    return brute_reach(net, m0, {t.tid for t in net.transitions if not t.controllable})


def brute_legal(net, m0, c):
    return {
        m
        for m in brute_reach(net, m0)
        if sum(w * x for w, x in zip(c.weights, m)) <= c.bound
    }


def brute_admissible(net, m0, c):
    """Per-node forward closure: admit m iff every marking reachable from m
    through uncontrollable firings satisfies the constraint."""

    def legal(m):
        return sum(w * x for w, x in zip(c.weights, m)) <= c.bound

    out = set()
    for m in brute_reach(net, m0):
        if all(legal(x) for x in brute_uc_reach(net, m)):
            out.add(m)
    return out


# ---------------------------------------------------------------------------
# Seeded random corpus for property and oracle-agreement tests.


def bounded_corpus(count, master_seed=1234, config=None, attempt_cap=4000):
    """Yield ``count`` random instances whose full state space fits the
    configured limits, together with an upper bound on generation attempts.
    Unbounded or oversized draws are skipped, which keeps the corpus cheap
    and the enumeration deterministic."""
    from gmec.errors import CapExceededError, LikelyUnboundedError
    from gmec.reachability import reach_complete

    config = config or HuntConfig(seed=master_seed, trials=attempt_cap)
    produced = 0
    for index in range(attempt_cap):
        if produced >= count:
            return
        rng = random.Random(trial_seed(master_seed, index))
        net, m0, c = random_instance(rng, config)
        try:
            graph = reach_complete(net, m0, None, config.limits)
        except (LikelyUnboundedError, CapExceededError):
            continue
        produced += 1
        yield net, m0, c, graph
    raise RuntimeError(f"corpus generation exhausted after {attempt_cap} attempts")
