"""Bundled counterexample instance.

A five-place, four-transition net (every transition uncontrollable) with
the constraint (1,0,0,1,1)*m <= 3 at initial marking (0,1,2,0,0).  On
this instance, transforming the constraint at t1 before t2 and at t2
before t1 produce constraint sets whose admissible marking sets differ,
so the two orders are not interchangeable.  The analysis module re-derives
every step of that computation; the state space has 14 markings.
"""

from __future__ import annotations

from gmec.constraints import LinearConstraint
from gmec.net import Marking, OrdinaryNet, make_net


def counterexample_net() -> OrdinaryNet:
    return make_net(
        places=("p1", "p2", "p3", "p4", "p5"),
        transitions=(
            ("t1", False, ("p2", "p3"), ("p1", "p4")),
            ("t2", False, ("p3",), ("p5",)),
            ("t3", False, ("p4",), ("p5",)),
            ("t4", False, ("p5",), ("p1",)),
        ),
    )


def counterexample_marking() -> Marking:
    return (0, 1, 2, 0, 0)


def counterexample_constraint() -> LinearConstraint:
    return LinearConstraint((1, 0, 0, 1, 1), 3)


def counterexample_instance() -> tuple[OrdinaryNet, Marking, LinearConstraint]:
    return counterexample_net(), counterexample_marking(), counterexample_constraint()
