"""Acceptance suite: one test per release criterion.

Each criterion prints its own PASS/FAIL line (visible with ``pytest -s``
or in captured output) and asserts exactly, with no tolerances - every
quantity here is integral or a finite set.
"""

import time
from contextlib import contextmanager

from gmec.analysis import (
    HuntConfig,
    hunt,
    make_verdict,
    verify_counterexample,
)
from gmec.cli import main
from gmec.constraints import (
    LinearConstraint,
    MarkingSets,
    admissible_set,
    disjunction_admissible,
    is_admissible,
    is_weakly_admissible,
    is_zero_syntactic,
    transition_gain,
)
from gmec.errors import CapExceededError, NonConvergenceError
from gmec.fixtures import counterexample_instance
from gmec.net import preset, postset
from gmec.transform import (
    apply_sequence,
    gain_shift,
    prune_zero,
    transform_at,
    transform_set_at,
    transform_to_weak_admissible,
)

from conftest import bounded_corpus, brute_admissible


@contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number:02d} FAIL: {title}")
        raise
    print(f"ACCEPTANCE {number:02d} PASS: {title}")


def C(*weights, k=3):
    return LinearConstraint(tuple(weights), k)


BASE = C(1, 0, 0, 1, 1)
FIRST_MID = frozenset({C(1, 2, 0, 1, 1), C(1, 0, 2, 1, 1)})
FIRST_FINAL = frozenset({C(1, 2, 1, 1, 1), C(1, 0, 2, 1, 1)})
SECOND_MID = frozenset({C(1, 0, 1, 1, 1)})
SECOND_FINAL = frozenset({C(1, 0, 2, 1, 1), C(1, 1, 1, 1, 1)})


def test_criterion_1_first_order_vectors():
    with criterion(1, "t1-then-t2 transformation reproduces the expected vectors"):
        net, _, c = counterexample_instance()
        trace = apply_sequence(net, c, ("t1", "t2"))
        assert trace.stages[0].after == FIRST_MID
        assert trace.final == FIRST_FINAL


def test_criterion_2_second_order_vectors():
    with criterion(2, "t2-then-t1 transformation reproduces the expected vectors"):
        net, _, c = counterexample_instance()
        trace = apply_sequence(net, c, ("t2", "t1"))
        assert trace.stages[0].after == SECOND_MID
        assert trace.final == SECOND_FINAL


def test_criterion_3_products_and_zero_flags():
    with criterion(3, "initial-marking products and syntactic zero flags"):
        _, m0, _ = counterexample_instance()
        expected = [
            (C(1, 2, 0, 1, 1), 2, False),
            (C(1, 0, 2, 1, 1), 4, True),   # produced by t1@p3 and again by t2-then-t1
            (C(1, 2, 1, 1, 1), 4, True),
            (C(1, 0, 1, 1, 1), 2, False),
            (C(1, 0, 2, 1, 1), 4, True),   # the duplicate arises independently
            (C(1, 1, 1, 1, 1), 3, False),
        ]
        for vec, product, zero in expected:
            assert vec.dot(m0) == product
            assert is_zero_syntactic(vec, m0) == zero


def test_criterion_4_pruned_unions_and_disagreement(capsys):
    with criterion(4, "pruned admissible unions disagree; verify-paper exits 0"):
        net, m0, c = counterexample_instance()
        first = prune_zero(FIRST_FINAL, m0, "syntactic")
        second = prune_zero(SECOND_FINAL, m0, "syntactic")
        union_first = disjunction_admissible(net, m0, first)
        union_second = disjunction_admissible(net, m0, second)
        assert union_first == frozenset()
        surviving = admissible_set(net, m0, C(1, 1, 1, 1, 1))
        assert union_second == surviving
        assert m0 in union_second
        cell = make_verdict(
            "A[t1,t2]", union_first, "A[t2,t1]", union_second, "syntactic"
        )
        assert not cell.equal
        assert m0 in cell.witnesses
        assert verify_counterexample("syntactic").passed
        assert main(["verify-paper"]) == 0
        capsys.readouterr()


def test_criterion_5_semantic_refutation():
    with criterion(5, "equivalence fails semantically too: initial marking lost"):
        net, m0, c = counterexample_instance()
        original = admissible_set(net, m0, c)
        assert m0 in original
        semantic_union = disjunction_admissible(net, m0, FIRST_FINAL)
        assert m0 not in semantic_union
        # both members reject the initial marking outright
        for member in FIRST_FINAL:
            assert member.dot(m0) > member.bound
            assert m0 not in brute_admissible(net, m0, member)
        assert m0 in brute_admissible(net, m0, c)


def test_criterion_6_backward_closure_matches_forward_oracle():
    with criterion(6, "backward-closure admissible sets match the per-node"
                      " forward-closure oracle on 200 random instances"):
        config = HuntConfig(seed=60)
        checked = 0
        for net, m0, c, graph in bounded_corpus(200, master_seed=60, config=config):
            sets = MarkingSets(net, graph)
            assert sets.admissible(c) == brute_admissible(net, m0, c)
            checked += 1
        assert checked == 200


def test_criterion_7_exact_property_suite():
    with criterion(7, "exact property suite over a seeded corpus"):
        instances = list(bounded_corpus(150, master_seed=70))
        net0, m00, c0 = counterexample_instance()
        from gmec.reachability import reach_complete

        instances.append((net0, m00, c0, reach_complete(net0, m00)))
        for net, m0, c, graph in instances:
            sets = MarkingSets(net, graph)
            legal = sets.legal(c)
            admissible = sets.admissible(c)
            # containment chain
            assert admissible <= legal <= graph.node_set()
            # edge gains
            gains = transition_gain(net, c)
            for src, t, dst in graph.edges:
                assert c.dot(graph.nodes[dst]) - c.dot(graph.nodes[src]) == gains[t]
            # admissibility collapses the sets
            if is_admissible(net, c):
                assert admissible == legal
            if is_weakly_admissible(net, c):
                assert admissible == legal
            # shift shape, post-shift gain, identity branch, member-wise union
            for i, t in enumerate(net.transitions):
                if t.controllable:
                    continue
                if gains[i] <= 0:
                    assert transform_at(net, c, t.tid) == {c}
                    continue
                for pid in sorted(t.pre):
                    shifted = gain_shift(net, c, t.tid, pid)
                    assert shifted.bound == c.bound
                    p = net.place_index(pid)
                    assert all(
                        shifted.weights[j] == c.weights[j]
                        for j in range(net.place_count)
                        if j != p
                    )
                    assert shifted.weights[p] == c.weights[p] + gains[i]
                    if pid in preset(net, t.tid) and pid not in postset(net, t.tid):
                        assert transition_gain(net, shifted)[i] == 0
                members = frozenset(
                    {c, LinearConstraint(tuple(w + 1 for w in c.weights), c.bound)}
                )
                union = frozenset()
                for member in members:
                    union |= transform_at(net, member, t.tid)
                assert transform_set_at(net, members, t.tid) == union


def test_criterion_8_convergent_outputs_weakly_admissible():
    with criterion(8, "iterated transformation outputs are weakly admissible"):
        violations = 0
        convergent = 0
        for net, m0, c, _ in bounded_corpus(200, master_seed=80):
            try:
                trace = transform_to_weak_admissible(
                    net, c, "declaration", max_rounds=40, max_members=2000
                )
            except (NonConvergenceError, CapExceededError):
                continue
            convergent += 1
            violations += sum(
                not is_weakly_admissible(net, member) for member in trace.final
            )
        print(f"  weak-admissibility findings: {violations} in {convergent} convergent runs")
        assert convergent > 100
        assert violations == 0


def test_criterion_9_hunt_determinism_and_budget(tmp_path, capsys):
    with criterion(9, "hunt --seed 42 --trials 200 is byte-identical and fast"):
        outputs = []
        for name in ("a.json", "b.json"):
            path = tmp_path / name
            start = time.monotonic()
            code = main(
                ["hunt", "--seed", "42", "--trials", "200", "--json",
                 "--out", str(path)]
            )
            elapsed = time.monotonic() - start
            assert code == 0
            assert elapsed < 60.0, f"hunt took {elapsed:.1f}s"
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]
        # the human rendering is deterministic as well
        texts = []
        for name in ("a.txt", "b.txt"):
            path = tmp_path / name
            assert main(["hunt", "--seed", "42", "--trials", "200",
                         "--out", str(path)]) == 0
            texts.append(path.read_bytes())
        assert texts[0] == texts[1]
        capsys.readouterr()
