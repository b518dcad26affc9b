import random

import pytest

from gmec.analysis import (
    HuntConfig,
    equivalence_check,
    hunt,
    order_sensitivity,
    random_instance,
    replay_trial,
    trial_seed,
    verify_counterexample,
)
from gmec.constraints import LinearConstraint, admissible_set
from gmec.errors import PermutationCapExceededError
from gmec.net import make_net
from gmec.transform import apply_sequence, prune_zero

from conftest import brute_admissible


def C(*weights, k=3):
    return LinearConstraint(tuple(weights), k)


BASE = C(1, 0, 0, 1, 1)


# --------------------------------------------------------------------------
# equivalence_check


def test_equivalence_of_identity_disjunction(ref_net, ref_m0):
    v = equivalence_check(ref_net, ref_m0, BASE, {BASE})
    assert v.equal
    assert v.witnesses == ()


def test_equivalence_fails_for_first_order_output(ref_net, ref_m0):
    members = apply_sequence(ref_net, BASE, ("t1", "t2")).final
    v = equivalence_check(ref_net, ref_m0, BASE, members, mode="syntactic")
    assert not v.equal
    assert ref_m0 in v.witnesses
    assert v.right == frozenset()  # both members pruned as zero


def test_equivalence_second_order_output(ref_net, ref_m0):
    members = apply_sequence(ref_net, BASE, ("t2", "t1")).final
    v = equivalence_check(ref_net, ref_m0, BASE, members, mode="syntactic")
    # the surviving member keeps the whole space admissible here, so the
    # comparison lands equal on this reconstruction (computed, not quoted)
    assert v.right == admissible_set(ref_net, ref_m0, C(1, 1, 1, 1, 1))
    assert ref_m0 in v.right


def test_equivalence_semantic_mode(ref_net, ref_m0):
    members = apply_sequence(ref_net, BASE, ("t1", "t2")).final
    v = equivalence_check(ref_net, ref_m0, BASE, members, mode="semantic")
    assert not v.equal
    assert ref_m0 in v.witnesses
    # semantically the union is nonempty, the initial marking is just not in it
    assert v.right
    assert ref_m0 not in v.right


def test_verdict_witnesses_belong_to_one_side(ref_net, ref_m0):
    members = apply_sequence(ref_net, BASE, ("t1", "t2")).final
    v = equivalence_check(ref_net, ref_m0, BASE, members, mode="semantic")
    for marking, side in v.witness_sides():
        assert (marking in v.left) != (marking in v.right)
        assert side == ("left" if marking in v.left else "right")


def test_verdict_witness_cap(ref_net, ref_m0):
    members = apply_sequence(ref_net, BASE, ("t1", "t2")).final
    v = equivalence_check(
        ref_net, ref_m0, BASE, members, mode="syntactic", witness_cap=3
    )
    assert len(v.witnesses) == 3
    assert list(v.witnesses) == sorted(v.witnesses)


def test_mode_validation(ref_net, ref_m0):
    with pytest.raises(ValueError):
        equivalence_check(ref_net, ref_m0, BASE, {BASE}, mode="both")


# --------------------------------------------------------------------------
# order_sensitivity


def test_order_sensitivity_on_reference(ref_net, ref_m0):
    report = order_sensitivity(ref_net, ref_m0, BASE)
    assert report.orders == (("t1", "t2"), ("t2", "t1"))
    assert not report.orders_all_equal
    cell = report.verdict(0, 1)
    assert not cell.equal
    assert ref_m0 in cell.witnesses
    assert report.inequivalent_pairs() == [(0, 1)]


def test_order_sensitivity_admissible_input(ref_net, ref_m0):
    c = C(1, 1, 1, 1, 1)
    report = order_sensitivity(ref_net, ref_m0, c)
    assert report.orders == ((),)
    assert report.orders_all_equal
    assert not report.any_original_mismatch
    assert report.finals == (frozenset({c}),)


def test_order_sensitivity_semantic_loses_initial_marking(ref_net, ref_m0):
    report = order_sensitivity(ref_net, ref_m0, BASE, mode="semantic")
    first = report.orders.index(("t1", "t2"))
    v = report.vs_original[first]
    assert not v.equal
    assert ref_m0 in v.left and ref_m0 not in v.right


def test_order_sensitivity_permutation_cap(ref_m0):
    net = make_net(
        ["p1", "p2"],
        [(f"t{i}", False, ["p1"], ["p2"]) for i in range(1, 4)],
    )
    with pytest.raises(PermutationCapExceededError):
        order_sensitivity(net, (2, 0), C(0, 1, k=5), max_permuted=2)


def test_order_sensitivity_set_ids_consistent(ref_net, ref_m0):
    report = order_sensitivity(ref_net, ref_m0, BASE)
    for i, j in ((0, 0), (0, 1), (1, 1)):
        same = report.set_ids[i] == report.set_ids[j]
        assert same == report.verdict(i, j).equal


# --------------------------------------------------------------------------
# verify_counterexample


def test_verification_passes_syntactic():
    report = verify_counterexample()
    assert report.mode == "syntactic"
    assert report.passed, report.failures()
    assert len(report.items) == 12


def test_verification_passes_semantic():
    report = verify_counterexample(mode="semantic")
    assert report.passed, report.failures()


def test_verification_is_deterministic():
    a = verify_counterexample()
    b = verify_counterexample()
    assert a == b


def test_verification_negative_control(ref_m0):
    # move t2's output onto p3 (a self-loop): its gain collapses to zero and
    # the derived constraint sets change, so the vector items must fail
    perturbed = make_net(
        ["p1", "p2", "p3", "p4", "p5"],
        [
            ("t1", False, ["p2", "p3"], ["p1", "p4"]),
            ("t2", False, ["p3"], ["p3"]),
            ("t3", False, ["p4"], ["p5"]),
            ("t4", False, ["p5"], ["p1"]),
        ],
    )
    report = verify_counterexample(instance=(perturbed, ref_m0, BASE))
    assert not report.passed
    failed = {item.name for item in report.failures()}
    assert "order t1,t2: final constraints" in failed
    assert "order t2,t1: intermediate constraints" in failed
    for item in report.failures():
        assert item.expected != item.actual


# --------------------------------------------------------------------------
# hunt


def test_hunt_is_deterministic():
    cfg = HuntConfig(seed=99, trials=60)
    assert hunt(cfg) == hunt(cfg)


def test_hunt_reference_trial_is_flagged():
    cfg = HuntConfig(seed=5, trials=2, include_reference=True)
    report = hunt(cfg)
    first = report.trials[0]
    assert first.status == "ok"
    assert first.order_sensitive
    assert first.original_mismatch
    assert first.witness is not None


def test_hunt_admissible_inputs_never_flagged():
    report = hunt(HuntConfig(seed=11, trials=150))
    admissible_trials = [
        t for t in report.trials if t.status == "ok" and t.admissible_input
    ]
    assert admissible_trials, "corpus should contain admissible draws"
    assert all(not t.flagged for t in admissible_trials)


def test_hunt_records_skips_and_errors_without_raising():
    report = hunt(HuntConfig(seed=3, trials=120, max_initial_tokens=6))
    counts = report.counts()
    assert counts["trials"] == 120
    assert counts["errors"] == 0
    assert (
        counts["ok"]
        + counts["skipped-unbounded"]
        + counts["skipped-cap"]
        + counts["skipped-permutations"]
        == 120
    )


def test_hunt_flags_replay(ref_net):
    cfg = HuntConfig(seed=99, trials=200)
    report = hunt(cfg)
    flagged = report.flagged()
    assert flagged, "expected findings on this seed"
    for record in flagged[:3]:
        assert replay_trial(cfg, record.index) == record


def test_flagged_trial_confirmed_by_oracle():
    import itertools

    cfg = HuntConfig(seed=99, trials=200)
    report = hunt(cfg)
    record = next(t for t in report.trials if t.flagged)
    rng = random.Random(trial_seed(cfg.seed, record.index))
    net, m0, c = random_instance(rng, cfg)
    from gmec.constraints import transition_gain

    def pruned_union(members):
        union = set()
        for member in prune_zero(members, m0, "syntactic"):
            union |= brute_admissible(net, m0, member)
        return union

    left = pruned_union({c})
    gains = transition_gain(net, c)
    positive = [
        t.tid
        for i, t in enumerate(net.transitions)
        if not t.controllable and gains[i] > 0
    ]
    mismatch = any(
        pruned_union(apply_sequence(net, c, perm).final) != left
        for perm in itertools.permutations(positive)
    )
    assert mismatch == record.original_mismatch


def test_hunt_config_validation():
    with pytest.raises(ValueError):
        HuntConfig(trials=0)
    with pytest.raises(ValueError):
        HuntConfig(arc_density=1.5)
    with pytest.raises(ValueError):
        HuntConfig(uncontrollable_fraction=-0.1)


def test_trial_seed_is_stable():
    assert trial_seed(42, 0) == trial_seed(42, 0)
    assert trial_seed(42, 0) != trial_seed(42, 1)
    assert trial_seed(42, 1) != trial_seed(43, 1)


def test_random_instance_respects_caps():
    cfg = HuntConfig(seed=1, trials=1, max_places=4, max_transitions=3,
                     max_initial_tokens=2, weight_cap=2, bound_cap=3)
    for index in range(50):
        rng = random.Random(trial_seed(1, index))
        net, m0, c = random_instance(rng, cfg)
        assert 1 <= net.place_count <= 4
        assert 1 <= len(net.transitions) <= 3
        assert all(0 <= x <= 2 for x in m0)
        assert all(0 <= w <= 2 for w in c.weights)
        assert 0 <= c.bound <= 3
        for t in net.transitions:
            assert t.pre and t.post
