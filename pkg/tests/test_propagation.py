import random

import pytest

from dmc.fixtures import load_fixture
from dmc.model import Satisfaction, Variable
from dmc.oracle import evaluate_all
from dmc.propagation import (
    ChildTally,
    Counters,
    assign_variable,
    evaluate_base,
    evaluate_meta,
    initialize_values,
    propagate_up,
    tally_children,
)
from dmc.trail import Trail

from helpers import EQ, NE, base, fig2_network, meta, random_network, top
from dmc.model import ConstraintNetwork

S = Satisfaction


def completions_oracle(lo: int, hi: int, fixed: list[S], open_count: int) -> S:
    """Expected meta value by enumerating every completion of the open
    children to fixed outcomes: satisfied everywhere -> SatisfiedYet,
    unsatisfied everywhere -> UnsatisfiedYet, single outcome when nothing is
    open, otherwise undetermined."""
    base_sat = sum(1 for v in fixed if v is S.SATISFIED)
    outcomes = {lo <= base_sat + extra <= hi for extra in range(open_count + 1)}
    if open_count == 0:
        return S.SATISFIED if outcomes == {True} else S.UNSATISFIED
    if outcomes == {True}:
        return S.SATISFIED_YET
    if outcomes == {False}:
        return S.UNSATISFIED_YET
    return S.UNDETERMINED


def test_evaluate_base_examples():
    z = Variable("z", ["a", "b", "c"])
    eq_a = base("c", "z", EQ, "a")
    assert evaluate_base(eq_a, z) is S.UNDETERMINED
    z.assignment = "a"
    assert evaluate_base(eq_a, z) is S.SATISFIED
    ne_a = base("c2", "z", NE, "a")
    assert evaluate_base(ne_a, z) is S.UNSATISFIED


def test_evaluate_base_counts_checks_only_when_assigned():
    z = Variable("z", ["a"])
    counters = Counters()
    node = base("c", "z", EQ, "a")
    evaluate_base(node, z, counters)
    assert counters.constraint_checks == 0
    z.assignment = "a"
    evaluate_base(node, z, counters)
    assert counters.constraint_checks == 1


def test_evaluate_meta_fixed_inside_bounds():
    assert evaluate_meta(1, 2, ChildTally(sat=1, unsat=1)) is S.SATISFIED


def test_evaluate_meta_satisfied_yet():
    assert evaluate_meta(1, 2, ChildTally(sat_yet=1, undet=1)) is S.SATISFIED_YET


def test_evaluate_meta_unsatisfied_yet_matches_completion_oracle():
    expected = completions_oracle(2, 2, [S.UNSATISFIED], open_count=1)
    assert expected is S.UNSATISFIED_YET
    assert evaluate_meta(2, 2, ChildTally(unsat=1, undet=1)) is expected


def test_evaluate_meta_vacuous_all_receiver():
    assert evaluate_meta(0, 0, ChildTally()) is S.SATISFIED


@pytest.mark.parametrize("lo,hi,n_fixed_sat,n_fixed_unsat,n_open", [
    (lo, hi, s, u, o)
    for lo in range(4) for hi in range(lo, 4)
    for s in range(3) for u in range(3) for o in range(4)
])
def test_evaluate_meta_pinning_matches_enumeration(lo, hi, n_fixed_sat, n_fixed_unsat, n_open):
    fixed = [S.SATISFIED] * n_fixed_sat + [S.UNSATISFIED] * n_fixed_unsat
    expected = completions_oracle(lo, hi, fixed, n_open)
    got = evaluate_meta(lo, hi, ChildTally(sat=n_fixed_sat, unsat=n_fixed_unsat,
                                           undet=n_open))
    assert got is expected


def chain_network() -> ConstraintNetwork:
    variables = [Variable("x", ["a", "b"]), Variable("y", ["a", "b"])]
    constraints = [
        base("bx", "x", EQ, "a"),
        base("by", "y", EQ, "b"),
        meta("inner", 2, 2, ["bx", "by"]),
        meta("mid", 1, 1, ["inner"]),
        top("t", ["mid"]),
    ]
    ids = {c.id for c in constraints}
    return ConstraintNetwork(variables, constraints, [], "t", ids)


def assert_matches_from_scratch(net):
    assignment = {vid: v.assignment for vid, v in net.variables.items()
                  if v.assignment is not None}
    active = {cid for cid, c in net.constraints.items() if c.active}
    expected = evaluate_all(net, assignment, active)
    for cid, c in net.constraints.items():
        assert c.value is expected[cid], cid


def test_propagate_stops_at_unchanged_parent():
    variables = [Variable("x", ["a", "b"]), Variable("y", ["a", "b"])]
    constraints = [
        base("bx", "x", EQ, "a"),
        base("by", "y", EQ, "a"),
        meta("m", 0, 2, ["bx", "by"]),
        top("t", ["m"]),
    ]
    net = ConstraintNetwork(variables, constraints, [], "t",
                            {"t", "m", "bx", "by"})
    trail = Trail()
    initialize_values(net, trail)
    assert net.constraints["m"].value is S.SATISFIED_YET
    trail.advance()
    mark = len(trail.records)
    assign_variable(net, trail, "x", "a", Counters())
    # one child fixed, the other open: the parent stays pinned-satisfiable
    assert net.constraints["bx"].value is S.SATISFIED
    assert net.constraints["m"].value is S.SATISFIED_YET
    assert [r for r in trail.records[mark:] if r.subject in ("m", "t")] == []


def test_chain_fixes_in_one_wave():
    net = chain_network()
    trail = Trail()
    initialize_values(net, trail)
    trail.advance()
    assign_variable(net, trail, "x", "a", Counters())
    assert_matches_from_scratch(net)
    trail.advance()
    assign_variable(net, trail, "y", "b", Counters())
    assert_matches_from_scratch(net)
    assert net.constraints["t"].value is S.SATISFIED
    for c in net.constraints.values():
        assert c.value.fixed


def test_car_deluxe_assignment_wave():
    net = load_fixture("car")
    trail = Trail()
    initialize_values(net, trail)
    trail.advance()
    assign_variable(net, trail, "package", "deluxe", Counters())
    assert net.constraints["package_deluxe"].value is S.SATISFIED
    assert net.constraints["package_luxury"].value is S.UNSATISFIED
    assert net.constraints["package_standard"].value is S.UNSATISFIED
    assert net.constraints["package_choice"].value is S.SATISFIED
    assert_matches_from_scratch(net)


def test_inactive_children_are_invisible():
    net = fig2_network()
    trail = Trail()
    trail.advance()
    before = net.constraints["c1"].value
    # c2 is inactive; flipping its stored value must not affect the parent
    net.constraints["c2"].value = S.SATISFIED
    tally = tally_children(net, net.constraints["c1"])
    assert tally.sat == 0
    net.constraints["c2"].value = S.UNDETERMINED
    assert net.constraints["c1"].value is before


@pytest.mark.parametrize("seed", range(40))
def test_random_assignments_match_from_scratch(seed):
    rng = random.Random(seed)
    net = random_network(rng, with_activators=False)
    trail = Trail()
    initialize_values(net, trail)
    for _ in range(6):
        vid = rng.choice(list(net.variables))
        var = net.variables[vid]
        if var.assignment is not None:
            continue
        trail.advance()
        assign_variable(net, trail, vid, rng.choice(var.domain), Counters())
        assert_matches_from_scratch(net)


def test_fixed_values_stable_without_restore_or_activation():
    net = chain_network()
    trail = Trail()
    initialize_values(net, trail)
    trail.advance()
    assign_variable(net, trail, "x", "a", Counters())
    assign_variable(net, trail, "y", "b", Counters())
    fixed = {cid: c.value for cid, c in net.constraints.items() if c.value.fixed}
    assert fixed  # the whole chain is fixed now
    # further waves on an unrelated variable cannot move fixed values
    trail.advance()
    for cid, value in fixed.items():
        assert net.constraints[cid].value is value
