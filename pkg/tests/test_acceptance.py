"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
(run with -s to see them). Tolerances and exact counts are asserted as stated;
reference magnitudes that are documentation-only are printed, not asserted.
"""

import random
import time
from contextlib import contextmanager
from itertools import product

from dmc.baselines import ac3_solve, backtrack_solve, static_project
from dmc.engine import Mode, Polarity, PruneOptions, Task, execute_task, solve
from dmc.fixtures import load_fixture
from dmc.model import ConstraintNetwork, Satisfaction, Variable
from dmc.oracle import enumerate_solutions, evaluate_all
from dmc.propagation import initialize_values
from dmc.trail import Trail

from helpers import base, meta, random_network, top
from test_trail import random_walk_round_trip


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {name}: FAIL")
        raise
    print(f"\nACCEPTANCE {name}: PASS")


def car_all_solutions():
    net = load_fixture("car")
    trail = Trail()
    solutions, stats = solve(net, trail, Task("top", Polarity.SATISFY), Mode.ALL)
    return net, solutions, stats


def test_car_all_solutions_count_and_oracle_equality():
    with criterion("car all-solutions = 288, oracle-equal, under 10s"):
        started = time.monotonic()
        net, solutions, stats = car_all_solutions()
        elapsed = time.monotonic() - started
        assert stats.solutions == len(solutions)
        assert len(solutions) == 288
        engine_set = {s.assignment for s in solutions}
        assert len(engine_set) == 288
        oracle_set = {tuple(sorted(d.items())) for d in enumerate_solutions(net)}
        assert engine_set == oracle_set
        assert elapsed < 10.0


def test_car_conditioned_on_deluxe():
    with criterion("car conditioned on package=deluxe = 153 and equals the filtered slice"):
        net, solutions, _ = car_all_solutions()
        full_set = {s.assignment for s in solutions}
        net.reset()
        trail = Trail()
        assert execute_task(net, trail, Task("package_deluxe", Polarity.SATISFY))
        conditioned, _ = solve(net, trail, Task("top", Polarity.SATISFY), Mode.ALL)
        conditioned_set = {s.assignment for s in conditioned}
        filtered = {a for a in full_set if dict(a)["package"] == "deluxe"}
        assert conditioned_set <= full_set
        assert conditioned_set == filtered
        # the benchmark's documented conditioned count; under assignment-set
        # counting it cannot coexist with the 288-solution total (the deluxe
        # slice of those has 173 members), so this assertion stays red and
        # records the discrepancy honestly
        assert len(conditioned) == 153


def test_first_solution_economy():
    with criterion("first-solution runs terminate with exactly 1 backtrack"):
        net = load_fixture("car")
        trail = Trail()
        solutions, stats = solve(net, trail, Task("top", Polarity.SATISFY), Mode.FIRST)
        assert len(solutions) == 1
        assert stats.backtracks == 1
        net.reset()
        trail = Trail()
        assert execute_task(net, trail, Task("package_deluxe", Polarity.SATISFY))
        solutions, stats = solve(net, trail, Task("top", Polarity.SATISFY), Mode.FIRST)
        assert len(solutions) == 1
        assert stats.backtracks == 1


def test_backtrack_per_solution_ratio():
    with criterion("all-solutions backtracks/solutions <= 1.5"):
        net, solutions, stats = car_all_solutions()
        ratio = stats.backtracks / len(solutions)
        print(f"\n  ratio {stats.backtracks}/{len(solutions)} = {ratio:.3f} "
              f"(assignments {stats.assignments}, checks {stats.constraint_checks})")
        assert ratio <= 1.5
        net.reset()
        trail = Trail()
        execute_task(net, trail, Task("package_deluxe", Polarity.SATISFY))
        conditioned, cstats = solve(net, trail, Task("top", Polarity.SATISFY), Mode.ALL)
        assert cstats.backtracks / len(conditioned) <= 1.5


def test_mackworth_reconstruction_gate():
    with criterion("classic-CSP gate: BT 19/12/18, DMC below both, AC-3 wipeout"):
        net = load_fixture("mackworth")
        csp = static_project(net)
        bt_solutions, bt_stats = backtrack_solve(csp)
        assert bt_solutions == []
        assert bt_stats.assignments == 19
        assert bt_stats.backtracks == 12
        assert bt_stats.constraint_checks == 18

        trail = Trail()
        dmc_solutions, dmc_stats = solve(net, trail, Task("top", Polarity.SATISFY), Mode.ALL)
        print(f"\n  DMC: {dmc_stats.assignments} assignments, "
              f"{dmc_stats.backtracks} backtracks")
        assert dmc_solutions == []
        assert dmc_stats.backtracks < 12
        assert dmc_stats.assignments < 19

        ac = ac3_solve(csp)
        assert not ac.consistent
        assert any(not dom for dom in ac.domains.values())
        # AC-3 performs no variable assignments at all, only domain revision
        assert ac.revise_calls > 0


def _solution_set(net, request, prune):
    net.reset()
    trail = Trail()
    solutions, stats = solve(net, trail, request, Mode.ALL, prune=prune)
    return {s.assignment for s in solutions}, stats


def test_five_value_pruning_equivalence():
    with criterion("yet-value short-circuits change no solutions and never add backtracks"):
        cases = [
            (load_fixture("car"), Task("top", Polarity.SATISFY)),
            (load_fixture("mackworth"), Task("top", Polarity.SATISFY)),
        ]
        rng = random.Random(424242)
        for _ in range(200):
            net = random_network(rng)
            cases.append((net, Task(net.top, Polarity.SATISFY)))
        for net, request in cases:
            enabled, enabled_stats = _solution_set(net, request, PruneOptions())
            disabled, disabled_stats = _solution_set(
                net, request, PruneOptions(yet_short_circuits=False))
            assert enabled == disabled
            assert enabled_stats.backtracks <= disabled_stats.backtracks


def test_pruning_safety_all_disabled():
    with criterion("all prunings disabled yield the identical solution set"):
        cases = [
            (load_fixture("car"), Task("top", Polarity.SATISFY)),
            (load_fixture("mackworth"), Task("top", Polarity.SATISFY)),
        ]
        rng = random.Random(777)
        for _ in range(60):
            net = random_network(rng)
            cases.append((net, Task(net.top, Polarity.SATISFY)))
        for net, request in cases:
            enabled, _ = _solution_set(net, request, PruneOptions())
            disabled, _ = _solution_set(net, request, PruneOptions.none())
            assert enabled == disabled


def _random_meta_over_bases(rng):
    """A meta tree over base constraints with <= 10 undetermined leaves; some
    variables pre-assigned so fixed and open children mix."""
    n_vars = rng.randint(2, 6)
    variables = [Variable(f"v{i}", ["a", "b", "c"][: rng.randint(2, 3)])
                 for i in range(n_vars)]
    bases = []
    for i in range(rng.randint(2, 8)):
        var = rng.choice(variables)
        kind = rng.choice(["=", "!="])
        from dmc.model import RelKind

        bases.append(base(f"b{i}", var.id,
                          RelKind.EQUAL if kind == "=" else RelKind.NOT_EQUAL,
                          rng.choice(var.domain)))
    children = [b.id for b in bases]
    inner = []
    if len(children) > 3 and rng.random() < 0.5:
        sub = [children.pop() for _ in range(2)]
        hi = rng.randint(0, 2)
        inner.append(meta("sub", rng.randint(0, hi), hi, sub))
        children.append("sub")
    hi = rng.randint(0, len(children))
    root = meta("root", rng.randint(0, hi), hi, children)
    ids = {c.id for c in [*bases, *inner, root]} | {"t"}
    net = ConstraintNetwork(variables, [*bases, *inner, root, top("t", ["root"])],
                            [], "t", ids)
    for var in net.variables.values():
        if rng.random() < 0.4:
            var.assignment = rng.choice(var.domain)
    return net


def test_pinned_value_soundness():
    with criterion("pinned values always complete to their fixed counterpart"):
        rng = random.Random(99)
        checked = 0
        for _ in range(600):
            net = _random_meta_over_bases(rng)
            trail = Trail()
            initialize_values(net, trail)
            open_vars = [v for v in net.variables.values() if v.assignment is None]
            if len(open_vars) > 5:
                continue
            pinned = {
                cid: c.value for cid, c in net.constraints.items()
                if c.value in (Satisfaction.SATISFIED_YET, Satisfaction.UNSATISFIED_YET)
            }
            if not pinned:
                continue
            checked += 1
            active = {cid for cid, c in net.constraints.items() if c.active}
            fixed_part = {vid: v.assignment for vid, v in net.variables.items()
                          if v.assignment is not None}
            for combo in product(*(v.domain for v in open_vars)):
                assignment = dict(fixed_part)
                assignment.update({v.id: val for v, val in zip(open_vars, combo)})
                values = evaluate_all(net, assignment, active)
                for cid, was in pinned.items():
                    expect = (Satisfaction.SATISFIED
                              if was is Satisfaction.SATISFIED_YET
                              else Satisfaction.UNSATISFIED)
                    assert values[cid] is expect, (cid, was, assignment)
        assert checked >= 100


def test_trail_round_trip_thousand_scripts():
    with criterion("1000 randomized record/restore scripts round-trip exactly"):
        for seed in range(1000):
            random_walk_round_trip(seed, steps=6)


def test_oracle_completeness_on_random_networks():
    with criterion("200 random activator-bearing networks match the brute-force oracle"):
        rng = random.Random(20240817)
        done = 0
        while done < 200:
            net = random_network(rng)
            if not net.activators:
                continue
            done += 1
            expected = {tuple(sorted(d.items())) for d in enumerate_solutions(net)}
            trail = Trail()
            solutions, _ = solve(net, trail, Task(net.top, Polarity.SATISFY), Mode.ALL)
            got = [s.assignment for s in solutions]
            assert len(set(got)) == len(got)
            assert set(got) == expected


def test_history_statistics_reported():
    with criterion("all-solutions run reports positive history stats with avg <= max"):
        _, _, stats = car_all_solutions()
        # for scale, a known run of this benchmark recorded
        # min 1 / max 576 / average 138.76 (documented, not asserted)
        print(f"\n  trail records per constraint: min {stats.trail.min} "
              f"max {stats.trail.max} average {stats.trail.average:.2f}")
        assert stats.trail.min > 0
        assert stats.trail.max > 0
        assert stats.trail.average <= stats.trail.max
        assert stats.trail.min <= stats.trail.average
