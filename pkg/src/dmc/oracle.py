"""Independent reference semantics: from-scratch evaluation, the activation
fixpoint replayed from a bare assignment, and brute-force solution
enumeration over all variable-subset assignments.

Deliberately separate from the incremental propagation/search machinery so the
two can check each other; only the value lattice and data model are shared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .model import (
    ActivatorAction,
    CondKind,
    ConstraintNetwork,
    Satisfaction,
)
from .propagation import ChildTally, evaluate_meta


@dataclass
class Replay:
    active: set[str]
    fired: list[str] = field(default_factory=list)
    violated: list[str] = field(default_factory=list)
    values: dict[str, Satisfaction] = field(default_factory=dict)


def evaluate_all(network: ConstraintNetwork, assignment: dict[str, str],
                 active: set[str]) -> dict[str, Satisfaction]:
    """Bottom-up values of every constraint for a given assignment and
    activity set; inactive constraints stay undetermined."""
    values: dict[str, Satisfaction] = {}

    def value_of(cid: str) -> Satisfaction:
        if cid in values:
            return values[cid]
        node = network.constraints[cid]
        if cid not in active:
            result = Satisfaction.UNDETERMINED
        elif node.is_base:
            assigned = assignment.get(node.variable)
            if assigned is None:
                result = Satisfaction.UNDETERMINED
            elif node.relation.holds(assigned):
                result = Satisfaction.SATISFIED
            else:
                result = Satisfaction.UNSATISFIED
        else:
            tally = ChildTally()
            k = 0
            for ch in node.children:
                if ch not in active:
                    continue
                k += 1
                v = value_of(ch)
                if v is Satisfaction.SATISFIED:
                    tally.sat += 1
                elif v is Satisfaction.UNSATISFIED:
                    tally.unsat += 1
                elif v is Satisfaction.SATISFIED_YET:
                    tally.sat_yet += 1
                elif v is Satisfaction.UNSATISFIED_YET:
                    tally.unsat_yet += 1
                else:
                    tally.undet += 1
            lo, hi = (k, k) if node.receiver.all_active else (node.min_count, node.max_count)
            result = evaluate_meta(lo, hi, tally)
        values[cid] = result
        return result

    for cid in network.constraints:
        value_of(cid)
    return values


def replay_activation(network: ConstraintNetwork, assignment: dict[str, str]) -> Replay:
    """Activation fixpoint computed from scratch for a candidate assignment:
    start from the initially-active set and fire activate-mode activators whose
    condition holds, re-evaluating values as the active set grows."""
    active = set(network.initially_active)
    fired: list[str] = []
    fired_set: set[str] = set()

    def var_active(vid: str) -> bool:
        return any(cid in active for cid in network.literals_of[vid])

    values = evaluate_all(network, assignment, active)
    changed = True
    while changed:
        changed = False
        for act in network.activators.values():
            if act.action is not ActivatorAction.ACTIVATE:
                continue
            pending = [t for t in act.targets if t not in active]
            if not pending:
                continue
            if act.condition_kind is CondKind.CONSTRAINT_SATISFIED:
                holds = values[act.condition_ref] in (
                    Satisfaction.SATISFIED, Satisfaction.SATISFIED_YET)
            else:
                holds = var_active(act.condition_ref)
            if holds:
                active.update(pending)
                if act.id not in fired_set:
                    fired_set.add(act.id)
                    fired.append(act.id)
                values = evaluate_all(network, assignment, active)
                changed = True

    violated = []
    for act in network.activators.values():
        if act.action is not ActivatorAction.REQUIRE_INACTIVE:
            continue
        if act.condition_kind is CondKind.CONSTRAINT_SATISFIED:
            holds = values[act.condition_ref] in (
                Satisfaction.SATISFIED, Satisfaction.SATISFIED_YET)
        else:
            holds = var_active(act.condition_ref)
        if holds and any(t in active for t in act.targets):
            violated.append(act.id)
    return Replay(active, fired, violated, values)


def is_solution(network: ConstraintNetwork, assignment: dict[str, str]) -> bool:
    """Solution invariants checked from scratch for a candidate assignment."""
    replay = replay_activation(network, assignment)
    act_vars = {
        vid for vid, lits in network.literals_of.items()
        if any(cid in replay.active for cid in lits)
    }
    if set(assignment) != act_vars:
        return False
    if replay.violated:
        return False
    for cid in replay.active:
        if not replay.values[cid].fixed:
            return False
    return replay.values[network.top] is Satisfaction.SATISFIED


def mandatory_variables(network: ConstraintNetwork) -> set[str]:
    """Variables active under the assignment-independent activation fixpoint;
    they must be assigned in every solution."""
    replay = replay_activation(network, {})
    return {
        vid for vid, lits in network.literals_of.items()
        if any(cid in replay.active for cid in lits)
    }


def enumerate_solutions(network: ConstraintNetwork) -> list[dict[str, str]]:
    """All solutions by brute force over every variable-subset assignment."""
    mandatory = mandatory_variables(network)
    names = list(network.variables)
    pools = []
    for vid in names:
        dom = network.variables[vid].domain
        pools.append(list(dom) if vid in mandatory else [None, *dom])
    out: list[dict[str, str]] = []
    for combo in product(*pools):
        assignment = {vid: val for vid, val in zip(names, combo) if val is not None}
        if is_solution(network, assignment):
            out.append(assignment)
    return out
