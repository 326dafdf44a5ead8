"""Upward propagation: assignments fix base constraints, meta constraints
recompute their five-valued state from tallies of their active children, and
changes bubble toward the top until a node's value is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ConstraintNetwork, ConstraintNode, Satisfaction, Variable
from .trail import Trail, set_assignment, set_value


@dataclass
class Counters:
    assignments: int = 0
    backtracks: int = 0
    constraint_checks: int = 0


@dataclass
class ChildTally:
    sat: int = 0
    unsat: int = 0
    sat_yet: int = 0
    unsat_yet: int = 0
    undet: int = 0


_BUCKET = {
    Satisfaction.SATISFIED: "sat",
    Satisfaction.UNSATISFIED: "unsat",
    Satisfaction.SATISFIED_YET: "sat_yet",
    Satisfaction.UNSATISFIED_YET: "unsat_yet",
    Satisfaction.UNDETERMINED: "undet",
}


def tally_children(network: ConstraintNetwork, node: ConstraintNode) -> ChildTally:
    """Tally satisfaction values over the node's *active* children only."""
    tally = ChildTally()
    for cid in node.children:
        child = network.constraints[cid]
        if child.active:
            setattr(tally, _BUCKET[child.value], getattr(tally, _BUCKET[child.value]) + 1)
    return tally


def evaluate_base(node: ConstraintNode, variable: Variable,
                  counters: Counters | None = None) -> Satisfaction:
    """Value of a base constraint under the variable's current assignment."""
    if variable.assignment is None:
        return Satisfaction.UNDETERMINED
    if counters is not None:
        counters.constraint_checks += 1
    if node.relation.holds(variable.assignment):
        return Satisfaction.SATISFIED
    return Satisfaction.UNSATISFIED


def evaluate_meta(min_count: int, max_count: int, tally: ChildTally) -> Satisfaction:
    """Five-valued state of a meta constraint from its active-children tally.

    Satisfied/Unsatisfied are fixed values, possible only when no child is
    pinned or undetermined. SatisfiedYet means every completion of the
    undetermined remainder satisfies the bounds; UnsatisfiedYet means none can.
    """
    if tally.sat_yet == 0 and tally.unsat_yet == 0 and tally.undet == 0:
        if min_count <= tally.sat <= max_count:
            return Satisfaction.SATISFIED
        return Satisfaction.UNSATISFIED
    guaranteed = tally.sat + tally.sat_yet
    potential = tally.sat + tally.sat_yet + tally.undet
    if guaranteed >= min_count and potential <= max_count:
        return Satisfaction.SATISFIED_YET
    if potential < min_count or guaranteed > max_count:
        return Satisfaction.UNSATISFIED_YET
    return Satisfaction.UNDETERMINED


def effective_bounds(network: ConstraintNetwork, node: ConstraintNode) -> tuple[int, int]:
    """Declared min/max, except all-receiver kinds demand every active child."""
    if node.receiver.all_active:
        k = sum(1 for cid in node.children if network.constraints[cid].active)
        return k, k
    return node.min_count, node.max_count


def meta_value(network: ConstraintNetwork, node: ConstraintNode,
               counters: Counters | None = None) -> Satisfaction:
    if counters is not None:
        counters.constraint_checks += 1
    lo, hi = effective_bounds(network, node)
    return evaluate_meta(lo, hi, tally_children(network, node))


def current_value(network: ConstraintNetwork, node: ConstraintNode,
                  counters: Counters | None = None) -> Satisfaction:
    if node.is_base:
        return evaluate_base(node, network.variables[node.variable], counters)
    return meta_value(network, node, counters)


def recompute(network: ConstraintNetwork, trail: Trail, cid: str,
              counters: Counters | None = None) -> bool:
    """Re-evaluate one active constraint; record and return True on change."""
    node = network.constraints[cid]
    new = current_value(network, node, counters)
    if new is node.value:
        return False
    set_value(network, trail, cid, new)
    return True


def propagate_up(network: ConstraintNetwork, trail: Trail, changed: str,
                 counters: Counters | None = None) -> None:
    """Bubble a value change upward, stopping at the first unchanged parent."""
    node = network.constraints[changed]
    while node.parent is not None:
        parent = network.constraints[node.parent]
        if not parent.active:
            break
        if not recompute(network, trail, parent.id, counters):
            break
        node = parent


def initialize_values(network: ConstraintNetwork, trail: Trail,
                      counters: Counters | None = None) -> None:
    """Evaluate every active constraint bottom-up at load time (tick 0), so
    stored values agree with from-scratch evaluation before the first wave."""
    def visit(cid: str) -> None:
        node = network.constraints[cid]
        for child in node.children:
            visit(child)
        if node.active:
            recompute(network, trail, cid, counters)

    visit(network.top)


def assign_variable(network: ConstraintNetwork, trail: Trail, vid: str, value: str,
                    counters: Counters | None = None) -> None:
    """Assign a variable and propagate through every active base constraint
    that refers to it. Activator checking is the caller's responsibility."""
    set_assignment(network, trail, vid, value)
    if counters is not None:
        counters.assignments += 1
    for cid in network.literals_of[vid]:
        node = network.constraints[cid]
        if node.active and recompute(network, trail, cid, counters):
            propagate_up(network, trail, cid, counters)
