"""Activator firing: conditions that become satisfied turn target constraints
active (monotone within a forward segment; only trail restoration undoes it),
and require-inactive activators report violations for the search to treat as
failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    ActivatorAction,
    CondKind,
    ConstraintNetwork,
    Satisfaction,
    active_variables,
)
from .propagation import Counters, current_value, propagate_up, recompute
from .trail import Trail, set_active

_CONDITION_HOLDS = (Satisfaction.SATISFIED, Satisfaction.SATISFIED_YET)


@dataclass
class ActivationReport:
    fired: list[str] = field(default_factory=list)
    violated: list[str] = field(default_factory=list)


def condition_holds(network: ConstraintNetwork, kind: CondKind, ref: str) -> bool:
    if kind is CondKind.CONSTRAINT_SATISFIED:
        return network.constraints[ref].value in _CONDITION_HOLDS
    return any(network.constraints[cid].active for cid in network.literals_of[ref])


def check_activators(network: ConstraintNetwork, trail: Trail,
                     counters: Counters | None = None) -> ActivationReport:
    """Fire every activate-mode activator whose condition holds, to fixpoint;
    then report require-inactive activators whose condition holds while a
    target is active. Deactivation never happens here."""
    report = ActivationReport()
    fired: set[str] = set()
    changed = True
    while changed:
        changed = False
        for act in network.activators.values():
            if act.action is not ActivatorAction.ACTIVATE:
                continue
            pending = [t for t in act.targets if not network.constraints[t].active]
            if not pending or not condition_holds(network, act.condition_kind, act.condition_ref):
                continue
            if act.id not in fired:
                fired.add(act.id)
                report.fired.append(act.id)
            for cid in pending:
                set_active(network, trail, cid)
            # newly active constraints take their current evaluation, and their
            # parents see a changed active-child set either way
            for cid in pending:
                recompute(network, trail, cid, counters)
                node = network.constraints[cid]
                if node.parent and network.constraints[node.parent].active:
                    if recompute(network, trail, node.parent, counters):
                        propagate_up(network, trail, node.parent, counters)
            changed = True
    for act in network.activators.values():
        if act.action is not ActivatorAction.REQUIRE_INACTIVE:
            continue
        if not condition_holds(network, act.condition_kind, act.condition_ref):
            continue
        if any(network.constraints[t].active for t in act.targets):
            report.violated.append(act.id)
    return report


def require_inactive_violations(network: ConstraintNetwork) -> list[str]:
    """Violated require-inactive activators in the current state."""
    out = []
    for act in network.activators.values():
        if act.action is ActivatorAction.REQUIRE_INACTIVE \
                and condition_holds(network, act.condition_kind, act.condition_ref) \
                and any(network.constraints[t].active for t in act.targets):
            out.append(act.id)
    return out


def activation_closure(network: ConstraintNetwork) -> set[str]:
    """Constraints that can ever become active: the initially-active set plus
    every activator target. Anything outside can never participate."""
    reachable = set(network.initially_active)
    for act in network.activators.values():
        if act.action is ActivatorAction.ACTIVATE:
            reachable.update(act.targets)
    return reachable


def assignment_would_violate(network: ConstraintNetwork, vid: str, value: str) -> bool:
    """Pure lookahead: would assigning vid := value (plus the activation
    cascade it triggers) violate a require-inactive activator?

    Activity only grows within a forward segment, so a violation detected here
    is inevitable on every branch that starts with this assignment.
    """
    hyp_active: set[str] = {cid for cid, c in network.constraints.items() if c.active}
    memo: dict[str, Satisfaction] = {}

    def value_of(cid: str) -> Satisfaction:
        if cid in memo:
            return memo[cid]
        node = network.constraints[cid]
        if cid not in hyp_active:
            result = Satisfaction.UNDETERMINED
        elif node.is_base:
            if node.variable == vid:
                result = (Satisfaction.SATISFIED if node.relation.holds(value)
                          else Satisfaction.UNSATISFIED)
            else:
                result = current_value(network, node)
        else:
            from .propagation import ChildTally, evaluate_meta  # local to avoid cycle noise

            tally = ChildTally()
            k = 0
            for ch in node.children:
                if ch not in hyp_active:
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
        memo[cid] = result
        return result

    def holds(kind: CondKind, ref: str) -> bool:
        if kind is CondKind.CONSTRAINT_SATISFIED:
            return value_of(ref) in _CONDITION_HOLDS
        return any(cid in hyp_active for cid in network.literals_of[ref])

    changed = True
    while changed:
        changed = False
        for act in network.activators.values():
            if act.action is not ActivatorAction.ACTIVATE:
                continue
            pending = [t for t in act.targets if t not in hyp_active]
            if pending and holds(act.condition_kind, act.condition_ref):
                hyp_active.update(pending)
                memo.clear()
                changed = True
    for act in network.activators.values():
        if act.action is ActivatorAction.REQUIRE_INACTIVE \
                and holds(act.condition_kind, act.condition_ref) \
                and any(t in hyp_active for t in act.targets):
            return True
    return False
