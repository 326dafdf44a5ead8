"""Constraint-network data model: variables, the constraint tree, activators.

No solving logic lives here; propagation, activation and search are separate
modules that operate on these structures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Satisfaction(Enum):
    UNDETERMINED = "undetermined"
    SATISFIED = "satisfied"
    UNSATISFIED = "unsatisfied"
    SATISFIED_YET = "satisfied_yet"
    UNSATISFIED_YET = "unsatisfied_yet"

    @property
    def fixed(self) -> bool:
        return self in (Satisfaction.SATISFIED, Satisfaction.UNSATISFIED)


class RelKind(Enum):
    EQUAL = "="
    NOT_EQUAL = "!="


@dataclass(frozen=True)
class BaseRelation:
    """Unary relation testing one variable against one domain value."""

    kind: RelKind
    value: str

    def holds(self, assigned: str) -> bool:
        if self.kind is RelKind.EQUAL:
            return assigned == self.value
        return assigned != self.value


class Receiver(Enum):
    STANDARD = "meta"
    RECEIVER = "receiver"
    ALL_RECEIVER = "allreceiver"
    TOP = "top"

    @property
    def all_active(self) -> bool:
        """True when min/max are derived as the active-child count."""
        return self in (Receiver.ALL_RECEIVER, Receiver.TOP)


@dataclass
class Variable:
    id: str
    domain: list[str]
    initial: bool = False
    assignment: str | None = None


@dataclass
class ConstraintNode:
    """Tree node: a base constraint (leaf over one variable) or a meta node.

    Base nodes have `variable`/`relation` set and no children; meta nodes have
    `receiver` plus min/max bounds (ignored for all-receiver kinds, where the
    bounds are the active-child count at evaluation time).
    """

    id: str
    variable: str | None = None
    relation: BaseRelation | None = None
    receiver: Receiver | None = None
    min_count: int = 0
    max_count: int = 0
    parent: str | None = None
    children: list[str] = field(default_factory=list)
    active: bool = False
    value: Satisfaction = Satisfaction.UNDETERMINED

    @property
    def is_base(self) -> bool:
        return self.variable is not None


class CondKind(Enum):
    CONSTRAINT_SATISFIED = "satisfied"
    VARIABLE_ACTIVE = "variable-active"


class ActivatorAction(Enum):
    ACTIVATE = "activate"
    REQUIRE_INACTIVE = "require-inactive"


@dataclass
class Activator:
    """Condition plus action: activate targets, or require them inactive."""

    id: str
    condition_kind: CondKind
    condition_ref: str
    action: ActivatorAction
    targets: list[str]


class ConstraintNetwork:
    """Variables, the constraint tree, activators, and the initial-activity set.

    Declaration order of constraints and activators is significant: path
    generation and activator checking follow it.
    """

    def __init__(
        self,
        variables: list[Variable],
        constraints: list[ConstraintNode],
        activators: list[Activator],
        top: str,
        initially_active: set[str],
    ):
        self.variables: dict[str, Variable] = {}
        self.constraints: dict[str, ConstraintNode] = {}
        self.activators: dict[str, Activator] = {}
        self.duplicate_ids: list[str] = []
        for v in variables:
            if v.id in self.variables:
                self.duplicate_ids.append(v.id)
            self.variables[v.id] = v
        for c in constraints:
            if c.id in self.constraints or c.id in self.variables:
                self.duplicate_ids.append(c.id)
            self.constraints[c.id] = c
        for a in activators:
            if a.id in self.activators or a.id in self.constraints or a.id in self.variables:
                self.duplicate_ids.append(a.id)
            self.activators[a.id] = a
        self.top = top
        self.initially_active = set(initially_active)
        self._link_parents()
        # static index: variable id -> ids of base constraints referring to it
        self.literals_of: dict[str, list[str]] = {v: [] for v in self.variables}
        for c in self.constraints.values():
            if c.is_base and c.variable in self.literals_of:
                self.literals_of[c.variable].append(c.id)
        self.reset()

    def _link_parents(self) -> None:
        for c in self.constraints.values():
            for child in c.children:
                if child in self.constraints:
                    self.constraints[child].parent = c.id

    def reset(self) -> None:
        """Return to the freshly-loaded state: initial activity, all values
        undetermined, all variables unassigned."""
        for v in self.variables.values():
            v.assignment = None
        for c in self.constraints.values():
            c.active = c.id in self.initially_active
            c.value = Satisfaction.UNDETERMINED


def validate(network: ConstraintNetwork) -> list[str]:
    """Collect every structural invariant violation; empty list means valid."""
    problems: list[str] = []
    for dup in network.duplicate_ids:
        problems.append(f"duplicate id: {dup}")

    for v in network.variables.values():
        if not v.domain:
            problems.append(f"variable {v.id}: empty domain")
        if len(set(v.domain)) != len(v.domain):
            problems.append(f"variable {v.id}: duplicate domain values")
        if v.assignment is not None and v.assignment not in v.domain:
            problems.append(f"variable {v.id}: assignment outside domain")

    tops = [c.id for c in network.constraints.values() if c.receiver is Receiver.TOP]
    if network.top not in network.constraints:
        problems.append(f"top constraint {network.top} does not exist")
    elif network.constraints[network.top].receiver is not Receiver.TOP:
        problems.append(f"top constraint {network.top} is not of kind top")
    if len(tops) > 1:
        problems.append(f"multiple top constraints: {', '.join(tops)}")
    if network.top in network.constraints and network.constraints[network.top].parent:
        problems.append(f"top constraint {network.top} has a parent")
    if network.top not in network.initially_active:
        problems.append("top constraint is not initially active")

    seen_as_child: dict[str, str] = {}
    for c in network.constraints.values():
        if c.is_base:
            if c.children:
                problems.append(f"base constraint {c.id} has children")
            if c.variable not in network.variables:
                problems.append(f"base constraint {c.id}: unknown variable {c.variable}")
            elif c.relation is not None and c.relation.value not in network.variables[c.variable].domain:
                problems.append(
                    f"base constraint {c.id}: relation value {c.relation.value!r} "
                    f"outside the domain of {c.variable}"
                )
        else:
            if c.min_count < 0:
                problems.append(f"meta constraint {c.id}: negative min")
            if not c.receiver.all_active and c.min_count > c.max_count:
                problems.append(f"meta constraint {c.id}: min {c.min_count} > max {c.max_count}")
            if c.receiver is Receiver.STANDARD and c.max_count > len(c.children):
                problems.append(
                    f"meta constraint {c.id}: max {c.max_count} exceeds child count {len(c.children)}"
                )
        for child in c.children:
            if child not in network.constraints:
                problems.append(f"constraint {c.id}: unknown child {child}")
                continue
            if child in seen_as_child:
                problems.append(f"constraint {child} has two parents: {seen_as_child[child]} and {c.id}")
            seen_as_child[child] = c.id
            if network.constraints[child].parent != c.id:
                problems.append(f"constraint {child}: parent link does not match {c.id}")

    # every node must reach the top by parent links without revisiting a node
    for c in network.constraints.values():
        seen = set()
        node = c
        while node.parent is not None:
            if node.id in seen:
                problems.append(f"cycle in parent links at {node.id}")
                break
            seen.add(node.id)
            if node.parent not in network.constraints:
                break
            node = network.constraints[node.parent]
        else:
            if node.id != network.top:
                problems.append(f"constraint {c.id} does not reach the top (stops at {node.id})")

    for cid in network.initially_active:
        if cid not in network.constraints:
            problems.append(f"initially-active id {cid} does not exist")

    for a in network.activators.values():
        if not a.targets:
            problems.append(f"activator {a.id}: no targets")
        for t in a.targets:
            if t not in network.constraints:
                problems.append(f"activator {a.id}: unknown target {t}")
        if a.condition_kind is CondKind.CONSTRAINT_SATISFIED:
            if a.condition_ref not in network.constraints:
                problems.append(f"activator {a.id}: unknown condition constraint {a.condition_ref}")
        else:
            if a.condition_ref not in network.variables:
                problems.append(f"activator {a.id}: unknown condition variable {a.condition_ref}")

    return problems


def active_variables(network: ConstraintNetwork) -> set[str]:
    """Variables referenced by at least one active base constraint."""
    return {
        vid
        for vid, lits in network.literals_of.items()
        if any(network.constraints[cid].active for cid in lits)
    }
