"""Downward task execution: Satisfy/Unsatisfy requests walk the constraint
tree, meta constraints branch over child-task paths, base constraints drive
variable assignments, and the trail rewinds failed branches. Solutions are
enumerated depth-first with counters.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .activation import (
    assignment_would_violate,
    check_activators,
    require_inactive_violations,
)
from .model import ConstraintNetwork, ConstraintNode, Satisfaction, active_variables
from .oracle import replay_activation
from .propagation import Counters, assign_variable, effective_bounds, initialize_values
from .trail import Trail, TrailStats


class Polarity(Enum):
    SATISFY = "satisfy"
    UNSATISFY = "unsatisfy"


@dataclass(frozen=True)
class Task:
    constraint: str
    polarity: Polarity


class Mode(Enum):
    FIRST = "first"
    ALL = "all"


@dataclass
class PruneOptions:
    """Search prunings; all of them preserve the solution set."""

    fixed_short_circuits: bool = True
    yet_short_circuits: bool = True
    doomed_vectors: bool = True
    rn_lookahead: bool = True
    path_value_filter: bool = True

    @classmethod
    def none(cls) -> "PruneOptions":
        return cls(False, False, False, False, False)


@dataclass
class RunStats:
    assignments: int
    backtracks: int
    constraint_checks: int
    solutions: int
    trail: TrailStats


@dataclass(frozen=True)
class Solution:
    """Assignment of every active variable, plus the active set at acceptance."""

    assignment: tuple[tuple[str, str], ...]
    active_constraints: frozenset[str]

    def as_dict(self) -> dict[str, str]:
        return dict(self.assignment)


def generate_paths(network: ConstraintNetwork, meta_id: str, polarity: Polarity,
                   prune_doomed: bool = True) -> list[list[Task]]:
    """Ordered child-task vectors for a meta constraint.

    Satisfy: vectors whose satisfy-count s lies within the bounds, by
    descending s, ties lexicographic (Satisfy before Unsatisfy, children in
    declaration order). Unsatisfy: vectors violating the bounds, by ascending
    distance to the nearer bound, ties lexicographic. Vectors that hand a
    fixed or pinned child the opposite polarity are doomed and skipped.
    """
    node = network.constraints[meta_id]
    children = [cid for cid in node.children if network.constraints[cid].active]
    k = len(children)
    lo, hi = effective_bounds(network, node)

    forbid_unsat = set()
    forbid_sat = set()
    if prune_doomed:
        for i, cid in enumerate(children):
            v = network.constraints[cid].value
            if v in (Satisfaction.SATISFIED, Satisfaction.SATISFIED_YET):
                forbid_unsat.add(i)
            elif v in (Satisfaction.UNSATISFIED, Satisfaction.UNSATISFIED_YET):
                forbid_sat.add(i)

    def vectors_with(s: int):
        for combo in combinations(range(k), s):
            sat_set = set(combo)
            if sat_set & forbid_sat:
                continue
            if forbid_unsat - sat_set:
                continue
            yield [
                Task(children[i],
                     Polarity.SATISFY if i in sat_set else Polarity.UNSATISFY)
                for i in range(k)
            ]

    paths: list[list[Task]] = []
    if polarity is Polarity.SATISFY:
        for s in range(min(hi, k), lo - 1, -1):
            if s < 0:
                break
            paths.extend(vectors_with(s))
    else:
        ranked: list[tuple[int, tuple[int, ...], list[Task]]] = []
        for s in range(0, k + 1):
            if lo <= s <= hi:
                continue
            dist = lo - s if s < lo else s - hi
            for vec in vectors_with(s):
                key = tuple(0 if t.polarity is Polarity.SATISFY else 1 for t in vec)
                ranked.append((dist, key, vec))
        ranked.sort(key=lambda item: (item[0], item[1]))
        paths = [vec for _, _, vec in ranked]
    return paths


class _Search:
    """Depth-first task execution in continuation-passing style.

    A continuation returns True to abort the whole search (leaving the current
    state committed); returning False keeps enumerating. Each choice point
    advances the clock before trying an alternative and restores on its way
    out; a maximal run of restores with no forward step in between counts as
    one backtrack.
    """

    def __init__(self, network: ConstraintNetwork, trail: Trail, counters: Counters,
                 prune: PruneOptions):
        self.net = network
        self.trail = trail
        self.counters = counters
        self.prune = prune
        self.stopping = False
        self._in_backtrack_run = False

    def _advance(self) -> None:
        self.trail.advance()
        self._in_backtrack_run = False

    def _backtrack(self, to: int) -> None:
        self.trail.restore(self.net, to)
        if not self._in_backtrack_run:
            self.counters.backtracks += 1
            self._in_backtrack_run = True

    def exec_task(self, task: Task, cont, pending: list[Task] = ()) -> bool:
        node = self.net.constraints[task.constraint]
        assert node.active, f"task on inactive constraint {node.id}"
        value = node.value
        sat_wanted = task.polarity is Polarity.SATISFY
        if self.prune.fixed_short_circuits:
            if value is Satisfaction.SATISFIED:
                return cont() if sat_wanted else False
            if value is Satisfaction.UNSATISFIED:
                return cont() if not sat_wanted else False
        if self.prune.yet_short_circuits:
            if value is Satisfaction.SATISFIED_YET and not sat_wanted:
                return False
            if value is Satisfaction.UNSATISFIED_YET and sat_wanted:
                return False
        if node.is_base:
            return self._exec_base(task, node, cont, pending)
        return self._exec_meta(task, node, cont)

    def _exec_base(self, task: Task, node: ConstraintNode, cont,
                   pending: list[Task] = ()) -> bool:
        var = self.net.variables[node.variable]
        rel = node.relation
        want = task.polarity is Polarity.SATISFY
        if var.assignment is not None:
            return cont() if rel.holds(var.assignment) == want else False
        if rel.kind.value == "=":
            candidates = [rel.value] if want else [d for d in var.domain if d != rel.value]
        else:
            candidates = [d for d in var.domain if d != rel.value] if want else [rel.value]
        if self.prune.path_value_filter:
            # sibling tasks later in the same path that test this variable fix
            # the outcome for every candidate; drop values bound to fail there
            for later in pending:
                sib = self.net.constraints[later.constraint]
                if sib.is_base and sib.variable == node.variable:
                    keep = later.polarity is Polarity.SATISFY
                    candidates = [v for v in candidates if sib.relation.holds(v) == keep]
        for val in candidates:
            if self.prune.rn_lookahead and assignment_would_violate(self.net, var.id, val):
                continue
            t0 = self.trail.tick
            self._advance()
            assign_variable(self.net, self.trail, var.id, val, self.counters)
            report = check_activators(self.net, self.trail, self.counters)
            if report.violated:
                self._backtrack(t0)
                continue
            if cont():
                return True
            self._backtrack(t0)
            if self.stopping:
                return False
        return False

    def _exec_meta(self, task: Task, node: ConstraintNode, cont) -> bool:
        paths = generate_paths(self.net, node.id, task.polarity,
                               prune_doomed=self.prune.doomed_vectors)
        for path in paths:
            if self._exec_seq(path, 0, cont):
                return True
            if self.stopping:
                return False
        return False

    def _exec_seq(self, tasks: list[Task], i: int, cont) -> bool:
        if i == len(tasks):
            return cont()
        return self.exec_task(tasks[i], lambda: self._exec_seq(tasks, i + 1, cont),
                              pending=tasks[i + 1:])


def _ensure_recursion_headroom() -> None:
    if sys.getrecursionlimit() < 100_000:
        sys.setrecursionlimit(100_000)


def execute_task(network: ConstraintNetwork, trail: Trail, task: Task,
                 counters: Counters | None = None,
                 prune: PruneOptions | None = None) -> bool:
    """Run one task, committing the first consistent branch found.

    Returns True with the branch committed on the trail, or False with the
    state exactly as before the call.
    """
    _ensure_recursion_headroom()
    search = _Search(network, trail, counters or Counters(), prune or PruneOptions())
    return search.exec_task(task, lambda: True)


def snapshot_solution(network: ConstraintNetwork) -> Solution:
    assignment = tuple(
        sorted((vid, network.variables[vid].assignment) for vid in active_variables(network))
    )
    active = frozenset(cid for cid, c in network.constraints.items() if c.active)
    return Solution(assignment, active)


def check_solution_state(network: ConstraintNetwork) -> bool:
    """Solution invariants on the current state: all active variables assigned,
    everything fixed, the top satisfied, no require-inactive obligation broken,
    and the active set reproducible from the assignment alone."""
    act_vars = active_variables(network)
    for vid in act_vars:
        if network.variables[vid].assignment is None:
            return False
    for vid, var in network.variables.items():
        if var.assignment is not None and vid not in act_vars:
            return False
    for c in network.constraints.values():
        if c.active and not c.value.fixed:
            return False
    if network.constraints[network.top].value is not Satisfaction.SATISFIED:
        return False
    if require_inactive_violations(network):
        return False
    assignment = {vid: network.variables[vid].assignment for vid in act_vars}
    replay = replay_activation(network, assignment)
    current_active = {cid for cid, c in network.constraints.items() if c.active}
    return replay.active == current_active


def solve(network: ConstraintNetwork, trail: Trail, request: Task, mode: Mode,
          prune: PruneOptions | None = None,
          commit_first: bool = False) -> tuple[list[Solution], RunStats]:
    """Execute the request, then complete every success to a full solution by
    re-issuing Satisfy(top) until nothing active is left undetermined; in ALL
    mode each solution forces a backtrack so enumeration continues."""
    _ensure_recursion_headroom()
    counters = Counters()
    prune = prune or PruneOptions()
    search = _Search(network, trail, counters, prune)
    solutions: list[Solution] = []
    top_task = Task(network.top, Polarity.SATISFY)

    if request.constraint not in network.constraints:
        raise ValueError(f"unknown constraint {request.constraint}")

    def emit() -> bool:
        if not check_solution_state(network):
            return False
        solutions.append(snapshot_solution(network))
        if mode is Mode.FIRST:
            if commit_first:
                return True
            search.stopping = True
        return False

    def completion(prev_active: int | None) -> bool:
        if all(not c.active or c.value.fixed for c in network.constraints.values()):
            return emit()
        now_active = sum(1 for c in network.constraints.values() if c.active)
        if prev_active is not None and now_active == prev_active:
            return False
        return search.exec_task(top_task, lambda: completion(now_active))

    # establish load-time values and the activation fixpoint before searching
    # (idempotent when the state is already consistent)
    initialize_values(network, trail, counters)
    report = check_activators(network, trail, counters)
    if not network.constraints[request.constraint].active:
        raise ValueError(f"constraint {request.constraint} is not active")
    if not report.violated:
        search.exec_task(request, lambda: completion(None))

    stats = RunStats(
        assignments=counters.assignments,
        backtracks=counters.backtracks,
        constraint_checks=counters.constraint_checks,
        solutions=len(solutions),
        trail=trail.stats(),
    )
    return solutions, stats
