"""Reference solvers over the static projection of a network: chronological
backtracking and AC-3 arc consistency. Defined only for networks without
activators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .model import ConstraintNetwork, Satisfaction
from .oracle import evaluate_all


class UnsupportedProblem(Exception):
    """Raised for networks the static baselines cannot represent."""


@dataclass
class Relation:
    scope: tuple[str, ...]
    allowed: set[tuple[str, ...]]


@dataclass
class ClassicCsp:
    variables: list[str]
    domains: dict[str, list[str]]
    relations: list[Relation]


@dataclass
class BtStats:
    assignments: int = 0
    backtracks: int = 0
    constraint_checks: int = 0


@dataclass
class Ac3Result:
    consistent: bool
    domains: dict[str, list[str]]
    revise_calls: int


def static_project(network: ConstraintNetwork) -> ClassicCsp:
    """Flatten each top-level meta-over-literals structure into an explicit
    allowed-tuple relation over its variable scope. Relations satisfied by
    every scope assignment are dropped as trivial."""
    if network.activators:
        raise UnsupportedProblem("network has activators; baselines are static only")
    variables = list(network.variables)
    domains = {vid: list(v.domain) for vid, v in network.variables.items()}
    top = network.constraints[network.top]
    relations: list[Relation] = []
    for cid in top.children:
        scope_set: set[str] = set()
        subtree = [cid]
        stack = [cid]
        while stack:
            node = network.constraints[stack.pop()]
            if node.is_base:
                scope_set.add(node.variable)
            else:
                stack.extend(node.children)
                subtree.extend(node.children)
        scope = tuple(v for v in variables if v in scope_set)
        if not scope:
            continue
        active = set(subtree)
        allowed: set[tuple[str, ...]] = set()
        full = 0
        for combo in product(*(domains[v] for v in scope)):
            full += 1
            values = evaluate_all(network, dict(zip(scope, combo)), active)
            if values[cid] is Satisfaction.SATISFIED:
                allowed.add(combo)
        if len(allowed) < full:
            relations.append(Relation(scope, allowed))
    return ClassicCsp(variables, domains, relations)


def backtrack_solve(csp: ClassicCsp, first_only: bool = False
                    ) -> tuple[list[dict[str, str]], BtStats]:
    """Chronological backtracking, variables in declaration order, values in
    domain order; a relation is checked as soon as its scope is fully assigned,
    stopping at the first violated one. A rejected placement counts as one
    backtrack, and a search that exhausts without any solution backtracks once
    more out of the root."""
    stats = BtStats()
    solutions: list[dict[str, str]] = []
    assignment: dict[str, str] = {}
    order = csp.variables
    by_last_var: dict[str, list[Relation]] = {v: [] for v in order}
    for rel in csp.relations:
        last = max(rel.scope, key=order.index)
        by_last_var[last].append(rel)

    def consistent(var: str) -> bool:
        for rel in by_last_var[var]:
            stats.constraint_checks += 1
            if tuple(assignment[v] for v in rel.scope) not in rel.allowed:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            solutions.append(dict(assignment))
            return first_only
        var = order[i]
        for val in csp.domains[var]:
            stats.assignments += 1
            assignment[var] = val
            if consistent(var):
                if search(i + 1):
                    return True
            else:
                stats.backtracks += 1
            del assignment[var]
        return False

    search(0)
    if not solutions:
        stats.backtracks += 1
    return solutions, stats


def ac3_solve(csp: ClassicCsp) -> Ac3Result:
    """Standard AC-3 over the binary relations (unary relations filter domains
    up front); returns reduced domains or inconsistency on a domain wipeout."""
    domains = {v: list(vals) for v, vals in csp.domains.items()}
    revise_calls = 0
    for rel in csp.relations:
        if len(rel.scope) == 1:
            var = rel.scope[0]
            domains[var] = [d for d in domains[var] if (d,) in rel.allowed]
            if not domains[var]:
                return Ac3Result(False, domains, revise_calls)
        elif len(rel.scope) > 2:
            raise UnsupportedProblem("AC-3 requires unary/binary relations")

    binary = [rel for rel in csp.relations if len(rel.scope) == 2]
    arcs: list[tuple[str, str, Relation]] = []
    for rel in binary:
        x, y = rel.scope
        arcs.append((x, y, rel))
        arcs.append((y, x, rel))

    def revise(xi: str, xj: str, rel: Relation) -> bool:
        nonlocal revise_calls
        revise_calls += 1
        removed = False
        for vi in list(domains[xi]):
            if xi == rel.scope[0]:
                supported = any((vi, vj) in rel.allowed for vj in domains[xj])
            else:
                supported = any((vj, vi) in rel.allowed for vj in domains[xj])
            if not supported:
                domains[xi].remove(vi)
                removed = True
        return removed

    queue = list(arcs)
    while queue:
        xi, xj, rel = queue.pop(0)
        if revise(xi, xj, rel):
            if not domains[xi]:
                return Ac3Result(False, domains, revise_calls)
            for arc in arcs:
                if arc[1] == xi and arc[0] != xj:
                    queue.append(arc)
    return Ac3Result(True, domains, revise_calls)
