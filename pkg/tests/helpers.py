"""Shared test fixtures: small hand-built networks and a random-network
generator whose activation structure keeps the engine and the brute-force
enumerator comparable (active sets stay upward-closed, activator conditions
reference constraints whose subtrees are never targeted).
"""

from __future__ import annotations

import random

from dmc.model import (
    Activator,
    ActivatorAction,
    BaseRelation,
    CondKind,
    ConstraintNetwork,
    ConstraintNode,
    Receiver,
    RelKind,
    Variable,
)

EQ, NE = RelKind.EQUAL, RelKind.NOT_EQUAL


def base(cid: str, var: str, kind: RelKind, value: str) -> ConstraintNode:
    return ConstraintNode(cid, variable=var, relation=BaseRelation(kind, value))


def meta(cid: str, lo: int, hi: int, children: list[str],
         receiver: Receiver = Receiver.STANDARD) -> ConstraintNode:
    return ConstraintNode(cid, receiver=receiver, min_count=lo, max_count=hi,
                          children=children)


def top(cid: str, children: list[str]) -> ConstraintNode:
    return ConstraintNode(cid, receiver=Receiver.TOP, children=children)


def fig2_network() -> ConstraintNetwork:
    """A meta over two unary demands on Z ('a' or 'c'), with an inactive
    sibling subtree over X, mirroring the active/inactive example network."""
    variables = [
        Variable("x", ["a", "b"]),
        Variable("z", ["a", "b", "c"]),
    ]
    constraints = [
        base("c7", "z", EQ, "a"),
        base("c8", "z", EQ, "c"),
        meta("c3", 1, 2, ["c7", "c8"]),
        base("c5", "x", EQ, "a"),
        meta("c2", 1, 1, ["c5"]),
        meta("c1", 1, 2, ["c2", "c3"]),
        top("t", ["c1"]),
    ]
    return ConstraintNetwork(variables, constraints, [],
                             "t", {"t", "c1", "c3", "c7", "c8"})


def fig3_network() -> ConstraintNetwork:
    """Activator firing example: satisfying the demand on Y activates c21."""
    variables = [Variable("y", ["a", "b"]), Variable("w", ["a", "b"])]
    constraints = [
        base("y_a", "y", EQ, "a"),
        base("c21", "w", EQ, "b"),
        meta("c20", 0, 2, ["y_a", "c21"], receiver=Receiver.ALL_RECEIVER),
        top("t", ["c20"]),
    ]
    activators = [
        Activator("c31", CondKind.CONSTRAINT_SATISFIED, "y_a",
                  ActivatorAction.ACTIVATE, ["c21"]),
    ]
    return ConstraintNetwork(variables, constraints, activators,
                             "t", {"t", "c20", "y_a"})


def single_var_network(domain: list[str], kind: RelKind, value: str) -> ConstraintNetwork:
    variables = [Variable("v", domain)]
    constraints = [base("lit", "v", kind, value), top("t", ["lit"])]
    return ConstraintNetwork(variables, constraints, [], "t", {"t", "lit"})


def random_network(rng: random.Random, max_vars: int = 4,
                   max_constraints: int = 12, max_activators: int = 4,
                   with_activators: bool = True) -> ConstraintNetwork:
    n_vars = rng.randint(1, max_vars)
    variables = [
        Variable(f"v{i}", ["a", "b", "c"][: rng.randint(1, 3)]) for i in range(n_vars)
    ]
    nodes: list[ConstraintNode] = []
    n_bases = rng.randint(1, max(1, max_constraints - 3))
    for i in range(n_bases):
        var = rng.choice(variables)
        kind = rng.choice([EQ, NE])
        nodes.append(base(f"b{i}", var.id, kind, rng.choice(var.domain)))

    unconsumed = [n.id for n in nodes]
    mi = 0
    while len(nodes) < max_constraints - 1 and len(unconsumed) > 1 and rng.random() < 0.8:
        take = rng.randint(1, min(3, len(unconsumed)))
        children = [unconsumed.pop(rng.randrange(len(unconsumed))) for _ in range(take)]
        receiver = rng.choice([Receiver.STANDARD, Receiver.RECEIVER, Receiver.ALL_RECEIVER])
        hi = rng.randint(0, len(children))
        lo = rng.randint(0, hi)
        nodes.append(meta(f"m{mi}", lo, hi, children, receiver=receiver))
        unconsumed.append(f"m{mi}")
        mi += 1
    nodes.append(top("t", unconsumed))

    net_index = {n.id: n for n in nodes}

    def subtree(cid: str) -> list[str]:
        out = [cid]
        stack = list(net_index[cid].children)
        while stack:
            nid = stack.pop()
            out.append(nid)
            stack.extend(net_index[nid].children)
        return out

    # initially active: top plus a few upward-closed subtrees
    active = {"t"}
    for cid in net_index["t"].children:
        if rng.random() < 0.7:
            active.update(subtree(cid))

    activators: list[Activator] = []
    if with_activators:
        # candidate targets: subtrees hanging directly off the active region,
        # so the active set stays upward-closed and reachable from the top
        candidates = [
            cid for cid in net_index
            if cid not in active
            and any(cid in net_index[p].children for p in active if not net_index[p].is_base)
        ]
        targeted: set[str] = set()
        for ai in range(rng.randint(0, max_activators)):
            mode = rng.choice([ActivatorAction.ACTIVATE, ActivatorAction.REQUIRE_INACTIVE])
            if mode is ActivatorAction.ACTIVATE and candidates:
                root = rng.choice(candidates)
                targets = subtree(root)
                targeted.update(targets)
            else:
                mode = ActivatorAction.REQUIRE_INACTIVE
                targets = [rng.choice(list(net_index))]
            # conditions reference bases or variables only, so condition values
            # never flip back once pinned (keeps activation replay-stable)
            if rng.random() < 0.5:
                ck, ref = CondKind.VARIABLE_ACTIVE, rng.choice(variables).id
            else:
                ck = CondKind.CONSTRAINT_SATISFIED
                ref = rng.choice([n.id for n in nodes if n.is_base])
            activators.append(Activator(f"a{ai}", ck, ref, mode, targets))

    return ConstraintNetwork(variables, nodes, activators, "t", active)
