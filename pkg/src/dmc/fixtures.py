"""Bundled problems: the car-configuration network (dynamic, with activity
rules) and the classic inconsistent four-variable CSP used for baseline
comparison. Both are generated as documents and shipped as checked-in .dmc
files that must stay byte-identical to what these builders emit.
"""

from __future__ import annotations

from importlib import resources

from .language import (
    ActivatorDecl,
    BaseDecl,
    MetaDecl,
    ProblemDocument,
    VarDecl,
    parse,
)
from .model import ActivatorAction, CondKind, Receiver, RelKind

CAR_VARIABLES: list[tuple[str, list[str], bool]] = [
    ("package", ["luxury", "deluxe", "standard"], True),
    ("frame", ["convertible", "sedan", "hatchback"], True),
    ("engine", ["small", "med", "large"], True),
    ("battery", ["small", "med", "large"], False),
    ("sunroof", ["sr1", "sr2"], False),
    ("airconditioner", ["ac1", "ac2"], False),
    ("glass", ["tinted", "nontinted"], False),
    ("opener", ["auto", "manual"], False),
]


def build_car_fixture() -> ProblemDocument:
    doc = ProblemDocument("car-configuration")
    subtree: dict[str, list[str]] = {}

    def base(cid: str, var: str, op: RelKind, value: str) -> str:
        doc.constraints.append(BaseDecl(cid, var, op, value))
        return cid

    def meta(cid: str, lo: int, hi: int, children: list[str]) -> str:
        doc.constraints.append(MetaDecl(Receiver.STANDARD, cid, lo, hi, children))
        return cid

    for vid, domain, initial in CAR_VARIABLES:
        doc.variables.append(VarDecl(vid, domain, initial))

    # per-variable sections: an exactly-one choice over the value literals,
    # wrapped in an all-receiver together with the compatibility rules below
    section_children: dict[str, list[str]] = {}
    for vid, domain, _ in CAR_VARIABLES:
        lits = [base(f"{vid}_{val}", vid, RelKind.EQUAL, val) for val in domain]
        choice = meta(f"{vid}_choice", 1, 1, lits)
        section_children[vid] = [choice]
        subtree[vid] = [*lits, choice]

    def compat(cid: str, owner: str, lits: list[tuple[str, RelKind, str]]) -> str:
        child_ids = []
        for n, (var, op, value) in enumerate(lits, start=1):
            child_ids.append(base(f"{cid}_{n}", var, op, value))
        meta(cid, 1, len(child_ids), child_ids)
        section_children[owner].append(cid)
        subtree[owner].extend([*child_ids, cid])
        return cid

    NE, EQ = RelKind.NOT_EQUAL, RelKind.EQUAL
    compat("frame_for_standard", "frame",
           [("package", NE, "standard"), ("frame", NE, "convertible")])
    compat("ac_for_standard", "airconditioner",
           [("package", NE, "standard"), ("airconditioner", NE, "ac2")])
    compat("ac_for_luxury", "airconditioner",
           [("package", NE, "luxury"), ("airconditioner", NE, "ac1")])
    compat("battery_for_auto_ac1", "opener",
           [("opener", NE, "auto"), ("airconditioner", NE, "ac1"), ("battery", EQ, "med")])
    compat("battery_for_auto_ac2", "opener",
           [("opener", NE, "auto"), ("airconditioner", NE, "ac2"), ("battery", EQ, "large")])
    compat("glass_for_sr1_ac2", "opener",
           [("sunroof", NE, "sr1"), ("airconditioner", NE, "ac2"), ("glass", NE, "tinted")])

    sections = []
    for vid, _, _ in CAR_VARIABLES:
        sid = f"{vid}_section"
        doc.constraints.append(MetaDecl(Receiver.ALL_RECEIVER, sid, None, None,
                                        section_children[vid]))
        sections.append(sid)
        subtree[vid].append(sid)

    # activation gates: conjunction conditions for the activity rules, kept
    # outside the satisfaction scope by an unconstrained holder
    def pair_gate(cid: str, a: tuple[str, RelKind, str], b: tuple[str, RelKind, str]) -> list[str]:
        la = base(f"{cid}_1", *a)
        lb = base(f"{cid}_2", *b)
        meta(cid, 2, 2, [la, lb])
        return [la, lb, cid]

    def power_gate(cid: str, trigger: tuple[str, RelKind, str]) -> list[str]:
        lt = base(f"{cid}_1", *trigger)
        lb = base(f"{cid}_batt", "battery", NE, "small")
        le = base(f"{cid}_eng", "engine", NE, "small")
        alt = meta(f"{cid}_power", 1, 2, [lb, le])
        meta(cid, 2, 2, [lt, alt])
        return [lt, lb, le, alt, cid]

    g_sun_lux = pair_gate("sunroof_gate_luxury",
                          ("package", EQ, "luxury"), ("frame", NE, "convertible"))
    g_sun_dlx = pair_gate("sunroof_gate_deluxe",
                          ("package", EQ, "deluxe"), ("frame", NE, "convertible"))
    g_ac_lux = power_gate("ac_gate_luxury", ("package", EQ, "luxury"))
    g_ac_sr1 = power_gate("ac_gate_sr1", ("sunroof", EQ, "sr1"))
    g_small = pair_gate("small_power_pair",
                        ("battery", EQ, "small"), ("engine", EQ, "small"))
    gate_roots = ["sunroof_gate_luxury", "sunroof_gate_deluxe", "ac_gate_luxury",
                  "ac_gate_sr1", "small_power_pair"]
    doc.constraints.append(MetaDecl(Receiver.STANDARD, "gates", 0, len(gate_roots), gate_roots))

    doc.constraints.append(MetaDecl(Receiver.TOP, "top", None, None, [*sections, "gates"]))

    def act(aid: str, kind: CondKind, ref: str, action: ActivatorAction, targets: list[str]):
        doc.activators.append(ActivatorDecl(aid, kind, ref, action, targets))

    SAT, VAR = CondKind.CONSTRAINT_SATISFIED, CondKind.VARIABLE_ACTIVE
    ACT, REQ = ActivatorAction.ACTIVATE, ActivatorAction.REQUIRE_INACTIVE
    act("req_sunroof_luxury", SAT, "sunroof_gate_luxury", ACT, subtree["sunroof"])
    act("req_ac_luxury", SAT, "ac_gate_luxury", ACT, subtree["airconditioner"])
    act("req_sunroof_deluxe", SAT, "sunroof_gate_deluxe", ACT, subtree["sunroof"])
    act("req_opener_sr2", SAT, "sunroof_sr2", ACT, subtree["opener"])
    act("req_ac_sr1", SAT, "ac_gate_sr1", ACT, subtree["airconditioner"])
    act("arm_ac_sr1_gate", VAR, "sunroof", ACT, g_ac_sr1)
    act("req_glass_when_sunroof", VAR, "sunroof", ACT, subtree["glass"])
    act("req_battery_when_engine", VAR, "engine", ACT, subtree["battery"])
    act("req_sunroof_when_opener", VAR, "opener", ACT, subtree["sunroof"])
    act("req_sunroof_when_glass", VAR, "glass", ACT, subtree["sunroof"])
    act("no_opener_with_sr1", SAT, "sunroof_sr1", REQ, ["opener_section"])
    act("no_sunroof_with_convertible", SAT, "frame_convertible", REQ, ["sunroof_section"])
    act("no_ac_with_small_power", SAT, "small_power_pair", REQ, ["airconditioner_section"])

    doc.active = [
        *subtree["package"], *subtree["frame"], *subtree["engine"],
        *g_sun_lux, *g_sun_dlx, *g_ac_lux, *g_small,
        "gates", "top",
    ]
    return doc


MACKWORTH_RELATIONS: list[tuple[str, str, list[tuple[str, str]]]] = [
    ("v3", "v5", [("a", "b")]),
    ("v2", "v3", [("b", "a"), ("c", "a"), ("c", "b")]),
    ("v2", "v4", [("c", "a"), ("c", "b")]),
    ("v5", "v4", [("a", "a"), ("a", "b")]),
]


def build_mackworth_fixture() -> ProblemDocument:
    """Static inconsistent CSP over v2..v5, binary relations lowered to
    one-of-allowed-pairs metas; everything initially active, no activators."""
    doc = ProblemDocument("mackworth-classic")
    doc.variables = [
        VarDecl("v2", ["a", "b", "c"]),
        VarDecl("v3", ["a", "b"]),
        VarDecl("v5", ["a", "b"]),
        VarDecl("v4", ["a", "b"]),
    ]
    all_ids: list[str] = []

    def base(cid: str, var: str, value: str) -> str:
        doc.constraints.append(BaseDecl(cid, var, RelKind.EQUAL, value))
        all_ids.append(cid)
        return cid

    top_children = []
    for x, y, pairs in MACKWORTH_RELATIONS:
        eid = f"rel_{x}_{y}"
        pair_ids = []
        for vx, vy in pairs:
            pid = f"{eid}_{vx}{vy}"
            lx = base(f"{pid}_x", x, vx)
            ly = base(f"{pid}_y", y, vy)
            doc.constraints.append(MetaDecl(Receiver.STANDARD, pid, 2, 2, [lx, ly]))
            all_ids.append(pid)
            pair_ids.append(pid)
        doc.constraints.append(MetaDecl(Receiver.STANDARD, eid, 1, 1, pair_ids))
        all_ids.append(eid)
        top_children.append(eid)
    for v in doc.variables:
        lits = [base(f"{v.id}_{val}", v.id, val) for val in v.domain]
        doc.constraints.append(MetaDecl(Receiver.STANDARD, f"{v.id}_choice", 1, 1, lits))
        all_ids.append(f"{v.id}_choice")
        top_children.append(f"{v.id}_choice")
    doc.constraints.append(MetaDecl(Receiver.TOP, "top", None, None, top_children))
    all_ids.append("top")
    doc.active = all_ids
    return doc


def fixture_text(name: str) -> str:
    """Checked-in .dmc source for a bundled fixture."""
    return resources.files("dmc").joinpath(f"data/{name}.dmc").read_text()


def load_fixture(name: str):
    return parse(fixture_text(name)).to_network()
