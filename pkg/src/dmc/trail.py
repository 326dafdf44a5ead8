"""Global clock and per-object history records: every state change is logged
with its tick so any earlier state can be restored exactly by a backward sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ConstraintNetwork, Satisfaction


@dataclass(frozen=True)
class HistoryRecord:
    tick: int
    subject: str
    field: str  # "value" | "active" | "assignment"
    previous: object


@dataclass
class TrailStats:
    counts: dict[str, int]
    min: int
    max: int
    average: float


class Trail:
    """Monotone tick counter plus the chronological list of change records.

    Record counts per constraint accumulate over the whole run, including
    records later discarded by `restore`; the stats measure the space overhead
    of a run, not its peak.
    """

    def __init__(self) -> None:
        self.tick = 0
        self.records: list[HistoryRecord] = []
        self.constraint_counts: dict[str, int] = {}

    def advance(self) -> int:
        self.tick += 1
        return self.tick

    def record_change(self, subject: str, field: str, previous: object, at: int,
                      is_constraint: bool = True) -> None:
        if at != self.tick:
            raise ValueError(f"record at tick {at}, current tick is {self.tick}")
        self.records.append(HistoryRecord(at, subject, field, previous))
        if is_constraint:
            self.constraint_counts[subject] = self.constraint_counts.get(subject, 0) + 1

    def restore(self, network: ConstraintNetwork, to: int) -> None:
        """Rewind network state to what it was immediately after tick `to`."""
        if to > self.tick:
            raise ValueError(f"cannot restore forward: {to} > {self.tick}")
        while self.records and self.records[-1].tick > to:
            rec = self.records.pop()
            if rec.field == "assignment":
                network.variables[rec.subject].assignment = rec.previous
            elif rec.field == "value":
                network.constraints[rec.subject].value = rec.previous
            elif rec.field == "active":
                network.constraints[rec.subject].active = rec.previous
            else:
                raise AssertionError(f"unknown record field {rec.field}")
        self.tick = to

    def stats(self) -> TrailStats:
        counts = dict(self.constraint_counts)
        if not counts:
            return TrailStats({}, 0, 0, 0.0)
        values = list(counts.values())
        return TrailStats(counts, min(values), max(values), sum(values) / len(values))


def set_value(network: ConstraintNetwork, trail: Trail, cid: str, value: Satisfaction) -> None:
    node = network.constraints[cid]
    trail.record_change(cid, "value", node.value, trail.tick)
    node.value = value


def set_active(network: ConstraintNetwork, trail: Trail, cid: str) -> None:
    node = network.constraints[cid]
    trail.record_change(cid, "active", node.active, trail.tick)
    node.active = True


def set_assignment(network: ConstraintNetwork, trail: Trail, vid: str, value: str) -> None:
    var = network.variables[vid]
    trail.record_change(vid, "assignment", var.assignment, trail.tick, is_constraint=False)
    var.assignment = value
