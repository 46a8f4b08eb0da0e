"""Event log ingestion and execution sequences.

Two CSV shapes are accepted.  The direct form carries one state change per
row::

    case_id,artifact,state,timestamp

The activity form carries plain activity names and needs a mapping config
that rewrites each activity into an (artifact, state) pair::

    case_id,activity,timestamp

Rows of one case that share a timestamp are merged into a single composite
state change.  Every case gets an artificial initial entry (all slots "not
started") at its first timestamp and an artificial final entry (all slots
"finished") at its last event timestamp.  Consecutive identical composite
states collapse into one entry, so a trailing row that re-asserts the
current state acts as a pure end-of-observation marker.

Traces that agree on states and inter-entry time deltas are merged into one
sequence with a multiplicity; absolute dates do not matter anywhere
downstream.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConflictError, EmptyLogError, MappingError, ParseError
from .model import (
    ArtifactDecl,
    CompositeState,
    CsmModel,
    FINAL,
    INITIAL,
    Marker,
    ProjectionIndexSet,
    as_index_set,
    final_state,
    initial_state,
    project_state,
    slot_sort_key,
)

logger = logging.getLogger(__name__)

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_MS = timedelta(milliseconds=1)

DIRECT_HEADER = ("case_id", "artifact", "state", "timestamp")
ACTIVITY_HEADER = ("case_id", "activity", "timestamp")


def parse_timestamp(text: str, line: int | None = None) -> int:
    """ISO-8601 timestamp to epoch milliseconds (UTC; naive means UTC)."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ParseError(f"bad timestamp {text!r}: {exc}", line) from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return (dt - _EPOCH) // _MS


def format_timestamp(time_ms: int) -> str:
    dt = _EPOCH + timedelta(milliseconds=time_ms)
    out = dt.isoformat(timespec="milliseconds" if time_ms % 1000 else "seconds")
    return out.replace("+00:00", "Z")


@dataclass(frozen=True, slots=True)
class EventRecord:
    """One state change of one artifact in one case."""

    case_id: str
    artifact: str
    state: str
    time: int  # epoch ms
    line: int  # 1-based source line, for error reporting


_REF = re.compile(r"\$(\d)")


@dataclass(frozen=True)
class MappingRule:
    """Anchored regex over activity names; first matching rule wins.

    The state template may reference capture groups as $1..$9 and the whole
    activity name as $0.
    """

    pattern: str
    artifact: str
    state: str

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "_regex", re.compile(self.pattern))
        except re.error as exc:
            raise MappingError(f"bad pattern {self.pattern!r}: {exc}") from None
        if not self.artifact:
            raise MappingError(f"rule {self.pattern!r}: artifact must be non-empty")

    def apply(self, activity: str) -> tuple[str, str] | None:
        match = self._regex.fullmatch(activity)  # type: ignore[attr-defined]
        if match is None:
            return None

        def ref(m: re.Match) -> str:
            try:
                return match.group(int(m.group(1))) or ""
            except IndexError:
                raise MappingError(
                    f"rule {self.pattern!r}: state template references group "
                    f"${m.group(1)} but the pattern has no such group"
                ) from None

        state = _REF.sub(ref, self.state)
        if not state:
            raise MappingError(
                f"rule {self.pattern!r} maps activity {activity!r} to an empty state"
            )
        return self.artifact, state


@dataclass(frozen=True)
class MappingConfig:
    rules: tuple[MappingRule, ...]
    unmatched_policy: str = "error"  # or "skip"

    def __post_init__(self) -> None:
        if self.unmatched_policy not in ("error", "skip"):
            raise MappingError(
                f"unmatched_policy must be 'error' or 'skip', got {self.unmatched_policy!r}"
            )
        if not self.rules:
            raise MappingError("mapping config needs at least one rule")

    @classmethod
    def from_dict(cls, doc: dict) -> "MappingConfig":
        try:
            rules = tuple(
                MappingRule(r["pattern"], r["artifact"], r["state"])
                for r in doc["rules"]
            )
        except (KeyError, TypeError) as exc:
            raise MappingError(f"malformed mapping config: {exc}") from None
        return cls(rules, doc.get("unmatched_policy", "error"))

    @classmethod
    def load(cls, path: str | Path) -> "MappingConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def map_activity(self, activity: str, line: int | None = None) -> tuple[str, str] | None:
        """(artifact, state) for the first matching rule, None when skipped."""
        for rule in self.rules:
            hit = rule.apply(activity)
            if hit is not None:
                return hit
        if self.unmatched_policy == "skip":
            return None
        where = f" (line {line})" if line is not None else ""
        raise MappingError(f"no mapping rule matches activity {activity!r}{where}")


def parse_events(
    path: str | Path, mapping: MappingConfig | None = None
) -> list[EventRecord]:
    """Read a CSV event file; rows come back grouped by case, time-sorted.

    Ties on the timestamp keep file order.  Case blocks appear in order of
    first appearance.
    """
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file") from None
        header = tuple(h.strip().lower() for h in header)
        if header == DIRECT_HEADER:
            activity_form = False
        elif header == ACTIVITY_HEADER:
            if mapping is None:
                raise MappingError(
                    "activity-form CSV needs a mapping config (columns: "
                    + ",".join(ACTIVITY_HEADER)
                    + ")"
                )
            activity_form = True
        else:
            raise ParseError(
                "unrecognized header "
                + ",".join(header)
                + "; expected "
                + ",".join(DIRECT_HEADER)
                + " or "
                + ",".join(ACTIVITY_HEADER)
            )
        events: list[EventRecord] = []
        for line, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # blank line
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} columns, got {len(row)}", line
                )
            if activity_form:
                case_id, activity, stamp = (c.strip() for c in row)
                if not case_id or not activity:
                    raise ParseError("empty case_id or activity", line)
                mapped = mapping.map_activity(activity, line)
                if mapped is None:
                    continue
                artifact, state = mapped
            else:
                case_id, artifact, state, stamp = (c.strip() for c in row)
                if not case_id or not artifact or not state:
                    raise ParseError("empty case_id, artifact or state", line)
            events.append(
                EventRecord(case_id, artifact, state, parse_timestamp(stamp, line), line)
            )
    # group by case in first-appearance order, stable-sort each case by time
    order: dict[str, int] = {}
    for ev in events:
        order.setdefault(ev.case_id, len(order))
    events.sort(key=lambda ev: (order[ev.case_id], ev.time, ev.line))
    return events


def derive_artifacts(events: Sequence[EventRecord]) -> tuple[ArtifactDecl, ...]:
    """Artifact declarations in first-appearance order (names and states)."""
    names: list[str] = []
    states: dict[str, list[str]] = {}
    for ev in sorted(events, key=lambda e: e.line):
        if ev.artifact not in states:
            names.append(ev.artifact)
            states[ev.artifact] = []
        if ev.state not in states[ev.artifact]:
            states[ev.artifact].append(ev.state)
    return tuple(
        ArtifactDecl(i, name, tuple(states[name])) for i, name in enumerate(names)
    )


@dataclass(frozen=True, slots=True)
class StateEntry:
    """One composite state held from ``time`` until the next entry."""

    state: CompositeState
    time: int  # epoch ms


@dataclass(frozen=True)
class ExecutionSequence:
    """One trace shape: bracketed state entries plus a multiplicity."""

    entries: tuple[StateEntry, ...]
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {self.multiplicity}")
        ent = self.entries
        if len(ent) < 2:
            raise ValueError("sequence needs at least initial and final entries")
        if ent[0].state.kind != INITIAL:
            raise ValueError(f"first entry must be the initial state, got {ent[0].state!r}")
        if ent[-1].state.kind != FINAL:
            raise ValueError(f"last entry must be the final state, got {ent[-1].state!r}")
        for e in ent[1:-1]:
            if not e.state.is_regular:
                raise ValueError(f"interior entry must be regular, got {e.state!r}")
        if ent[0].time > ent[1].time:
            raise ValueError("initial entry is later than the first state change")
        for k in range(1, len(ent) - 2):
            if ent[k].time >= ent[k + 1].time:
                raise ValueError(
                    f"times must strictly increase, entry {k} at {ent[k].time} "
                    f">= entry {k + 1} at {ent[k + 1].time}"
                )
        if len(ent) >= 3 and ent[-1].time < ent[-2].time:
            raise ValueError("final entry is earlier than the last state change")
        for a, b in zip(ent, ent[1:]):
            if a.state == b.state:
                raise ValueError(f"consecutive entries repeat state {a.state!r}")

    @property
    def first_time(self) -> int:
        return self.entries[0].time

    @property
    def last_time(self) -> int:
        return self.entries[-1].time

    @property
    def span(self) -> int:
        return self.last_time - self.first_time


def trace_key(seq: ExecutionSequence) -> tuple:
    """Canonical merge key: state vectors plus inter-entry deltas."""
    key = []
    prev = seq.entries[0].time
    for e in seq.entries:
        key.append((tuple(slot_sort_key(s) for s in e.state.slots), e.time - prev))
        prev = e.time
    return tuple(key)


@dataclass(frozen=True)
class EventLog:
    """A multiset of execution sequences over a fixed artifact vector."""

    artifacts: tuple[ArtifactDecl, ...]
    sequences: tuple[ExecutionSequence, ...]

    @property
    def arity(self) -> int:
        return len(self.artifacts)

    @property
    def total_traces(self) -> int:
        return sum(s.multiplicity for s in self.sequences)


def _merge(sequences: Iterable[ExecutionSequence]) -> tuple[ExecutionSequence, ...]:
    merged: dict[tuple, ExecutionSequence] = {}
    for seq in sequences:
        key = trace_key(seq)
        kept = merged.get(key)
        if kept is None:
            merged[key] = seq
        else:
            merged[key] = ExecutionSequence(
                kept.entries, kept.multiplicity + seq.multiplicity
            )
    return tuple(merged[k] for k in sorted(merged))


def build_sequences(
    events: Sequence[EventRecord],
    artifacts: tuple[ArtifactDecl, ...] | None = None,
) -> EventLog:
    """Fold per-case events into bracketed composite state sequences."""
    if artifacts is None:
        artifacts = derive_artifacts(events)
    index = {a.name: a.index for a in artifacts}
    arity = len(artifacts)

    cases: dict[str, list[EventRecord]] = {}
    for ev in events:
        cases.setdefault(ev.case_id, []).append(ev)

    missing_counts = {a.name: 0 for a in artifacts}
    sequences: list[ExecutionSequence] = []
    for case_id, case_events in cases.items():
        case_events.sort(key=lambda e: (e.time, e.line))
        slots: list[str | Marker] = [Marker.NOT_STARTED] * arity
        entries: list[StateEntry] = [
            StateEntry(initial_state(arity), case_events[0].time)
        ]
        pos = 0
        while pos < len(case_events):
            stamp = case_events[pos].time
            group: dict[int, EventRecord] = {}
            while pos < len(case_events) and case_events[pos].time == stamp:
                ev = case_events[pos]
                ai = index.get(ev.artifact)
                if ai is None:
                    raise MappingError(
                        f"case {case_id!r}: artifact {ev.artifact!r} not declared"
                    )
                seen = group.get(ai)
                if seen is not None and seen.state != ev.state:
                    raise ConflictError(
                        f"case {case_id!r}: artifact {ev.artifact!r} assigned both "
                        f"{seen.state!r} and {ev.state!r} at {format_timestamp(stamp)}"
                    )
                group[ai] = ev
                pos += 1
            for ai, ev in group.items():
                slots[ai] = ev.state
            state = CompositeState(tuple(slots))
            if state != entries[-1].state:
                entries.append(StateEntry(state, stamp))
        entries.append(StateEntry(final_state(arity), case_events[-1].time))
        touched = {ev.artifact for ev in case_events}
        for a in artifacts:
            if a.name not in touched:
                missing_counts[a.name] += 1
        sequences.append(ExecutionSequence(tuple(entries)))

    for name, count in missing_counts.items():
        if count:
            logger.warning(
                "artifact %r has no events in %d of %d cases; "
                "those slots stay 'not started' for the whole trace",
                name,
                count,
                len(cases),
            )
    return EventLog(artifacts, _merge(sequences))


def ingest_csv(path: str | Path, mapping: MappingConfig | None = None) -> EventLog:
    """parse_events + build_sequences in one step."""
    return build_sequences(parse_events(path, mapping))


def discover_model(log: EventLog) -> CsmModel:
    """The observed model: every entry state, every adjacent entry pair.

    Every sequence of the log replays on the result by construction.
    """
    if not log.sequences:
        raise EmptyLogError("cannot discover a model from an empty log")
    states: set[CompositeState] = set()
    transitions: set[tuple[CompositeState, CompositeState]] = set()
    for seq in log.sequences:
        for entry in seq.entries[1:-1]:
            states.add(entry.state)
        for a, b in zip(seq.entries, seq.entries[1:]):
            transitions.add((a.state, b.state))
    return CsmModel(
        artifacts=log.artifacts,
        states=frozenset(states),
        transitions=frozenset(transitions),
        initial=initial_state(log.arity),
        final=final_state(log.arity),
    )


def project_sequence(
    seq: ExecutionSequence, indices: ProjectionIndexSet | Iterable[int]
) -> ExecutionSequence:
    """Project every entry, dropping stutters (keep the earliest of a run)."""
    idx = as_index_set(indices)
    entries: list[StateEntry] = []
    for e in seq.entries:
        state = project_state(e.state, idx)
        if entries and entries[-1].state == state:
            continue
        entries.append(StateEntry(state, e.time))
    # the final bracket always survives: its slots are all 'finished' and no
    # earlier entry projects onto that
    return ExecutionSequence(tuple(entries), seq.multiplicity)


def project_log(
    log: EventLog, indices: ProjectionIndexSet | Iterable[int]
) -> EventLog:
    """Project every sequence and re-merge traces that became identical."""
    idx = as_index_set(indices)
    idx.check_arity(log.arity)
    artifacts = tuple(
        ArtifactDecl(pos, log.artifacts[i].name, log.artifacts[i].states)
        for pos, i in enumerate(idx)
    )
    return EventLog(artifacts, _merge(project_sequence(s, idx) for s in log.sequences))


def write_csv(log: EventLog, path: str | Path) -> None:
    """Write a direct-form CSV that ingests back into an equal log.

    Multiplicities expand into separate cases.  When a trace's final entry
    sits later than its last state change, a row re-asserting the current
    state marks the end of observation (it collapses away on re-ingest).
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(DIRECT_HEADER)
        case_no = 0
        for seq in log.sequences:
            rows: list[tuple[str, str, str]] = []
            prev = seq.entries[0].state.slots
            for entry in seq.entries[1:-1]:
                stamp = format_timestamp(entry.time)
                for ai, slot in enumerate(entry.state.slots):
                    if slot != prev[ai]:
                        assert isinstance(slot, str)
                        rows.append((log.artifacts[ai].name, slot, stamp))
                prev = entry.state.slots
            last = seq.entries[-2]
            if seq.entries[-1].time > last.time:
                for ai, slot in enumerate(last.state.slots):
                    if isinstance(slot, str):
                        rows.append(
                            (log.artifacts[ai].name, slot, format_timestamp(seq.entries[-1].time))
                        )
                        break
            for _ in range(seq.multiplicity):
                case_no += 1
                case_id = f"case{case_no:05d}"
                for artifact, state, stamp in rows:
                    writer.writerow([case_id, artifact, state, stamp])
