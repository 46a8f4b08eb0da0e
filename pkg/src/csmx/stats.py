"""Sojourn times and transition frequencies, in exact integer arithmetic.

Durations are epoch-millisecond differences; every count is multiplicity
weighted.  Ratios are produced downstream (interactions, measures), never
here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConformanceError
from .ingest import EventLog, ExecutionSequence
from .model import CompositeState, CsmModel


def entry_duration(seq: ExecutionSequence, k: int) -> int:
    """Time spent in entry ``k`` (0-based): next entry time minus this one.

    The last entry has duration 0 by definition.
    """
    entries = seq.entries
    if not 0 <= k < len(entries):
        raise IndexError(f"entry index {k} out of range 0..{len(entries) - 1}")
    if k == len(entries) - 1:
        return 0
    return entries[k + 1].time - entries[k].time


def durations(seq: ExecutionSequence) -> list[int]:
    """Per-entry durations; first and last are 0 for built sequences."""
    return [entry_duration(seq, k) for k in range(len(seq.entries))]


def sojourn(state: CompositeState, log: EventLog) -> int:
    """Total multiplicity-weighted time the log spends in ``state``."""
    total = 0
    for seq in log.sequences:
        held = 0
        for k, entry in enumerate(seq.entries):
            if entry.state == state:
                held += entry_duration(seq, k)
        total += held * seq.multiplicity
    return total


def sojourn_map(log: EventLog) -> dict[CompositeState, int]:
    """Sojourn of every state that appears in the log (brackets included)."""
    totals: dict[CompositeState, int] = {}
    for seq in log.sequences:
        for k, entry in enumerate(seq.entries):
            d = entry_duration(seq, k) * seq.multiplicity
            totals[entry.state] = totals.get(entry.state, 0) + d
    return totals


def transition_freq(
    src: CompositeState, dst: CompositeState, log: EventLog
) -> int:
    """Multiplicity-weighted count of adjacent entry pairs (src, dst)."""
    total = 0
    for seq in log.sequences:
        hits = 0
        for a, b in zip(seq.entries, seq.entries[1:]):
            if a.state == src and b.state == dst:
                hits += 1
        total += hits * seq.multiplicity
    return total


def transition_freq_map(
    log: EventLog,
) -> dict[tuple[CompositeState, CompositeState], int]:
    """Frequency of every adjacent pair in the log (brackets included)."""
    freqs: dict[tuple[CompositeState, CompositeState], int] = {}
    for seq in log.sequences:
        for a, b in zip(seq.entries, seq.entries[1:]):
            key = (a.state, b.state)
            freqs[key] = freqs.get(key, 0) + seq.multiplicity
    return freqs


def total_time(log: EventLog) -> int:
    """Multiplicity-weighted sum of trace spans.

    Equals the sum of regular-state sojourns whenever every artifact starts
    at its trace's first timestamp (built logs always do; projections of
    partially covered logs may spend time in the initial bracket instead).
    """
    return sum(seq.span * seq.multiplicity for seq in log.sequences)


def total_transitions(log: EventLog) -> int:
    """Composite transitions excluding the brackets into and out of a trace.

    A trace with n entries contributes n - 3 transitions (one bracket at
    each end of the n - 1 adjacent pairs); traces too short to have any
    contribute nothing.
    """
    return sum(
        max(len(seq.entries) - 3, 0) * seq.multiplicity for seq in log.sequences
    )


@dataclass(frozen=True)
class Annotation:
    """Per-state sojourn totals and per-transition frequencies for a model.

    ``sojourn_avg_visiting`` divides by the multiplicity-weighted number of
    traces that visit the state at least once (the number an annotated
    model diagram shows); ``sojourn_avg_all`` divides by the total number
    of traces.
    """

    sojourn_total: dict[CompositeState, int]
    sojourn_avg_visiting: dict[CompositeState, float]
    sojourn_avg_all: dict[CompositeState, float]
    transition_freq: dict[tuple[CompositeState, CompositeState], int]


def annotate(model: CsmModel, log: EventLog) -> Annotation:
    """Attach log statistics to a model the log replays on.

    Raises ConformanceError naming the first offending trace when some
    entry or adjacent pair is unknown to the model.
    """
    known_states = model.states | {model.initial, model.final}
    for ti, seq in enumerate(log.sequences):
        for entry in seq.entries:
            if entry.state not in known_states:
                raise ConformanceError(
                    f"trace {ti}: state {entry.state!r} not in the model"
                )
        for a, b in zip(seq.entries, seq.entries[1:]):
            if (a.state, b.state) not in model.transitions:
                raise ConformanceError(
                    f"trace {ti}: transition {a.state!r} -> {b.state!r} "
                    "not in the model"
                )

    totals = {state: 0 for state in model.states}
    visits = {state: 0 for state in model.states}
    freqs = {t: 0 for t in model.transitions}
    for seq in log.sequences:
        seen: set[CompositeState] = set()
        for k, entry in enumerate(seq.entries[1:-1], start=1):
            totals[entry.state] += entry_duration(seq, k) * seq.multiplicity
            seen.add(entry.state)
        for state in seen:
            visits[state] += seq.multiplicity
        for a, b in zip(seq.entries, seq.entries[1:]):
            freqs[(a.state, b.state)] += seq.multiplicity

    # regular sojourns telescope to span minus any initial-bracket time
    covered = sum(
        (seq.last_time - seq.entries[1].time) * seq.multiplicity
        for seq in log.sequences
        if len(seq.entries) > 2
    )
    assert sum(totals.values()) == covered

    traces = log.total_traces
    avg_visiting = {
        s: (totals[s] / visits[s] if visits[s] else 0.0) for s in totals
    }
    avg_all = {s: (totals[s] / traces if traces else 0.0) for s in totals}
    return Annotation(totals, avg_visiting, avg_all, freqs)
