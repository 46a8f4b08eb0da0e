"""Independent reference computations used to cross-check the engine.

Everything here works directly on entry lists with plain loops and exact
Fractions.  Nothing imports the engine's statistics or interaction code, so
agreement between the two is meaningful evidence rather than a tautology.
"""

from __future__ import annotations

import random
from fractions import Fraction

from csmx.ingest import EventLog, ExecutionSequence, StateEntry, _merge
from csmx.model import ArtifactDecl, CompositeState, Marker, final_state, initial_state

DAY_MS = 86_400_000


# ---------------------------------------------------------------------------
# tick expansion: time-based probabilities as day counts


def _interior(seq: ExecutionSequence) -> list[tuple[CompositeState, int]]:
    """(state, duration in ms) for every entry that accrues time.

    The first entry accrues time until the second one (zero for logs built
    straight from events, positive after projection), the last accrues none.
    """
    out = []
    for k in range(len(seq.entries) - 1):
        span = seq.entries[k + 1].time - seq.entries[k].time
        if span:
            out.append((seq.entries[k].state, span))
    return out


def tick_table(log: EventLog) -> dict[tuple, int]:
    """Day counts per composite state, expanded one tick per day.

    Requires all timestamps on whole-day boundaries, which the generator
    below guarantees.
    """
    table: dict[tuple, int] = {}
    for seq in log.sequences:
        for state, span in _interior(seq):
            assert span % DAY_MS == 0
            ticks = (span // DAY_MS) * seq.multiplicity
            table[state.slots] = table.get(state.slots, 0) + ticks
    return table


def oracle_state_strength(
    log: EventLog, i: int, j: int, si: str, sj: str
) -> Fraction | None:
    table = tick_table(log)
    pair = sum(n for slots, n in table.items() if slots[i] == si and slots[j] == sj)
    alone = sum(n for slots, n in table.items() if slots[i] == si)
    if alone == 0:
        return None
    return Fraction(pair, alone)


def oracle_state_estimates(
    log: EventLog, i: int, j: int, si: str, sj: str
) -> tuple[Fraction, Fraction, Fraction]:
    table = tick_table(log)
    total = sum(table.values())
    px = Fraction(sum(n for s, n in table.items() if s[i] == si), total)
    py = Fraction(sum(n for s, n in table.items() if s[j] == sj), total)
    pxy = Fraction(
        sum(n for s, n in table.items() if s[i] == si and s[j] == sj), total
    )
    return px, py, pxy


# ---------------------------------------------------------------------------
# pair walks: transition counting without the engine's projection code


def pair_walk(seq: ExecutionSequence, i: int, j: int) -> list[tuple]:
    """Stutter-removed sequence of (slot_i, slot_j) pairs, brackets included."""
    walk: list[tuple] = []
    for entry in seq.entries:
        pair = (entry.state.slots[i], entry.state.slots[j])
        if not walk or walk[-1] != pair:
            walk.append(pair)
    return walk


def single_walk(seq: ExecutionSequence, i: int) -> list:
    walk: list = []
    for entry in seq.entries:
        slot = entry.state.slots[i]
        if not walk or walk[-1] != slot:
            walk.append(slot)
    return walk


def pair_move_counts(log: EventLog, i: int, j: int) -> dict[tuple, int]:
    """Multiplicity-weighted counts of pair moves ((a, b) -> (a2, b2))."""
    counts: dict[tuple, int] = {}
    for seq in log.sequences:
        walk = pair_walk(seq, i, j)
        for a, b in zip(walk, walk[1:]):
            counts[(a, b)] = counts.get((a, b), 0) + seq.multiplicity
    return counts


def single_move_counts(log: EventLog, i: int) -> dict[tuple, int]:
    counts: dict[tuple, int] = {}
    for seq in log.sequences:
        walk = single_walk(seq, i)
        for a, b in zip(walk, walk[1:]):
            counts[(a, b)] = counts.get((a, b), 0) + seq.multiplicity
    return counts


def oracle_transition_strength(
    log: EventLog, i: int, j: int, from_i: str, to_i: str, from_j, to_j
) -> Fraction | None:
    pair = pair_move_counts(log, i, j).get(((from_i, from_j), (to_i, to_j)), 0)
    alone = single_move_counts(log, i).get((from_i, to_i), 0)
    if alone == 0:
        return None
    return Fraction(pair, alone)


def oracle_forward_strength(
    log: EventLog, i: int, j: int, si: str, from_j: str, to_j: str
) -> Fraction | None:
    moves = pair_move_counts(log, i, j)
    hit = moves.get(((si, from_j), (si, to_j)), 0)
    out = sum(
        n
        for ((a, b), (a2, b2)), n in moves.items()
        if a == si and a2 == si and b == from_j and b != b2
        and not isinstance(b2, Marker)
    )
    if out == 0:
        return None
    return Fraction(hit, out)


def observed_pair_states(log: EventLog, i: int, j: int) -> set[tuple]:
    """Regular (slot_i, slot_j) pairs that accrue any time."""
    pairs = set()
    for seq in log.sequences:
        for state, _ in _interior(seq):
            a, b = state.slots[i], state.slots[j]
            if not isinstance(a, Marker) and not isinstance(b, Marker):
                pairs.add((a, b))
    return pairs


# ---------------------------------------------------------------------------
# seeded random logs with full artifact coverage


def random_log(seed: int) -> EventLog:
    """A small random multi-artifact log with whole-day timestamps.

    Every artifact is assigned a state at each trace's first timestamp, so
    every interior composite state is fully regular.
    """
    rng = random.Random(seed)
    arity = rng.randint(2, 4)
    decls = []
    for idx in range(arity):
        states = tuple(f"s{k}" for k in range(rng.randint(2, 6)))
        decls.append(ArtifactDecl(index=idx, name=f"a{idx}", states=states))
    artifacts = tuple(decls)

    sequences = []
    for trace in range(rng.randint(3, 20)):
        base = DAY_MS * rng.randint(0, 30)
        slots = [rng.choice(decl.states) for decl in decls]
        entries = [
            StateEntry(initial_state(arity), base),
            StateEntry(CompositeState(tuple(slots)), base),
        ]
        time = base
        for _ in range(rng.randint(1, 9)):
            movers = rng.sample(range(arity), rng.randint(1, arity))
            changed = False
            for idx in movers:
                options = [s for s in decls[idx].states if s != slots[idx]]
                if options:
                    slots[idx] = rng.choice(options)
                    changed = True
            if not changed:
                continue
            time += DAY_MS * rng.randint(1, 5)
            entries.append(StateEntry(CompositeState(tuple(slots)), time))
        final_time = time + DAY_MS * rng.randint(0, 3)
        entries.append(StateEntry(final_state(arity), final_time))
        sequences.append(
            ExecutionSequence(
                entries=tuple(entries), multiplicity=rng.randint(1, 3)
            )
        )
    return EventLog(artifacts=artifacts, sequences=_merge(sequences))
