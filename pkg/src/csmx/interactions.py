"""Pairwise artifact interactions and their probability estimates.

Three interaction kinds relate a condition on artifact ``i`` to a
consequence on artifact ``j``:

* state co-occurrence: the share of the time spent in state ``s_i`` during
  which artifact ``j`` is in state ``s_j``;
* transition co-occurrence: the share of ``(s_i, s'_i)`` transitions that
  happen while artifact ``j`` sits in ``s_j`` (state consequence) or jumps
  ``(s_j, s'_j)`` in the same composite step (transition consequence);
* forward-looking: given artifact ``j`` is in ``s_j`` while artifact ``i``
  is in ``s_i``, the share of j's next moves (with i unchanged) that go to
  ``s'_j``.

Every strength is the confidence of an association rule.  The marginal
probabilities interpret a state statement as its share of total observed
time and a transition statement as its share of all non-bracket composite
transitions; forward statements combine a time share with conditional
next-move frequencies.  All values are exact rationals; a zero denominator
yields None (undefined), which is distinct from a zero strength.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyLogError
from .ingest import EventLog, project_log
from .model import Marker, Slot
from .stats import sojourn_map, total_time, total_transitions, transition_freq_map

KIND_STATE = "state"
KIND_TRANSITION = "transition"
KIND_FORWARD = "forward"
KINDS = (KIND_STATE, KIND_TRANSITION, KIND_FORWARD)


def _is_regular(slot: Slot) -> bool:
    return isinstance(slot, str)


@dataclass(frozen=True, slots=True)
class StateKey:
    """Being in state_i of artifact i implies being in state_j of j."""

    i: int
    j: int
    state_i: str
    state_j: str

    kind = KIND_STATE

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ValueError("interaction needs two distinct artifacts")
        if not (_is_regular(self.state_i) and _is_regular(self.state_j)):
            raise ValueError("state interactions relate regular states only")

    @property
    def boundary(self) -> bool:
        return False


@dataclass(frozen=True, slots=True)
class TransitionKey:
    """Transition (from_i, to_i) implies state or transition context on j.

    from_j == to_j reads "while being in from_j"; otherwise the consequence
    is a simultaneous transition of artifact j.  Bracket markers are legal
    endpoints (an artifact starting or finishing).
    """

    i: int
    j: int
    from_i: Slot
    to_i: Slot
    from_j: Slot
    to_j: Slot

    kind = KIND_TRANSITION

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ValueError("interaction needs two distinct artifacts")
        if self.from_i == self.to_i:
            raise ValueError("condition transition must change the artifact state")

    @property
    def state_consequence(self) -> bool:
        return self.from_j == self.to_j

    @property
    def boundary(self) -> bool:
        return any(
            isinstance(s, Marker)
            for s in (self.from_i, self.to_i, self.from_j, self.to_j)
        )


@dataclass(frozen=True, slots=True)
class ForwardKey:
    """While i sits in state_i and j in from_j, j moves next to to_j."""

    i: int
    j: int
    state_i: str
    from_j: Slot
    to_j: Slot

    kind = KIND_FORWARD

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ValueError("interaction needs two distinct artifacts")
        if not _is_regular(self.state_i):
            raise ValueError("forward interactions condition on a regular state of i")
        if self.from_j == self.to_j:
            raise ValueError("consequence transition must change the artifact state")

    @property
    def boundary(self) -> bool:
        return isinstance(self.from_j, Marker) or isinstance(self.to_j, Marker)


InteractionKey = StateKey | TransitionKey | ForwardKey


@dataclass(frozen=True)
class ProbabilityEstimates:
    """Exact marginals and joint for one interaction, plus its confidence.

    conf is None when the condition was never observed (0/0); p_xy is then
    0 because the joint event was never observed either.
    """

    p_x: Fraction
    p_y: Fraction
    p_xy: Fraction
    conf: Fraction | None

    def __post_init__(self) -> None:
        assert self.p_x >= 0 and self.p_y >= 0 and self.p_xy >= 0
        if self.conf is None:
            assert self.p_xy == 0
        else:
            assert self.p_xy == self.conf * self.p_x


class _SingleStats:
    """Cached statistics of one artifact's projected log."""

    def __init__(self, log: EventLog, index: int):
        projected = project_log(log, (index,))
        self.sojourn: dict[Slot, int] = {
            state.slots[0]: ms for state, ms in sojourn_map(projected).items()
        }
        self.freq: dict[tuple[Slot, Slot], int] = {
            (src.slots[0], dst.slots[0]): n
            for (src, dst), n in transition_freq_map(projected).items()
        }
        # per-state frequency of moves into a regular state, the forward
        # denominator over the single artifact
        self.out_regular: dict[Slot, int] = {}
        for (src, dst), n in self.freq.items():
            if _is_regular(dst):
                self.out_regular[src] = self.out_regular.get(src, 0) + n


class _PairStats:
    """Cached statistics of one artifact pair's projected log (a < b)."""

    def __init__(self, log: EventLog, a: int, b: int):
        projected = project_log(log, (a, b))
        self.sojourn: dict[tuple[Slot, Slot], int] = {
            state.slots: ms for state, ms in sojourn_map(projected).items()
        }
        self.freq: dict[tuple[tuple[Slot, Slot], tuple[Slot, Slot]], int] = {
            (src.slots, dst.slots): n
            for (src, dst), n in transition_freq_map(projected).items()
        }
        # forward denominators: moves of one artifact to a regular state
        # while the other slot is pinned; keyed by (pinned slot, moving slot)
        self.hold_a: dict[tuple[Slot, Slot], int] = {}
        self.hold_b: dict[tuple[Slot, Slot], int] = {}
        for ((ua, ub), (va, vb)), n in self.freq.items():
            if ua == va and _is_regular(vb):
                key = (ua, ub)
                self.hold_a[key] = self.hold_a.get(key, 0) + n
            if ub == vb and _is_regular(va):
                key = (ub, ua)
                self.hold_b[key] = self.hold_b.get(key, 0) + n


class InteractionEngine:
    """Computes strengths and probability estimates over one event log.

    Projections and their statistics are built once per artifact and per
    artifact pair and reused across keys.
    """

    def __init__(self, log: EventLog):
        self.log = log
        self.total_time = total_time(log)
        self.total_transitions = total_transitions(log)
        self._single: dict[int, _SingleStats] = {}
        self._pair: dict[tuple[int, int], _PairStats] = {}

    def single(self, i: int) -> _SingleStats:
        stats = self._single.get(i)
        if stats is None:
            stats = self._single[i] = _SingleStats(self.log, i)
        return stats

    def pair(self, i: int, j: int) -> _PairStats:
        a, b = (i, j) if i < j else (j, i)
        stats = self._pair.get((a, b))
        if stats is None:
            stats = self._pair[(a, b)] = _PairStats(self.log, a, b)
        return stats

    # -- raw counts ---------------------------------------------------

    def _pair_state(self, key_i: int, key_j: int, si: Slot, sj: Slot) -> tuple[Slot, Slot]:
        return (si, sj) if key_i < key_j else (sj, si)

    def pair_sojourn(self, i: int, j: int, si: Slot, sj: Slot) -> int:
        return self.pair(i, j).sojourn.get(self._pair_state(i, j, si, sj), 0)

    def pair_freq(
        self, i: int, j: int, src_i: Slot, src_j: Slot, dst_i: Slot, dst_j: Slot
    ) -> int:
        return self.pair(i, j).freq.get(
            (
                self._pair_state(i, j, src_i, src_j),
                self._pair_state(i, j, dst_i, dst_j),
            ),
            0,
        )

    def hold_freq(self, i: int, j: int, pin_i: Slot, from_j: Slot) -> int:
        """Total moves of j into a regular state while i holds pin_i."""
        pair = self.pair(i, j)
        bucket = pair.hold_a if i < j else pair.hold_b
        return bucket.get((pin_i, from_j), 0)

    # -- strengths ----------------------------------------------------

    def strength(self, key: InteractionKey) -> Fraction | None:
        if isinstance(key, StateKey):
            return self.state_strength(key)
        if isinstance(key, TransitionKey):
            return self.transition_strength(key)
        return self.forward_strength(key)

    def state_strength(self, key: StateKey) -> Fraction | None:
        den = self.single(key.i).sojourn.get(key.state_i, 0)
        if den == 0:
            return None
        num = self.pair_sojourn(key.i, key.j, key.state_i, key.state_j)
        return Fraction(num, den)

    def transition_strength(self, key: TransitionKey) -> Fraction | None:
        den = self.single(key.i).freq.get((key.from_i, key.to_i), 0)
        if den == 0:
            return None
        num = self.pair_freq(
            key.i, key.j, key.from_i, key.from_j, key.to_i, key.to_j
        )
        return Fraction(num, den)

    def forward_strength(self, key: ForwardKey) -> Fraction | None:
        den = self.hold_freq(key.i, key.j, key.state_i, key.from_j)
        if den == 0:
            return None
        num = self.pair_freq(
            key.i, key.j, key.state_i, key.from_j, key.state_i, key.to_j
        )
        return Fraction(num, den)

    def forward_baseline(self, key: ForwardKey) -> Fraction | None:
        """Unconditional share of j's moves from from_j that go to to_j."""
        den = self.single(key.j).out_regular.get(key.from_j, 0)
        if den == 0:
            return None
        num = self.single(key.j).freq.get((key.from_j, key.to_j), 0)
        return Fraction(num, den)

    # -- probability estimates -----------------------------------------

    def _time_share(self, j: int, state_j: Slot) -> Fraction:
        if self.total_time == 0:
            raise EmptyLogError("log has zero observed time")
        return Fraction(self.single(j).sojourn.get(state_j, 0), self.total_time)

    def _transition_share(self, i: int, src: Slot, dst: Slot) -> Fraction:
        if self.total_transitions == 0:
            raise EmptyLogError("log has no composite transitions between states")
        return Fraction(
            self.single(i).freq.get((src, dst), 0), self.total_transitions
        )

    def estimate(self, key: InteractionKey) -> ProbabilityEstimates:
        conf = self.strength(key)
        if isinstance(key, StateKey):
            p_x = self._time_share(key.i, key.state_i)
            p_y = self._time_share(key.j, key.state_j)
            p_xy = Fraction(
                self.pair_sojourn(key.i, key.j, key.state_i, key.state_j),
                self.total_time,
            )
        elif isinstance(key, TransitionKey):
            p_x = self._transition_share(key.i, key.from_i, key.to_i)
            if key.state_consequence:
                p_y = self._time_share(key.j, key.from_j)
            else:
                p_y = self._transition_share(key.j, key.from_j, key.to_j)
            if self.total_transitions == 0:
                raise EmptyLogError("log has no composite transitions between states")
            p_xy = Fraction(
                self.pair_freq(
                    key.i, key.j, key.from_i, key.from_j, key.to_i, key.to_j
                ),
                self.total_transitions,
            )
        else:
            hold = self.hold_freq(key.i, key.j, key.state_i, key.from_j)
            out = self.single(key.j).out_regular.get(key.from_j, 0)
            share = self._time_share(key.j, key.from_j)
            p_x = share * Fraction(hold, out) if out else Fraction(0)
            base = self.forward_baseline(key)
            p_y = share * base if base is not None else Fraction(0)
            num = self.pair_freq(
                key.i, key.j, key.state_i, key.from_j, key.state_i, key.to_j
            )
            p_xy = share * Fraction(num, out) if out else Fraction(0)
        return ProbabilityEstimates(p_x=p_x, p_y=p_y, p_xy=p_xy, conf=conf)


# Spec-shaped conveniences; build a throwaway engine.  Use the engine
# directly when scoring many keys over one log.


def state_strength(key: StateKey, log: EventLog) -> Fraction | None:
    return InteractionEngine(log).state_strength(key)


def transition_strength(key: TransitionKey, log: EventLog) -> Fraction | None:
    return InteractionEngine(log).transition_strength(key)


def forward_strength(key: ForwardKey, log: EventLog) -> Fraction | None:
    return InteractionEngine(log).forward_strength(key)


def estimate_probabilities(key: InteractionKey, log: EventLog) -> ProbabilityEstimates:
    return InteractionEngine(log).estimate(key)
