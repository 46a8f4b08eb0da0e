"""Composite state machines over multiple artifacts, and their projections.

A composite state is a vector with one slot per artifact.  Each slot holds
either the name of a state of that artifact or one of two artificial
markers: NOT_STARTED (the artifact has not produced an event yet) and
FINISHED (the artifact is past its last event).  The state with every slot
NOT_STARTED is the artificial initial state of the machine, the state with
every slot FINISHED is the artificial final state; everything else is a
regular state.

A model is a set of regular states plus a transition relation.  Transitions
never loop on one state, nothing enters the initial state and nothing
leaves the final state.  Projecting a model onto a subset of artifact
indices keeps the selected slots, merges states that become equal and drops
transitions that collapse into self-loops.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ProjectionError


class Marker(enum.Enum):
    """Artificial per-artifact slot values."""

    NOT_STARTED = "not started"
    FINISHED = "finished"

    def __repr__(self) -> str:  # keep test output short
        return self.name


Slot = str | Marker

REGULAR = "regular"
INITIAL = "initial"
FINAL = "final"


@dataclass(frozen=True, slots=True)
class ArtifactDecl:
    """One artifact: position in the slot vector, name, observed states."""

    index: int
    name: str
    states: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"artifact index must be >= 0, got {self.index}")
        if not self.name:
            raise ValueError("artifact name must be non-empty")
        if len(set(self.states)) != len(self.states):
            raise ValueError(f"artifact {self.name!r} has duplicate state names")
        if any(not s for s in self.states):
            raise ValueError(f"artifact {self.name!r} has an empty state name")


@dataclass(frozen=True, slots=True)
class CompositeState:
    """A slot vector; equality and hashing are slot-wise."""

    slots: tuple[str | Marker, ...]

    def __post_init__(self) -> None:
        if not self.slots:
            raise ValueError("composite state needs at least one slot")

    @property
    def kind(self) -> str:
        """Derived, never stored: initial / final / regular."""
        if all(s is Marker.NOT_STARTED for s in self.slots):
            return INITIAL
        if all(s is Marker.FINISHED for s in self.slots):
            return FINAL
        return REGULAR

    @property
    def is_regular(self) -> bool:
        return self.kind == REGULAR

    def slot(self, index: int) -> str | Marker:
        return self.slots[index]

    def replace(self, index: int, value: str | Marker) -> "CompositeState":
        slots = list(self.slots)
        slots[index] = value
        return CompositeState(tuple(slots))

    def __repr__(self) -> str:
        parts = []
        for s in self.slots:
            if s is Marker.NOT_STARTED:
                parts.append("⊥")
            elif s is Marker.FINISHED:
                parts.append("⊤")
            else:
                parts.append(s)
        return "(" + ",".join(parts) + ")"


def initial_state(arity: int) -> CompositeState:
    return CompositeState((Marker.NOT_STARTED,) * arity)


def final_state(arity: int) -> CompositeState:
    return CompositeState((Marker.FINISHED,) * arity)


def slot_sort_key(slot: str | Marker) -> tuple[int, str]:
    """Total order over slot values: NOT_STARTED < names < FINISHED."""
    if slot is Marker.NOT_STARTED:
        return (0, "")
    if slot is Marker.FINISHED:
        return (2, "")
    return (1, slot)


def state_sort_key(state: CompositeState) -> tuple[tuple[int, str], ...]:
    return tuple(slot_sort_key(s) for s in state.slots)


Transition = tuple[CompositeState, CompositeState]


@dataclass(frozen=True)
class ProjectionIndexSet:
    """Validated, strictly increasing artifact indices to keep."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.indices:
            raise ProjectionError("projection index set must be non-empty")
        if any(i < 0 for i in self.indices):
            raise ProjectionError(f"negative artifact index in {self.indices}")
        if list(self.indices) != sorted(set(self.indices)):
            raise ProjectionError(
                f"projection indices must be strictly increasing, got {self.indices}"
            )

    def check_arity(self, arity: int) -> None:
        if self.indices[-1] >= arity:
            raise ProjectionError(
                f"index {self.indices[-1]} out of range for {arity} artifacts"
            )

    def __iter__(self):
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)


def as_index_set(indices: "ProjectionIndexSet | Iterable[int]") -> ProjectionIndexSet:
    if isinstance(indices, ProjectionIndexSet):
        return indices
    return ProjectionIndexSet(tuple(indices))


@dataclass(frozen=True)
class CsmModel:
    """A composite state machine: regular states, transitions, brackets.

    ``states`` holds only regular states.  ``transitions`` may start at the
    initial state and end at the final state, never the other way around,
    and never loops.  Violations raise ValueError at construction time.
    """

    artifacts: tuple[ArtifactDecl, ...]
    states: frozenset[CompositeState]
    transitions: frozenset[tuple[CompositeState, CompositeState]]
    initial: CompositeState = field(repr=False, default=None)  # type: ignore[assignment]
    final: CompositeState = field(repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        arity = len(self.artifacts)
        if arity == 0:
            raise ValueError("model needs at least one artifact")
        for pos, art in enumerate(self.artifacts):
            if art.index != pos:
                raise ValueError(
                    f"artifact {art.name!r} declared at index {art.index}, stored at {pos}"
                )
        if self.initial is None:
            object.__setattr__(self, "initial", initial_state(arity))
        if self.final is None:
            object.__setattr__(self, "final", final_state(arity))
        if self.initial.kind != INITIAL or len(self.initial.slots) != arity:
            raise ValueError("bad initial state")
        if self.final.kind != FINAL or len(self.final.slots) != arity:
            raise ValueError("bad final state")
        for st in self.states:
            if len(st.slots) != arity:
                raise ValueError(f"state {st!r} has wrong arity")
            if not st.is_regular:
                raise ValueError(f"{st!r} is a bracket state, not a regular state")
        known = self.states | {self.initial, self.final}
        for src, dst in self.transitions:
            if src == dst:
                raise ValueError(f"self-loop on {src!r}")
            if src == self.final:
                raise ValueError(f"transition leaves the final state: {src!r}->{dst!r}")
            if dst == self.initial:
                raise ValueError(f"transition enters the initial state: {src!r}->{dst!r}")
            if src not in known or dst not in known:
                raise ValueError(f"transition endpoint not in state set: {src!r}->{dst!r}")

    @property
    def arity(self) -> int:
        return len(self.artifacts)

    def artifact_named(self, name: str) -> ArtifactDecl:
        for art in self.artifacts:
            if art.name == name:
                return art
        raise KeyError(name)

    def sorted_states(self) -> list[CompositeState]:
        return sorted(self.states, key=state_sort_key)

    def sorted_transitions(self) -> list[tuple[CompositeState, CompositeState]]:
        return sorted(
            self.transitions, key=lambda t: (state_sort_key(t[0]), state_sort_key(t[1]))
        )


def project_state(
    state: CompositeState, indices: "ProjectionIndexSet | Iterable[int]"
) -> CompositeState:
    """Keep the selected slots, in index order."""
    idx = as_index_set(indices)
    idx.check_arity(len(state.slots))
    return CompositeState(tuple(state.slots[i] for i in idx))


def project_model(
    model: CsmModel, indices: "ProjectionIndexSet | Iterable[int]"
) -> CsmModel:
    """Project a model onto a subset of its artifacts.

    States merge when their kept slots coincide; transitions that merge
    their endpoints into one state are dropped (no self-loops).
    """
    idx = as_index_set(indices)
    idx.check_arity(model.arity)
    artifacts = tuple(
        ArtifactDecl(pos, model.artifacts[i].name, model.artifacts[i].states)
        for pos, i in enumerate(idx)
    )
    # A regular state whose kept slots are all markers coincides with a
    # bracket of the smaller machine (partial coverage puts NOT_STARTED
    # markers into regular states); it merges into that bracket.
    states = frozenset(
        s for s in (project_state(st, idx) for st in model.states) if s.is_regular
    )
    transitions = frozenset(
        (a, b)
        for a, b in (
            (project_state(src, idx), project_state(dst, idx))
            for src, dst in model.transitions
        )
        if a != b
    )
    return CsmModel(
        artifacts=artifacts,
        states=states,
        transitions=transitions,
        initial=initial_state(len(artifacts)),
        final=final_state(len(artifacts)),
    )


def artifact_model(model: CsmModel, index: int) -> CsmModel:
    """The single-artifact model: the projection onto one index."""
    return project_model(model, (index,))


def artifact_indices(model: CsmModel, names: Sequence[str]) -> ProjectionIndexSet:
    """Translate artifact names into a projection index set (index order)."""
    by_name = {a.name: a.index for a in model.artifacts}
    missing = [n for n in names if n not in by_name]
    if missing:
        raise ProjectionError(f"unknown artifact name(s): {', '.join(missing)}")
    return ProjectionIndexSet(tuple(sorted(by_name[n] for n in set(names))))
