"""Ranking, filtering and explaining interactions; JSON import/export.

The query model is deliberately small: pick interaction kinds, sort by one
measure, keep records above per-measure minimums, optionally restrict to
one artifact pair, cap the count.  Undefined interactions (condition never
observed) and keys touching the artificial bracket states are excluded
unless asked for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NotFoundError, QueryError
from .ingest import EventLog
from .interactions import (
    ForwardKey,
    InteractionEngine,
    InteractionKey,
    KINDS,
    StateKey,
    TransitionKey,
)
from .errors import EmptyLogError
from .measures import (
    InteractionRecord,
    MEASURES,
    MeasureVector,
    compute_measures,
    encode_value,
    sort_rank,
)
from .model import (
    CompositeState,
    CsmModel,
    Marker,
    Slot,
    artifact_model,
    slot_sort_key,
)
from .stats import Annotation

_MEASURE_RANGE = {
    "confidence": (0.0, 1.0),
    "support": (0.0, 1.0),
    "lift": (0.0, None),
    "conviction": (0.0, None),
    "cosine": (0.0, 1.0),
    "jaccard": (0.0, 1.0),
    "phi": (-1.0, 1.0),
}


@dataclass(frozen=True)
class Query:
    """Which interactions to return, in what order, above what floors."""

    kinds: tuple[str, ...] = KINDS
    sort_by: str = "lift"
    descending: bool = True
    min_values: Mapping[str, float] = field(
        default_factory=lambda: {"support": 0.001}
    )
    pair: tuple[str, str] | None = None
    limit: int = 50
    include_boundary: bool = False
    include_undefined: bool = False

    def __post_init__(self) -> None:
        if not self.kinds:
            raise QueryError("query needs at least one interaction kind")
        for kind in self.kinds:
            if kind not in KINDS:
                raise QueryError(f"unknown interaction kind {kind!r}")
        if self.sort_by not in MEASURES:
            raise QueryError(f"unknown measure {self.sort_by!r}")
        if not isinstance(self.limit, int) or self.limit < 0:
            raise QueryError(f"limit must be a non-negative integer, got {self.limit!r}")
        for measure, floor in self.min_values.items():
            if measure not in MEASURES:
                raise QueryError(f"unknown measure {measure!r} in thresholds")
            lo, hi = _MEASURE_RANGE[measure]
            if floor < lo or (hi is not None and floor > hi):
                raise QueryError(
                    f"threshold {floor!r} outside the range of {measure}"
                )
        if self.pair is not None:
            if len(self.pair) != 2 or self.pair[0] == self.pair[1]:
                raise QueryError("pair filter needs two distinct artifact names")


def slot_text(slot: Slot) -> str:
    if slot is Marker.NOT_STARTED:
        return "(not started)"
    if slot is Marker.FINISHED:
        return "(finished)"
    return slot


def _percent(value: Fraction | float) -> str:
    return f"{float(value) * 100:.1f}%"


def interpret(
    key: InteractionKey,
    conf: Fraction | None,
    baseline: Fraction | None = None,
) -> str:
    """One plain-English sentence for a scored interaction."""
    if conf is None:
        if isinstance(key, StateKey):
            subject = f"time spent in {slot_text(key.state_i)}"
        elif isinstance(key, TransitionKey):
            subject = (
                f"transitions from {slot_text(key.from_i)} to {slot_text(key.to_i)}"
            )
        else:
            subject = (
                f"moves out of {slot_text(key.from_j)} while being in "
                f"{slot_text(key.state_i)}"
            )
        return f"Undefined: no {subject} were observed."
    if isinstance(key, StateKey):
        return (
            f"{_percent(conf)} of the total time spent in {key.state_i} "
            f"is spent while being in {key.state_j}"
        )
    if isinstance(key, TransitionKey):
        head = (
            f"Transitions from {slot_text(key.from_i)} to {slot_text(key.to_i)} "
            f"occur {_percent(conf)} of the times"
        )
        if key.state_consequence:
            return f"{head} while being in {slot_text(key.from_j)}"
        return (
            f"{head} together with a transition from {slot_text(key.from_j)} "
            f"to {slot_text(key.to_j)}"
        )
    sentence = (
        f"A transition from {slot_text(key.from_j)} goes {_percent(conf)} "
        f"of the times to {slot_text(key.to_j)} while being in {key.state_i}"
    )
    if baseline is not None:
        sentence += f" (compared to {_percent(baseline)} on average)"
    return sentence


def condition_text(key: InteractionKey, model: CsmModel) -> str:
    name_i = model.artifacts[key.i].name
    if isinstance(key, StateKey):
        return f"{name_i}::{key.state_i}"
    if isinstance(key, TransitionKey):
        return f"{name_i}::{slot_text(key.from_i)}->{slot_text(key.to_i)}"
    name_j = model.artifacts[key.j].name
    return f"{name_i}::{key.state_i} & {name_j}::{slot_text(key.from_j)}"


def consequence_text(key: InteractionKey, model: CsmModel) -> str:
    name_j = model.artifacts[key.j].name
    if isinstance(key, StateKey):
        return f"{name_j}::{key.state_j}"
    if isinstance(key, TransitionKey):
        if key.state_consequence:
            return f"{name_j}::{slot_text(key.from_j)}"
        return f"{name_j}::{slot_text(key.from_j)}->{slot_text(key.to_j)}"
    return f"{name_j}::{slot_text(key.from_j)}->{slot_text(key.to_j)}"


def _tiebreak(record: InteractionRecord, model: CsmModel) -> tuple:
    key = record.key
    return (
        key.kind,
        model.artifacts[key.i].name,
        condition_text(key, model),
        model.artifacts[key.j].name,
        consequence_text(key, model),
    )


@dataclass(frozen=True)
class _ArtifactElements:
    states: tuple[str, ...]
    transitions: tuple[tuple[Slot, Slot], ...]


def _elements(model: CsmModel) -> list[_ArtifactElements]:
    """Observed states and transitions of every artifact's own model."""
    out = []
    for art in model.artifacts:
        single = artifact_model(model, art.index)
        observed = {s.slots[0] for s in single.states}
        states = tuple(s for s in art.states if s in observed)
        extra = tuple(sorted(observed - set(states)))  # states missing from decl
        transitions = tuple(
            sorted(
                ((src.slots[0], dst.slots[0]) for src, dst in single.transitions),
                key=lambda t: (slot_sort_key(t[0]), slot_sort_key(t[1])),
            )
        )
        out.append(_ArtifactElements(states + extra, transitions))
    return out


def _has_marker(*slots: Slot) -> bool:
    return any(isinstance(s, Marker) for s in slots)


def _candidate_keys(
    model: CsmModel, elements: Sequence[_ArtifactElements], query: Query
) -> Iterable[InteractionKey]:
    pairs = []
    if query.pair is not None:
        wanted = set(query.pair)
        names = {a.name for a in model.artifacts}
        unknown = wanted - names
        if unknown:
            raise NotFoundError(f"unknown artifact name(s): {', '.join(sorted(unknown))}")
    for i in range(model.arity):
        for j in range(model.arity):
            if i == j:
                continue
            if query.pair is not None:
                if {model.artifacts[i].name, model.artifacts[j].name} != set(query.pair):
                    continue
            pairs.append((i, j))
    for i, j in pairs:
        ei, ej = elements[i], elements[j]
        if "state" in query.kinds:
            for s_i in ei.states:
                for s_j in ej.states:
                    yield StateKey(i, j, s_i, s_j)
        if "transition" in query.kinds:
            conditions = [
                t for t in ei.transitions
                if query.include_boundary or not _has_marker(*t)
            ]
            while_states: list[Slot] = list(ej.states)
            if query.include_boundary:
                while_states += [Marker.NOT_STARTED, Marker.FINISHED]
            consequences: list[tuple[Slot, Slot]] = [(s, s) for s in while_states]
            consequences += [
                t for t in ej.transitions
                if query.include_boundary or not _has_marker(*t)
            ]
            for from_i, to_i in conditions:
                for from_j, to_j in consequences:
                    yield TransitionKey(i, j, from_i, to_i, from_j, to_j)
        if "forward" in query.kinds:
            moves = [
                t for t in ej.transitions
                if query.include_boundary or not _has_marker(*t)
            ]
            for s_i in ei.states:
                for from_j, to_j in moves:
                    yield ForwardKey(i, j, s_i, from_j, to_j)


def build_record(
    key: InteractionKey, engine: InteractionEngine
) -> InteractionRecord:
    """Estimate, score and explain one interaction key."""
    estimates = engine.estimate(key)
    baseline = (
        engine.forward_baseline(key) if isinstance(key, ForwardKey) else None
    )
    return InteractionRecord(
        key=key,
        estimates=estimates,
        measures=compute_measures(estimates),
        interpretation=interpret(key, estimates.conf, baseline),
        baseline=baseline,
    )


def enumerate_interactions(
    log: EventLog,
    model: CsmModel,
    query: Query | None = None,
    engine: InteractionEngine | None = None,
) -> list[InteractionRecord]:
    """All admissible interactions, filtered, ranked and capped."""
    query = query or Query()
    engine = engine or InteractionEngine(log)
    elements = _elements(model)
    records = []
    for key in _candidate_keys(model, elements, query):
        try:
            record = build_record(key, engine)
        except EmptyLogError:
            continue  # no probability space for this kind on this log
        if record.estimates.conf is None and not query.include_undefined:
            continue
        passed = True
        for measure, floor in query.min_values.items():
            value = record.measures.value(measure)
            if value is None or value < floor:
                passed = False
                break
        if passed:
            records.append(record)
    records.sort(key=lambda r: _tiebreak(r, model))
    records.sort(
        key=lambda r: sort_rank(r.measures.value(query.sort_by)),
        reverse=query.descending,
    )
    return records[: query.limit]


# -- highlighting -----------------------------------------------------


@dataclass(frozen=True)
class HighlightElement:
    """One element of another artifact, tinted by rule confidence."""

    artifact: str
    state: str | None  # set for state elements
    from_state: str | None  # set with to_state for transition elements
    to_state: str | None
    via: str  # interaction kind that produced the confidence
    confidence: float

    def to_dict(self) -> dict:
        if self.state is not None:
            element: dict = {"artifact": self.artifact, "state": self.state}
        else:
            element = {
                "artifact": self.artifact,
                "from": self.from_state,
                "to": self.to_state,
            }
        element["via"] = self.via
        element["confidence"] = self.confidence
        return element


@dataclass(frozen=True)
class HighlightSet:
    """Everything related to one anchor element, with confidences in (0,1]."""

    anchor: dict
    related: tuple[HighlightElement, ...]

    def to_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "related": [e.to_dict() for e in self.related],
        }


def highlight(
    log: EventLog,
    model: CsmModel,
    artifact: str,
    state: str | None = None,
    transition: tuple[str, str] | None = None,
    engine: InteractionEngine | None = None,
) -> HighlightSet:
    """Related elements of the other artifacts for one anchor element.

    Exactly the elements whose joint probability with the anchor is
    positive are returned; the confidence is the strength of the rule
    anchored at the given element.
    """
    if (state is None) == (transition is None):
        raise QueryError("pass exactly one of state= or transition=")
    engine = engine or InteractionEngine(log)
    elements = _elements(model)
    try:
        art = model.artifact_named(artifact)
    except KeyError:
        raise NotFoundError(f"unknown artifact {artifact!r}") from None
    i = art.index
    if state is not None:
        if state not in elements[i].states:
            raise NotFoundError(f"artifact {artifact!r} has no state {state!r}")
        anchor: dict = {"artifact": artifact, "state": state}
    else:
        if tuple(transition) not in elements[i].transitions:
            raise NotFoundError(
                f"artifact {artifact!r} has no transition "
                f"{transition[0]!r} -> {transition[1]!r}"
            )
        anchor = {"artifact": artifact, "from": transition[0], "to": transition[1]}

    related: list[HighlightElement] = []
    for j in range(model.arity):
        if j == i:
            continue
        name_j = model.artifacts[j].name
        ej = elements[j]
        regular_moves = [t for t in ej.transitions if not _has_marker(*t)]
        if state is not None:
            for s_j in ej.states:
                est = engine.estimate(StateKey(i, j, state, s_j))
                if est.p_xy > 0:
                    related.append(
                        HighlightElement(
                            name_j, s_j, None, None, "state", float(est.conf)
                        )
                    )
            for from_j, to_j in regular_moves:
                est = engine.estimate(ForwardKey(i, j, state, from_j, to_j))
                if est.p_xy > 0:
                    related.append(
                        HighlightElement(
                            name_j, None, from_j, to_j, "forward", float(est.conf)
                        )
                    )
        else:
            from_i, to_i = transition
            for s_j in ej.states:
                est = engine.estimate(TransitionKey(i, j, from_i, to_i, s_j, s_j))
                if est.p_xy > 0:
                    related.append(
                        HighlightElement(
                            name_j, s_j, None, None, "transition", float(est.conf)
                        )
                    )
            for from_j, to_j in regular_moves:
                est = engine.estimate(
                    TransitionKey(i, j, from_i, to_i, from_j, to_j)
                )
                if est.p_xy > 0:
                    related.append(
                        HighlightElement(
                            name_j, None, from_j, to_j, "transition", float(est.conf)
                        )
                    )
    return HighlightSet(anchor, tuple(related))


# -- JSON export / import ---------------------------------------------


def _state_ids(model: CsmModel) -> dict[CompositeState, str]:
    ids = {model.initial: "init", model.final: "final"}
    for n, state in enumerate(model.sorted_states()):
        ids[state] = f"s{n}"
    return ids


def _slot_json(slot: Slot) -> str | None:
    return None if isinstance(slot, Marker) else slot


def export_model(model: CsmModel, annotation: Annotation) -> dict:
    """The canonical JSON document for a model plus its log statistics."""
    ids = _state_ids(model)
    states = [
        {"id": ids[s], "slots": [_slot_json(x) for x in s.slots], "kind": s.kind}
        for s in [model.initial, *model.sorted_states(), model.final]
    ]
    transitions = [
        {"from": ids[src], "to": ids[dst],
         "freq": annotation.transition_freq.get((src, dst), 0)}
        for src, dst in model.sorted_transitions()
    ]
    sojourn = {
        ids[s]: {
            "total_ms": annotation.sojourn_total.get(s, 0),
            "avg_per_trace_ms": annotation.sojourn_avg_visiting.get(s, 0.0),
            "avg_over_all_traces_ms": annotation.sojourn_avg_all.get(s, 0.0),
        }
        for s in model.sorted_states()
    }
    return {
        "artifacts": [
            {"name": a.name, "states": list(a.states)} for a in model.artifacts
        ],
        "states": states,
        "transitions": transitions,
        "sojourn": sojourn,
        "meta": {
            "avg_per_trace_ms": "sojourn total over traces visiting the state",
            "avg_over_all_traces_ms": "sojourn total over all traces",
        },
    }


def import_model(doc: dict) -> tuple[CsmModel, Annotation]:
    """Rebuild a model and annotation from an exported document."""
    from .model import ArtifactDecl, final_state, initial_state

    artifacts = tuple(
        ArtifactDecl(i, a["name"], tuple(a["states"]))
        for i, a in enumerate(doc["artifacts"])
    )
    arity = len(artifacts)
    states_by_id: dict[str, CompositeState] = {}
    for entry in doc["states"]:
        if entry["kind"] == "initial":
            state = initial_state(arity)
        elif entry["kind"] == "final":
            state = final_state(arity)
        else:
            state = CompositeState(
                tuple(
                    Marker.NOT_STARTED if s is None else s for s in entry["slots"]
                )
            )
        states_by_id[entry["id"]] = state
    regular = frozenset(s for s in states_by_id.values() if s.is_regular)
    transitions = frozenset(
        (states_by_id[t["from"]], states_by_id[t["to"]]) for t in doc["transitions"]
    )
    model = CsmModel(
        artifacts=artifacts,
        states=regular,
        transitions=transitions,
        initial=initial_state(arity),
        final=final_state(arity),
    )
    freq = {
        (states_by_id[t["from"]], states_by_id[t["to"]]): t["freq"]
        for t in doc["transitions"]
    }
    totals = {}
    avg_visiting = {}
    avg_all = {}
    for sid, entry in doc["sojourn"].items():
        state = states_by_id[sid]
        totals[state] = entry["total_ms"]
        avg_visiting[state] = entry["avg_per_trace_ms"]
        avg_all[state] = entry["avg_over_all_traces_ms"]
    return model, Annotation(totals, avg_visiting, avg_all, freq)


def _endpoint_json(key: InteractionKey, model: CsmModel) -> tuple[dict, dict]:
    name_i = model.artifacts[key.i].name
    name_j = model.artifacts[key.j].name
    if isinstance(key, StateKey):
        return (
            {"artifact": name_i, "state": key.state_i},
            {"artifact": name_j, "state": key.state_j},
        )
    if isinstance(key, TransitionKey):
        condition = {
            "artifact": name_i,
            "from": _slot_json(key.from_i),
            "to": _slot_json(key.to_i),
        }
        if key.state_consequence:
            return condition, {"artifact": name_j, "state": _slot_json(key.from_j)}
        return condition, {
            "artifact": name_j,
            "from": _slot_json(key.from_j),
            "to": _slot_json(key.to_j),
        }
    condition = {
        "artifact": name_i,
        "state": key.state_i,
        "and_artifact": name_j,
        "and_state": _slot_json(key.from_j),
    }
    return condition, {
        "artifact": name_j,
        "from": _slot_json(key.from_j),
        "to": _slot_json(key.to_j),
    }


def export_interactions(
    records: Sequence[InteractionRecord], model: CsmModel
) -> dict:
    """JSON document for a ranked record list.

    Finite measure values are numbers, +infinity is the string "inf" and
    undefined is null.
    """
    out = []
    for record in records:
        condition, consequence = _endpoint_json(record.key, model)
        entry = {
            "kind": record.key.kind,
            "condition": condition,
            "consequence": consequence,
            "estimates": {
                "p_x": float(record.estimates.p_x),
                "p_y": float(record.estimates.p_y),
                "p_xy": float(record.estimates.p_xy),
            },
            "measures": {
                m: encode_value(record.measures.value(m)) for m in MEASURES
            },
            "interpretation": record.interpretation,
        }
        if record.key.kind == "forward":
            entry["baseline"] = (
                None if record.baseline is None else float(record.baseline)
            )
        out.append(entry)
    return {"records": out}
