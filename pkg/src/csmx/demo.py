"""A synthetic healthcare process used by the demos and the test suite.

Two artifacts evolve side by side: the patient (W registered, X diagnosed,
Y in treatment, Z healthy) and the lab workflow (A test planned, B sample
taken, C waiting on result, D result ready, E new test needed).

``single_case_csv`` is one fully worked case: thirteen rows that fold into
a 12-entry sequence whose per-entry durations are 0,4,2,4,1,2,4,3,3,2,1,0
days.  The trailing row re-asserts the patient state one day after the
last change; it only marks the end of observation.

``healthcare_log`` is a 105-case log built from eight deterministic route
templates.  The route multiplicities were solved so that the composite
model has exactly 13 regular states and the artifact-pair transition
frequencies land on round numbers, e.g. the lab's C -> D move happens 190
times: 100 while the patient stays W, 70 while the patient stays Y and 20
together with the patient's Y -> Z move.  Every entry lasts one day.
"""

from __future__ import annotations

from pathlib import Path

from .ingest import EventLog, ExecutionSequence, StateEntry, _merge
from .model import ArtifactDecl, CompositeState, CsmModel, final_state, initial_state

DAY_MS = 86_400_000

SINGLE_CASE_CSV = """\
case_id,artifact,state,timestamp
p0042,patient,W,2017-01-01T00:00:00Z
p0042,lab,A,2017-01-01T00:00:00Z
p0042,lab,B,2017-01-05T00:00:00Z
p0042,lab,C,2017-01-07T00:00:00Z
p0042,lab,D,2017-01-11T00:00:00Z
p0042,patient,X,2017-01-12T00:00:00Z
p0042,patient,Y,2017-01-14T00:00:00Z
p0042,lab,E,2017-01-18T00:00:00Z
p0042,lab,B,2017-01-21T00:00:00Z
p0042,lab,C,2017-01-24T00:00:00Z
p0042,patient,Z,2017-01-26T00:00:00Z
p0042,lab,D,2017-01-26T00:00:00Z
p0042,patient,Z,2017-01-27T00:00:00Z
"""


def write_single_case_csv(path: str | Path) -> None:
    Path(path).write_text(SINGLE_CASE_CSV, encoding="utf-8")


ARTIFACTS = (
    ArtifactDecl(0, "patient", ("W", "X", "Y", "Z")),
    ArtifactDecl(1, "lab", ("A", "B", "C", "D", "E")),
)

# (multiplicity, composite states visited); one day per entry
ROUTES: tuple[tuple[int, tuple[tuple[str, str], ...]], ...] = (
    (10, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "D"), ("X", "D"),
          ("Y", "D"), ("Z", "D"))),
    (50, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "D"), ("X", "D"),
          ("Y", "D"), ("Y", "E"), ("Y", "B"), ("Y", "C"), ("Y", "D"),
          ("Z", "D"))),
    (15, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "D"), ("X", "D"),
          ("Y", "D"), ("Y", "E"), ("Y", "B"), ("Y", "C"), ("Z", "D"))),
    (10, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "D"), ("X", "D"),
          ("Y", "D"), ("Y", "E"), ("Y", "B"), ("Y", "C"), ("Y", "E"),
          ("Y", "B"), ("Y", "C"), ("Y", "D"), ("Z", "D"))),
    (5, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "E"), ("W", "B"),
         ("W", "C"), ("W", "D"), ("X", "D"), ("Y", "D"), ("Z", "D"))),
    (5, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "E"), ("Y", "E"),
         ("Y", "B"), ("Y", "C"), ("Y", "D"), ("Z", "D"))),
    (5, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "D"), ("X", "D"),
         ("X", "E"), ("X", "B"), ("Y", "B"), ("Y", "C"), ("Y", "D"),
         ("Z", "D"))),
    (5, (("W", "A"), ("W", "B"), ("W", "C"), ("W", "D"), ("X", "D"),
         ("X", "E"), ("X", "B"), ("Y", "B"), ("Y", "C"), ("Z", "D"))),
)

_BASE_MS = 1_483_228_800_000  # 2017-01-01T00:00:00Z


def healthcare_log() -> EventLog:
    """The 105-case demo log; every composite state entry lasts one day."""
    sequences = []
    for multiplicity, route in ROUTES:
        entries = [StateEntry(initial_state(2), _BASE_MS)]
        for day, slots in enumerate(route):
            entries.append(StateEntry(CompositeState(slots), _BASE_MS + day * DAY_MS))
        entries.append(StateEntry(final_state(2), _BASE_MS + len(route) * DAY_MS))
        sequences.append(ExecutionSequence(tuple(entries), multiplicity))
    return EventLog(ARTIFACTS, _merge(sequences))


def healthcare_model() -> CsmModel:
    from .ingest import discover_model

    return discover_model(healthcare_log())


def write_healthcare_csv(path: str | Path) -> None:
    """The demo log as a direct-form CSV (multiplicities become cases)."""
    from .ingest import write_csv

    write_csv(healthcare_log(), path)
