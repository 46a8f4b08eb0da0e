"""Ingest a multi-artifact event log and discover its composite model.

The bundled fixture tracks two artifacts per hospital case: the patient's
location (W, X, Y, Z) and the state of their lab workup (A through E).
Each row of the CSV is one artifact changing state; rows of a case that
share a timestamp form a single composite state change.
"""

import tempfile
from pathlib import Path

from csmx import discover_model, ingest_csv
from csmx.cli import format_duration
from csmx.demo import write_healthcare_csv
from csmx.stats import annotate, total_time

workdir = Path(tempfile.mkdtemp(prefix="csmx_demo_"))
csv_path = workdir / "healthcare.csv"
write_healthcare_csv(csv_path)
print(f"wrote {csv_path}")

log = ingest_csv(csv_path)
print(f"{log.total_traces} traces over artifacts "
      f"{[a.name for a in log.artifacts]}")
print(f"{len(log.sequences)} distinct trace shapes after merging")

model = discover_model(log)
print(f"model: {len(model.states)} states, {len(model.transitions)} transitions")

annotation = annotate(model, log)
print(f"total observed time: {format_duration(total_time(log))}")
print("\nbusiest states by total sojourn time:")
top = sorted(annotation.sojourn_total.items(), key=lambda kv: -kv[1])[:5]
for state, ms in top:
    print(f"  {state!r}: {format_duration(ms)}")
