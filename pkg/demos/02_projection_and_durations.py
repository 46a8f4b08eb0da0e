"""Project the composite view down to single artifacts.

Projection keeps a subset of artifact slots, merges states that became
equal, and removes stutter steps from traces (keeping the earliest entry
of each run).  Time is preserved: a projected trace spans exactly as long
as the original.
"""

import tempfile
from pathlib import Path

from csmx import ingest_csv, project_log
from csmx.demo import SINGLE_CASE_CSV
from csmx.stats import durations

DAY = 86_400_000

workdir = Path(tempfile.mkdtemp(prefix="csmx_demo_"))
csv_path = workdir / "single_case.csv"
csv_path.write_text(SINGLE_CASE_CSV)

log = ingest_csv(csv_path)
(seq,) = log.sequences

def show(tag, s):
    steps = " -> ".join(repr(e.state) for e in s.entries)
    days = [d // DAY for d in durations(s)]
    print(f"{tag}:\n  {steps}\n  entry durations (days): {days}\n")

show("composite", seq)
for index, artifact in enumerate(log.artifacts):
    projected = project_log(log, (index,))
    show(f"projected on {artifact.name}", projected.sequences[0])

print("spans match:",
      all(project_log(log, (i,)).sequences[0].span == seq.span
          for i in range(log.arity)))
