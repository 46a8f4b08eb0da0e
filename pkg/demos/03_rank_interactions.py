"""Score and rank how strongly the two artifacts influence each other.

Three kinds of interaction are quantified:

* state co-occurrence: share of time one state spends with another
* transition co-occurrence: how often a move coincides with the partner
  being in (or moving between) given states
* forward-looking: where the partner goes next from a joint situation

Every interaction gets exact probability estimates and seven association
measures; each comes with a plain-English interpretation.
"""

from csmx import (
    InteractionEngine,
    Query,
    StateKey,
    discover_model,
    enumerate_interactions,
)
from csmx.demo import healthcare_log
from csmx.explorer import condition_text, consequence_text

log = healthcare_log()
model = discover_model(log)
engine = InteractionEngine(log)

conf = engine.state_strength(StateKey(1, 0, "C", "W"))
print(f"while the lab workup sits in C, the patient is in W "
      f"{float(conf):.1%} of that time ({conf})\n")

for sort_by in ("lift", "confidence"):
    print(f"top 5 by {sort_by}:")
    records = enumerate_interactions(
        log, model, Query(sort_by=sort_by, limit=5), engine
    )
    for r in records:
        value = r.measures.value(sort_by)
        print(f"  {condition_text(r.key, model):24} => "
              f"{consequence_text(r.key, model):18} {value:8.3f}")
        print(f"    {r.interpretation}")
    print()
