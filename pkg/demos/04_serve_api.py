"""Run the HTTP API over the bundled fixture and query it.

The same service backs the command line (csmx serve) and the web UI.
All endpoints are read-only GETs returning deterministic JSON.
"""

import json
import urllib.request

from csmx.demo import healthcare_log
from csmx.server import ExplorerService, run_in_thread

server, port = run_in_thread(ExplorerService(healthcare_log()))
base = f"http://127.0.0.1:{port}"
print(f"serving on {base}\n")

def get(path):
    with urllib.request.urlopen(base + path) as resp:
        return json.load(resp)

print("health:", get("/api/health"))

model = get("/api/model")
print(f"model: {len(model['states'])} states "
      f"({len(model['transitions'])} transitions)")

lab = get("/api/model/projection?artifacts=lab")
print("lab-only states:",
      [s["slots"][0] for s in lab["states"] if s["kind"] == "regular"])

ranked = get("/api/interactions?kind=transition&sort=confidence&limit=3")
print("\ntop transition co-occurrences by confidence:")
for record in ranked["records"]:
    print(" ", record["interpretation"])

highlight = get("/api/highlight?artifact=lab&from=C&to=D")
print("\nwhat accompanies the lab moving C -> D:")
for el in highlight["related"]:
    print(" ", el)

server.shutdown()
