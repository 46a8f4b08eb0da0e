/** Text for values received from the API, rendered without rounding or
 * rescaling so every displayed number equals the value the server sent. */

import type { EndpointDoc, MeasureValue } from "./types";

export function measureText(value: MeasureValue): string {
  if (value === null) return "n/a";
  if (value === "inf") return "inf";
  return String(value);
}

function slotLabel(slot: string | null | undefined, position: "from" | "to"): string {
  if (slot === null || slot === undefined) {
    return position === "from" ? "(not started)" : "(finished)";
  }
  return slot;
}

export function endpointText(ep: EndpointDoc): string {
  if (ep.and_artifact !== undefined) {
    return `${ep.artifact}::${ep.state} & ${ep.and_artifact}::${slotLabel(ep.and_state, "from")}`;
  }
  if (ep.from !== undefined || ep.to !== undefined) {
    return `${ep.artifact}::${slotLabel(ep.from, "from")}->${slotLabel(ep.to, "to")}`;
  }
  return `${ep.artifact}::${slotLabel(ep.state, "from")}`;
}
