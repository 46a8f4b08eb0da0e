/** Thin fetch wrappers around the JSON API; the client never recomputes
 * anything the server already answered. */

import type { HighlightDoc, InteractionsDoc, ModelDoc } from "./types";
import { MEASURES, type Anchor, type InteractionQuery } from "./viewstate";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

/** Discards responses that were overtaken by a newer request. */
export class LatestGate {
  private seq = 0;

  next(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}

async function getJson<T>(url: string): Promise<T> {
  let res: Response;
  try {
    res = await fetch(url);
  } catch (err) {
    throw new ApiError(0, `cannot reach ${url}: ${String(err)}`);
  }
  let body: unknown = null;
  try {
    body = await res.json();
  } catch {
    // non-JSON body; the status check below reports the failure
  }
  if (!res.ok) {
    const detail =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : res.statusText;
    throw new ApiError(res.status, detail);
  }
  return body as T;
}

export function interactionParams(query: InteractionQuery): URLSearchParams {
  const p = new URLSearchParams();
  p.set("kind", query.kinds.join(","));
  p.set("sort", query.sortBy);
  p.set("desc", String(query.descending));
  p.set("limit", String(query.limit));
  for (const m of MEASURES) {
    const floor = query.minValues[m];
    if (floor !== undefined) p.set(`min_${m}`, String(floor));
  }
  if (query.pair) p.set("pair", query.pair.join(","));
  if (query.includeBoundary) p.set("include_boundary", "true");
  if (query.includeUndefined) p.set("include_undefined", "true");
  return p;
}

export function interactionsUrl(query: InteractionQuery): string {
  return `/api/interactions?${interactionParams(query).toString()}`;
}

export function projectionUrl(artifacts: string[]): string {
  const p = new URLSearchParams();
  p.set("artifacts", artifacts.join(","));
  return `/api/model/projection?${p.toString()}`;
}

export function highlightUrl(anchor: Anchor): string {
  const p = new URLSearchParams();
  p.set("artifact", anchor.artifact);
  if (anchor.state !== undefined) {
    p.set("state", anchor.state);
  } else {
    p.set("from", anchor.from ?? "");
    p.set("to", anchor.to ?? "");
  }
  return `/api/highlight?${p.toString()}`;
}

export const api = {
  model: (): Promise<ModelDoc> => getJson("/api/model"),
  projection: (artifacts: string[]): Promise<ModelDoc> =>
    getJson(projectionUrl(artifacts)),
  interactions: (query: InteractionQuery): Promise<InteractionsDoc> =>
    getJson(interactionsUrl(query)),
  highlight: (anchor: Anchor): Promise<HighlightDoc> =>
    getJson(highlightUrl(anchor)),
};
