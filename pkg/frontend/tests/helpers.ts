/** A fetch stub backed by captured API responses, so tests exercise the
 * app against the very documents a live server produces. */

import { vi } from "vitest";

import highlightLabC from "./fixtures/highlight_lab_C.json";
import highlightLabCD from "./fixtures/highlight_lab_C_D.json";
import interactionsAll from "./fixtures/interactions_all.json";
import modelDoc from "./fixtures/model.json";
import projectionLab from "./fixtures/projection_lab.json";
import projectionPatient from "./fixtures/projection_patient.json";

export { highlightLabC, highlightLabCD, interactionsAll, modelDoc, projectionLab, projectionPatient };

/** Return a document, a promise of one, or a ready Response-like object. */
export type Responder = (url: URL) => unknown;

export interface MockApi {
  /** Full request URLs in arrival order. */
  calls: string[];
  restore(): void;
}

function jsonResponse(doc: unknown) {
  return {
    ok: true,
    status: 200,
    statusText: "OK",
    json: async () => structuredClone(doc),
  };
}

function defaultRoute(url: URL): unknown {
  switch (url.pathname) {
    case "/api/model":
      return modelDoc;
    case "/api/model/projection": {
      const artifacts = url.searchParams.get("artifacts");
      if (artifacts === "patient") return projectionPatient;
      if (artifacts === "lab") return projectionLab;
      return { ok: false, status: 404, statusText: "Not Found", json: async () => ({ error: `unknown projection ${artifacts}` }) };
    }
    case "/api/interactions":
      return interactionsAll;
    case "/api/highlight": {
      const artifact = url.searchParams.get("artifact");
      const state = url.searchParams.get("state");
      const from = url.searchParams.get("from");
      const to = url.searchParams.get("to");
      if (artifact === "lab" && state === "C") return highlightLabC;
      if (artifact === "lab" && from === "C" && to === "D") return highlightLabCD;
      const anchor =
        state !== null ? { artifact, state } : { artifact, from, to };
      return { anchor, related: [] };
    }
    default:
      return { ok: false, status: 404, statusText: "Not Found", json: async () => ({ error: `no endpoint ${url.pathname}` }) };
  }
}

function looksLikeResponse(value: unknown): value is { json(): Promise<unknown> } {
  return (
    typeof value === "object" &&
    value !== null &&
    "json" in value &&
    typeof (value as { json: unknown }).json === "function"
  );
}

export function installMockApi(
  overrides: Record<string, Responder> = {},
): MockApi {
  const calls: string[] = [];
  const fetchMock = vi.fn(async (input: unknown) => {
    const raw = String(input);
    calls.push(raw);
    const url = new URL(raw, "http://localhost");
    const responder = overrides[url.pathname];
    const result = responder ? responder(url) : defaultRoute(url);
    const settled = await result;
    if (looksLikeResponse(settled)) return settled;
    return jsonResponse(settled);
  });
  vi.stubGlobal("fetch", fetchMock);
  return { calls, restore: () => vi.unstubAllGlobals() };
}

export function mount(): HTMLElement {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}

export function click(target: Element): void {
  target.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

export function lastCallTo(calls: string[], pathname: string): string {
  const hits = calls.filter((c) => new URL(c, "http://localhost").pathname === pathname);
  if (hits.length === 0) throw new Error(`no request hit ${pathname}`);
  return hits[hits.length - 1]!;
}
