/** The shareable state of the explorer, round-tripped through the URL.
 *
 * Query fields reuse the API parameter names so the encoded URL reads the
 * same as the request it causes.  Decoding is lenient: unknown or broken
 * parameters fall back to the defaults instead of failing the page load.
 */

export const KINDS = ["state", "transition", "forward"] as const;

export const MEASURES = [
  "confidence",
  "support",
  "lift",
  "conviction",
  "cosine",
  "jaccard",
  "phi",
] as const;

export type Measure = (typeof MEASURES)[number];

export interface InteractionQuery {
  kinds: string[];
  sortBy: Measure;
  descending: boolean;
  /** Per-measure floors; an absent entry leaves the server default. */
  minValues: Partial<Record<Measure, number>>;
  pair: [string, string] | null;
  limit: number;
  includeBoundary: boolean;
  includeUndefined: boolean;
}

export interface Anchor {
  artifact: string;
  state?: string;
  from?: string;
  to?: string;
}

export interface ViewState {
  query: InteractionQuery;
  anchor: Anchor | null;
  selectedRow: number | null;
  /** Artifact names the composite panel is projected onto; null = all. */
  projection: string[] | null;
}

export function defaultQuery(): InteractionQuery {
  return {
    kinds: [...KINDS],
    sortBy: "lift",
    descending: true,
    minValues: {},
    pair: null,
    limit: 50,
    includeBoundary: false,
    includeUndefined: false,
  };
}

export function defaultViewState(): ViewState {
  return { query: defaultQuery(), anchor: null, selectedRow: null, projection: null };
}

function encodeAnchor(anchor: Anchor): string {
  if (anchor.state !== undefined) return `${anchor.artifact}::${anchor.state}`;
  return `${anchor.artifact}::${anchor.from}->${anchor.to}`;
}

function decodeAnchor(text: string): Anchor | null {
  const sep = text.indexOf("::");
  if (sep <= 0) return null;
  const artifact = text.slice(0, sep);
  const rest = text.slice(sep + 2);
  if (!rest) return null;
  const arrow = rest.indexOf("->");
  if (arrow < 0) return { artifact, state: rest };
  const from = rest.slice(0, arrow);
  const to = rest.slice(arrow + 2);
  if (!from || !to) return null;
  return { artifact, from, to };
}

export function encodeViewState(vs: ViewState): string {
  const p = new URLSearchParams();
  p.set("kind", vs.query.kinds.join(","));
  p.set("sort", vs.query.sortBy);
  p.set("desc", String(vs.query.descending));
  p.set("limit", String(vs.query.limit));
  for (const m of MEASURES) {
    const floor = vs.query.minValues[m];
    if (floor !== undefined) p.set(`min_${m}`, String(floor));
  }
  if (vs.query.pair) p.set("pair", vs.query.pair.join(","));
  if (vs.query.includeBoundary) p.set("include_boundary", "true");
  if (vs.query.includeUndefined) p.set("include_undefined", "true");
  if (vs.projection) p.set("proj", vs.projection.join(","));
  if (vs.anchor) p.set("anchor", encodeAnchor(vs.anchor));
  if (vs.selectedRow !== null) p.set("row", String(vs.selectedRow));
  return p.toString();
}

function isMeasure(name: string): name is Measure {
  return (MEASURES as readonly string[]).includes(name);
}

export function decodeViewState(search: string): ViewState {
  const p = new URLSearchParams(search);
  const vs = defaultViewState();

  const kind = p.get("kind");
  if (kind) {
    const kinds = kind
      .split(",")
      .map((k) => k.trim())
      .filter((k) => (KINDS as readonly string[]).includes(k));
    if (kinds.length > 0) vs.query.kinds = kinds;
  }
  const sort = p.get("sort");
  if (sort && isMeasure(sort)) vs.query.sortBy = sort;
  const desc = p.get("desc");
  if (desc === "true" || desc === "false") vs.query.descending = desc === "true";
  const limit = p.get("limit");
  if (limit !== null && /^\d+$/.test(limit)) vs.query.limit = Number(limit);
  for (const m of MEASURES) {
    const raw = p.get(`min_${m}`);
    if (raw === null) continue;
    const floor = Number(raw);
    if (Number.isFinite(floor)) vs.query.minValues[m] = floor;
  }
  const pair = p.get("pair");
  if (pair) {
    const names = pair.split(",").map((n) => n.trim());
    if (names.length === 2 && names[0] && names[1] && names[0] !== names[1]) {
      vs.query.pair = [names[0], names[1]];
    }
  }
  if (p.get("include_boundary") === "true") vs.query.includeBoundary = true;
  if (p.get("include_undefined") === "true") vs.query.includeUndefined = true;

  const proj = p.get("proj");
  if (proj) {
    const names = proj.split(",").map((n) => n.trim()).filter((n) => n);
    if (names.length > 0) vs.projection = names;
  }
  const anchor = p.get("anchor");
  if (anchor) vs.anchor = decodeAnchor(anchor);
  const row = p.get("row");
  if (row !== null && /^\d+$/.test(row)) vs.selectedRow = Number(row);
  return vs;
}
