/** Shapes of the JSON documents the API serves. */

export interface ArtifactDoc {
  name: string;
  states: string[];
}

export type StateKind = "initial" | "regular" | "final";

export interface StateDoc {
  id: string;
  /** One entry per artifact; null is a not-yet-started or finished marker. */
  slots: (string | null)[];
  kind: StateKind;
}

export interface TransitionDoc {
  from: string;
  to: string;
  freq: number;
}

export interface SojournDoc {
  total_ms: number;
  avg_per_trace_ms: number;
  avg_over_all_traces_ms: number;
}

export interface ModelDoc {
  artifacts: ArtifactDoc[];
  states: StateDoc[];
  transitions: TransitionDoc[];
  sojourn: Record<string, SojournDoc>;
  meta: Record<string, string>;
}

/** Finite values are numbers, +infinity is "inf", undefined is null. */
export type MeasureValue = number | "inf" | null;

export interface EndpointDoc {
  artifact: string;
  state?: string | null;
  from?: string | null;
  to?: string | null;
  and_artifact?: string;
  and_state?: string | null;
}

export interface EstimatesDoc {
  p_x: number;
  p_y: number;
  p_xy: number;
}

export type InteractionKind = "state" | "transition" | "forward";

export interface InteractionRecordDoc {
  kind: InteractionKind;
  condition: EndpointDoc;
  consequence: EndpointDoc;
  estimates: EstimatesDoc;
  measures: Record<string, MeasureValue>;
  interpretation: string;
  baseline?: number | null;
}

export interface InteractionsDoc {
  records: InteractionRecordDoc[];
}

export interface HighlightElementDoc {
  artifact: string;
  state?: string;
  from?: string;
  to?: string;
  via: InteractionKind;
  confidence: number | null;
}

export interface HighlightDoc {
  anchor: EndpointDoc;
  related: HighlightElementDoc[];
}
