/** Confidence tint: one hue per interaction kind, lightness falling
 * linearly from light at confidence 0 to saturated at confidence 1.
 * Undefined confidence stays uncolored. */

import type { InteractionKind } from "./types";

const KIND_HUE: Record<InteractionKind, number> = {
  state: 210,
  transition: 150,
  forward: 30,
};

const SATURATION = 85;
const LIGHT_END = 90;
const DARK_END = 35;

export function tint(
  confidence: number | null | undefined,
  kind: InteractionKind = "state",
): string | null {
  if (confidence === null || confidence === undefined) return null;
  const c = Math.min(1, Math.max(0, confidence));
  const lightness = LIGHT_END - (LIGHT_END - DARK_END) * c;
  return `hsl(${KIND_HUE[kind]}, ${SATURATION}%, ${Number(lightness.toFixed(2))}%)`;
}

/** Lightness component of a tint() color; lower means darker. */
export function lightnessOf(color: string): number {
  const match = /hsl\(\d+, \d+%, ([\d.]+)%\)/.exec(color);
  if (!match) throw new Error(`not a tint color: ${color}`);
  return Number(match[1]);
}

/** Swatch colors for the legend, at a fixed mid confidence. */
export function legendColor(kind: InteractionKind): string {
  return tint(0.6, kind) as string;
}
