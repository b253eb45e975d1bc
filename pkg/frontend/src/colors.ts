import type { CellStateName } from "./types.js";

// Legend: normal = green, dead = grey, inflamed = red; the remaining states
// get distinct documented colors.
export const STATE_COLORS: Record<CellStateName, string> = {
  normal: "#2e8b57",
  dead: "#888888",
  inflamed: "#d62728",
  proliferative: "#ff9f1c",
  quiescent: "#1f77b4",
  metastatic: "#9467bd",
};

export function colorForState(state: CellStateName): string {
  return STATE_COLORS[state] ?? "#000000";
}
