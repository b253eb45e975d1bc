import type { CreateSessionRequest, SwitchConfig } from "./types.js";

// The three angiogenic-switch presets exposed as buttons next to the sliders.
export const SWITCH_PRESETS: Record<"ASW1" | "ASW2" | "ASW3", SwitchConfig> = {
  ASW1: { angioprevention: 0.4, angiogenesis: 0.6, quiescent: 0.2 },
  ASW2: { angioprevention: 0.6, angiogenesis: 0.4, quiescent: 0.2 },
  ASW3: { angioprevention: 0.4, angiogenesis: 0.6, quiescent: 0.8 },
};

// Patient-1-scale defaults for the setup form: 200 stem cells, expected seed
// degree ~4, 50 cancer stem cells driving the redirection probability.
export function defaultCreateRequest(): CreateSessionRequest {
  return {
    n: 200,
    p_edge: 0.02,
    driver: { u: 1e-6, d: 100, k: 3, N: 50 },
    switch: { ...SWITCH_PRESETS.ASW1 },
    seed: 0,
  };
}
