import type { CreateSessionRequest, SwitchConfig } from "./types.js";

// Client-side mirror of the server's request validation so the form can flag
// bad input before a round trip. The server remains authoritative.

export interface FieldError {
  field: string;
  message: string;
}

function unit(value: number, field: string, errors: FieldError[]): void {
  if (!Number.isFinite(value) || value < 0 || value > 1) {
    errors.push({ field, message: "must be a number in [0, 1]" });
  }
}

export function validateSwitch(sw: SwitchConfig, prefix = "switch"): FieldError[] {
  const errors: FieldError[] = [];
  unit(sw.angioprevention, `${prefix}.angioprevention`, errors);
  unit(sw.angiogenesis, `${prefix}.angiogenesis`, errors);
  unit(sw.quiescent, `${prefix}.quiescent`, errors);
  return errors;
}

export function validateCreateRequest(req: CreateSessionRequest): FieldError[] {
  const errors: FieldError[] = [];
  if (!Number.isInteger(req.n) || req.n < 1) {
    errors.push({ field: "n", message: "must be an integer >= 1" });
  }
  unit(req.p_edge, "p_edge", errors);
  unit(req.driver.u, "driver.u", errors);
  if (!Number.isInteger(req.driver.d) || req.driver.d < 0) {
    errors.push({ field: "driver.d", message: "must be an integer >= 0" });
  }
  if (!Number.isInteger(req.driver.k) || req.driver.k < 1) {
    errors.push({ field: "driver.k", message: "must be an integer >= 1" });
  }
  if (!Number.isInteger(req.driver.N) || req.driver.N < 1) {
    errors.push({ field: "driver.N", message: "must be an integer >= 1" });
  }
  errors.push(...validateSwitch(req.switch));
  if (!Number.isInteger(req.seed)) {
    errors.push({ field: "seed", message: "must be an integer" });
  }
  return errors;
}
