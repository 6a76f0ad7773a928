// Payload shapes of the session API. The workbench never computes physics:
// every number it shows comes out of one of these.

export interface EdgeView {
  modes: string[];
  weight: number;
}

export interface DecorationView {
  monomial: Record<string, number>;
  coeff: number;
}

export interface MeasurementView {
  mode: string;
  basis: "q" | "p";
  outcome: number;
}

export interface Decomposition {
  modes: string[];
  edges: EdgeView[];
  decorations: DecorationView[];
  constant: number;
  order: number;
  is_standard: boolean;
  terminal: boolean;
  measurements: MeasurementView[];
  history_length: number;
  hash: string;
}

export interface OpJson {
  op: string;
  mode?: string;
  modes?: string[];
  param: number;
}

export interface ApiError {
  error: string;
  message: string;
}

export interface VerifyResult {
  rule: string;
  params: string;
  squeezing: number;
  cutoff: number;
  fidelity: number;
  budget: number;
  predicted_fidelity: number | null;
  leakage: number;
  pass: boolean;
}

export interface CircuitJson {
  version: number;
  modes: string[];
  initial_phase: { terms: { monomial: Record<string, number>; coeff: number }[]; constant: number };
  ops: OpJson[];
  metadata: Record<string, unknown>;
}

export function describeOp(op: OpJson): string {
  const target = op.modes ? op.modes.join(",") : op.mode;
  return `${op.op}(${target},${op.param})`;
}
