// Workbench session state: the single mutable object behind the UI.
//
// Invariants: the rendered view always reflects the latest decomposition the
// server returned; at most one mutating request is in flight (callers await
// each action); a failed op leaves the view untouched and surfaces the
// engine's error code verbatim.

import { ApiClient, ApiFailure } from "./api.js";
import { Decomposition, describeOp, OpJson, VerifyResult } from "./types.js";

export interface HistoryItem {
  label: string;
  hash: string;
}

export interface StagedRecipe {
  name: string;
  ops: OpJson[];
  next: number;
}

export class WorkbenchSession {
  id = "";
  view: Decomposition | null = null;
  history: HistoryItem[] = [];
  staged: StagedRecipe | null = null;
  lastError: string | null = null;
  lastVerify: VerifyResult | null = null;
  private busy = false;

  constructor(private readonly api: ApiClient) {}

  private async exclusive<T>(action: () => Promise<T>): Promise<T> {
    if (this.busy) throw new Error("a request is already in flight");
    this.busy = true;
    try {
      return await action();
    } finally {
      this.busy = false;
    }
  }

  async start(modes: string[]): Promise<void> {
    await this.exclusive(async () => {
      const created = await this.api.createSession(modes);
      this.id = created.id;
      this.view = created.state;
      this.history = [];
      this.staged = null;
      this.lastError = null;
      this.lastVerify = null;
    });
  }

  /** Apply one op; on a precondition failure the view stays put and the
   * engine's error code is kept for display. Returns true on success. */
  async applyOp(op: OpJson): Promise<boolean> {
    return this.exclusive(async () => {
      try {
        const next = await this.api.applyOp(this.id, op);
        this.view = next;
        this.history.push({ label: describeOp(op), hash: next.hash });
        this.lastError = null;
        return true;
      } catch (err) {
        if (err instanceof ApiFailure) {
          this.lastError = `${err.code}: ${err.message}`;
          return false;
        }
        throw err;
      }
    });
  }

  async undo(): Promise<boolean> {
    return this.exclusive(async () => {
      try {
        const next = await this.api.undo(this.id);
        this.view = next;
        this.history.pop();
        this.lastError = null;
        return true;
      } catch (err) {
        if (err instanceof ApiFailure) {
          this.lastError = `${err.code}: ${err.message}`;
          return false;
        }
        throw err;
      }
    });
  }

  async verify(r: number, cutoff: number): Promise<VerifyResult | null> {
    return this.exclusive(async () => {
      try {
        this.lastVerify = await this.api.verify(this.id, r, cutoff);
        this.lastError = null;
        return this.lastVerify;
      } catch (err) {
        if (err instanceof ApiFailure) {
          this.lastError = `${err.code}: ${err.message}`;
          return null;
        }
        throw err;
      }
    });
  }

  /** Stage a recipe after checking its input shape against the current view;
   * a mismatch is surfaced before anything is sent to the server. */
  stageRecipe(name: string, ops: OpJson[], requiredEdges: string[][]): boolean {
    const problem = checkShape(this.view, requiredEdges);
    if (problem) {
      this.lastError = `ShapeMismatch: ${problem}`;
      return false;
    }
    this.staged = { name, ops, next: 0 };
    this.lastError = null;
    return true;
  }

  /** Apply the next staged op; returns false when the recipe is exhausted. */
  async stepStaged(): Promise<boolean> {
    if (!this.staged || this.staged.next >= this.staged.ops.length) return false;
    const op = this.staged.ops[this.staged.next];
    const ok = await this.applyOp(op);
    if (ok) this.staged.next += 1;
    return ok;
  }

  exportState(): Promise<string> {
    return this.api.exportText(this.id, "state");
  }
}

export function checkShape(view: Decomposition | null, requiredEdges: string[][]): string | null {
  if (!view) return "no session";
  for (const required of requiredEdges) {
    const want = [...required].sort().join(",");
    const found = view.edges.some((e) => [...e.modes].sort().join(",") === want);
    if (!found) return `missing edge {${want}}`;
  }
  return null;
}

// The worked protocols from the op palette: a Toffoli-equivalent fan-out on
// one target, its two-target extension with the pairwise cleanup, and the
// order-raising shear. Targets refer to the default register A,B,C,D(,E).
export const RECIPES: { name: string; modes: string[]; prep: OpJson[]; ops: OpJson[]; requires: string[][] }[] = [
  {
    name: "toffoli-equivalent",
    modes: ["A", "B", "C", "D"],
    prep: [
      { op: "CZ", modes: ["A", "B", "C"], param: 1 },
      { op: "CZ", modes: ["A", "D"], param: 2 },
    ],
    ops: [
      { op: "Dp", mode: "A", param: 1 },
      { op: "CZ", modes: ["A", "D"], param: -2 },
      { op: "Dp", mode: "A", param: -1 },
      { op: "Dq", mode: "D", param: -4 },
    ],
    requires: [["A", "B", "C"], ["A", "D"]],
  },
  {
    name: "fan-out-two-targets",
    modes: ["A", "B", "C", "D", "E"],
    prep: [
      { op: "CZ", modes: ["A", "B", "C"], param: 1 },
      { op: "CZ", modes: ["A", "D"], param: 1 },
      { op: "CZ", modes: ["A", "E"], param: 1 },
    ],
    ops: [
      { op: "Dp", mode: "A", param: 1 },
      { op: "CZ", modes: ["A", "D"], param: -1 },
      { op: "CZ", modes: ["A", "E"], param: -1 },
      { op: "Dp", mode: "A", param: -1 },
      { op: "Dq", mode: "D", param: -1 },
      { op: "Dq", mode: "E", param: -1 },
      { op: "CZ", modes: ["D", "E"], param: -1 },
    ],
    requires: [["A", "B", "C"], ["A", "D"], ["A", "E"]],
  },
  {
    name: "order-raise",
    modes: ["A", "B", "C", "D", "E"],
    prep: [
      { op: "CZ", modes: ["A", "B", "C"], param: 1 },
      { op: "CZ", modes: ["A", "D", "E"], param: 1 },
    ],
    ops: [{ op: "Dp", mode: "A", param: 1 }],
    requires: [["A", "B", "C"], ["A", "D", "E"]],
  },
];
