// DOM wiring for the workbench page. All state lives in WorkbenchSession;
// this file only moves values between the DOM and the session object.

import { ApiClient } from "./api.js";
import { evaluateExpression } from "./expr.js";
import { renderGraph } from "./render.js";
import { RECIPES, WorkbenchSession } from "./session.js";
import { OpJson } from "./types.js";

const api = new ApiClient(
  (document.querySelector("meta[name=hyperforge-api]") as HTMLMetaElement)?.content ??
    "http://127.0.0.1:8791",
);
const session = new WorkbenchSession(api);

const $ = <T extends HTMLElement>(id: string) => document.getElementById(id) as T;

function redraw() {
  const graph = $("graph");
  graph.innerHTML = session.view ? renderGraph(session.view) : "<p>no session</p>";
  const history = $("history");
  history.innerHTML = session.history
    .map((h, i) => `<li title="${h.hash}">${i + 1}. ${h.label}</li>`)
    .join("");
  $("error").textContent = session.lastError ?? "";
  const v = session.lastVerify;
  $("verify-result").textContent = v
    ? `fidelity ${v.fidelity.toFixed(6)}` +
      (v.predicted_fidelity !== null ? ` (predicted ${v.predicted_fidelity.toFixed(6)})` : "")
    : "";
  const staged = session.staged;
  $("staged").textContent = staged
    ? `${staged.name}: step ${staged.next}/${staged.ops.length}`
    : "";
  const modeSelect = $("op-mode") as unknown as HTMLSelectElement;
  const current = modeSelect.value;
  modeSelect.innerHTML = (session.view?.modes ?? [])
    .map((m) => `<option${m === current ? " selected" : ""}>${m}</option>`)
    .join("");
}

function readOp(): OpJson | null {
  const kind = ($("op-kind") as unknown as HTMLSelectElement).value;
  const modeSel = ($("op-mode") as unknown as HTMLSelectElement).value;
  const paramText = ($("op-param") as unknown as HTMLInputElement).value.trim();
  let param: number;
  try {
    param = evaluateExpression(paramText || "0");
  } catch (err) {
    session.lastError = `parameter: ${(err as Error).message}`;
    return null;
  }
  if (!modeSel) {
    session.lastError = "select a mode first";
    return null;
  }
  if (kind === "CZ") {
    const modes = (($("op-modes") as unknown as HTMLInputElement).value || modeSel)
      .split(",")
      .map((s) => s.trim())
      .filter(Boolean);
    return { op: "CZ", modes, param };
  }
  return { op: kind, mode: modeSel, param };
}

async function boot() {
  $("create").addEventListener("click", async () => {
    const modes = ($("modes") as unknown as HTMLInputElement).value
      .split(",")
      .map((s) => s.trim())
      .filter(Boolean);
    await session.start(modes);
    redraw();
  });

  $("apply").addEventListener("click", async () => {
    const op = readOp();
    if (op) await session.applyOp(op);
    redraw();
  });

  $("undo").addEventListener("click", async () => {
    await session.undo();
    redraw();
  });

  $("verify").addEventListener("click", async () => {
    const r = evaluateExpression(($("verify-r") as unknown as HTMLInputElement).value || "1");
    const cutoff = parseInt(($("verify-cutoff") as unknown as HTMLInputElement).value || "20", 10);
    await session.verify(r, cutoff);
    redraw();
  });

  const recipeSelect = $("recipe") as unknown as HTMLSelectElement;
  recipeSelect.innerHTML = RECIPES.map((r) => `<option>${r.name}</option>`).join("");

  $("stage").addEventListener("click", async () => {
    const recipe = RECIPES.find((r) => r.name === recipeSelect.value);
    if (!recipe) return;
    if (!session.view) {
      await session.start(recipe.modes);
      for (const op of recipe.prep) await session.applyOp(op);
    }
    session.stageRecipe(recipe.name, recipe.ops, recipe.requires);
    redraw();
  });

  $("step").addEventListener("click", async () => {
    await session.stepStaged();
    redraw();
  });

  $("export-dot").addEventListener("click", async () => {
    const text = await api.exportText(session.id, "dot");
    ($("export-output") as unknown as HTMLTextAreaElement).value = text;
  });

  $("export-circuit").addEventListener("click", async () => {
    const text = await api.exportText(session.id, "circuit");
    ($("export-output") as unknown as HTMLTextAreaElement).value = text;
  });

  redraw();
}

boot();
