import { ApiRequestError, SessionClient } from "./api.js";
import { drawChart, populationChart, ratioChart } from "./charts.js";
import { STATE_COLORS } from "./colors.js";
import { metricsToCsv } from "./csv.js";
import { computeLayout, drawLayout } from "./graphview.js";
import { RunLoop } from "./poll.js";
import { SWITCH_PRESETS, defaultCreateRequest } from "./presets.js";
import type { StepMetricsRow, SwitchChange, SwitchConfig } from "./types.js";
import { validateCreateRequest, validateSwitch } from "./validate.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const client = new SessionClient(
  (document.body.dataset.apiBase ?? "http://127.0.0.1:8000").replace(/\/$/, ""),
);

let sessionId: string | null = null;
let rows: StepMetricsRow[] = [];
let changes: SwitchChange[] = [];
let loop: RunLoop | null = null;

function setStatus(text: string): void {
  $("status").textContent = text;
}

function readSwitch(): SwitchConfig {
  return {
    angioprevention: Number($<HTMLInputElement>("sw-ap").value),
    angiogenesis: Number($<HTMLInputElement>("sw-ag").value),
    quiescent: Number($<HTMLInputElement>("sw-q").value),
  };
}

function writeSwitch(sw: SwitchConfig): void {
  $<HTMLInputElement>("sw-ap").value = String(sw.angioprevention);
  $<HTMLInputElement>("sw-ag").value = String(sw.angiogenesis);
  $<HTMLInputElement>("sw-q").value = String(sw.quiescent);
  $("sw-readout").textContent =
    `ap=${sw.angioprevention} ag=${sw.angiogenesis} q=${sw.quiescent}`;
}

function buildLegend(): void {
  const legend = $("legend");
  for (const [state, color] of Object.entries(STATE_COLORS)) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const dot = document.createElement("span");
    dot.className = "legend-dot";
    dot.style.backgroundColor = color;
    item.append(dot, ` ${state} `);
    legend.append(item);
  }
}

function redrawCharts(): void {
  const pop = $<HTMLCanvasElement>("chart-pop");
  const ratio = $<HTMLCanvasElement>("chart-ratio");
  drawChart(
    pop.getContext("2d")!,
    populationChart(rows, changes),
    pop.width,
    pop.height,
  );
  drawChart(
    ratio.getContext("2d")!,
    ratioChart(rows, changes),
    ratio.width,
    ratio.height,
  );
}

async function redrawGraph(): Promise<void> {
  if (!sessionId) return;
  const snap = await client.snapshot(sessionId);
  const canvas = $<HTMLCanvasElement>("graph");
  const layout = computeLayout(snap, canvas.width, canvas.height);
  drawLayout(canvas.getContext("2d")!, layout, canvas.width, canvas.height);
  $("graph-note").textContent = layout.filtered
    ? `showing ${layout.nodes.length} highest-degree of ${layout.totalNodes} nodes`
    : `${layout.totalNodes} nodes`;
}

function onMetrics(newRows: StepMetricsRow[]): void {
  rows = rows.concat(newRows);
  const last = rows[rows.length - 1];
  if (last) {
    setStatus(
      `step ${last.step}: ${last.n_nodes} nodes, ` +
        `${last.n_inflamed} inflamed, ${last.n_dead} dead`,
    );
  }
  redrawCharts();
  void redrawGraph();
}

function reportError(err: unknown): void {
  if (err instanceof ApiRequestError) {
    setStatus(
      err.busy
        ? "session busy — command skipped, will retry"
        : `error ${err.status}: ${err.message}` +
            (err.field ? ` (${err.field})` : ""),
    );
  } else {
    setStatus(`error: ${String(err)}`);
  }
}

async function createSession(): Promise<void> {
  const req = defaultCreateRequest();
  req.n = Number($<HTMLInputElement>("in-n").value);
  req.p_edge = Number($<HTMLInputElement>("in-pedge").value);
  req.driver.N = Number($<HTMLInputElement>("in-csc").value);
  req.seed = Number($<HTMLInputElement>("in-seed").value);
  req.switch = readSwitch();
  const errors = validateCreateRequest(req);
  if (errors.length > 0) {
    setStatus(`invalid ${errors[0].field}: ${errors[0].message}`);
    return;
  }
  loop?.stop();
  const res = await client.createSession(req);
  sessionId = res.session_id;
  rows = [];
  changes = [];
  loop = new RunLoop(client, sessionId, {
    onMetrics,
    onBusy: () => setStatus("session busy — step skipped"),
    onError: reportError,
  });
  setStatus(`session ${sessionId} created with ${res.node_count} nodes`);
  redrawCharts();
  await redrawGraph();
}

async function applySwitch(sw: SwitchConfig): Promise<void> {
  writeSwitch(sw);
  if (!sessionId) return;
  const errors = validateSwitch(sw);
  if (errors.length > 0) {
    setStatus(`invalid ${errors[0].field}: ${errors[0].message}`);
    return;
  }
  await client.setSwitch(sessionId, sw);
  const metrics = await client.metrics(sessionId);
  changes = metrics.switch_changes;
  redrawCharts();
  setStatus("switch applied");
}

function downloadCsv(): void {
  const csv = metricsToCsv(rows);
  const blob = new Blob([csv], { type: "text/csv" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "metrics.csv";
  a.click();
  URL.revokeObjectURL(a.href);
}

export function wireUi(): void {
  buildLegend();
  writeSwitch(SWITCH_PRESETS.ASW1);
  $("btn-create").addEventListener("click", () =>
    createSession().catch(reportError),
  );
  for (const name of ["ASW1", "ASW2", "ASW3"] as const) {
    $(`btn-${name.toLowerCase()}`).addEventListener("click", () =>
      applySwitch(SWITCH_PRESETS[name]).catch(reportError),
    );
  }
  $("btn-apply").addEventListener("click", () =>
    applySwitch(readSwitch()).catch(reportError),
  );
  $("btn-step").addEventListener("click", () => void loop?.tick());
  $("btn-run").addEventListener("click", () => loop?.start(500));
  $("btn-pause").addEventListener("click", () => loop?.stop());
  $("btn-grow").addEventListener("click", () => {
    if (!sessionId) return;
    client
      .grow(sessionId, Number($<HTMLInputElement>("in-grow").value))
      .then((r) => {
        setStatus(`grew to ${r.node_count} nodes (p_redirect=${r.p_redirect})`);
        return redrawGraph();
      })
      .catch(reportError);
  });
  $("btn-csv").addEventListener("click", downloadCsv);
  for (const id of ["sw-ap", "sw-ag", "sw-q"]) {
    $(id).addEventListener("input", () => writeSwitch(readSwitch()));
  }
}

if (typeof document !== "undefined" && document.getElementById("btn-create")) {
  wireUi();
}
