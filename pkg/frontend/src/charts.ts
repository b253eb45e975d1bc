import { STATE_COLORS } from "./colors.js";
import type { CellStateName, StepMetricsRow, SwitchChange } from "./types.js";

export interface Series {
  label: string;
  color: string;
  /** one point per metrics row; null = gap (no line segment drawn) */
  points: (number | null)[];
}

export interface ChartModel {
  steps: number[];
  series: Series[];
  /** x positions (step indices) where the angiogenic switch changed */
  markers: number[];
}

const COUNT_FIELDS: [keyof StepMetricsRow, CellStateName][] = [
  ["n_normal", "normal"],
  ["n_proliferative", "proliferative"],
  ["n_inflamed", "inflamed"],
  ["n_quiescent", "quiescent"],
  ["n_metastatic", "metastatic"],
  ["n_dead", "dead"],
];

export function populationChart(
  rows: StepMetricsRow[],
  changes: SwitchChange[],
): ChartModel {
  return {
    steps: rows.map((r) => r.step),
    series: COUNT_FIELDS.map(([field, state]) => ({
      label: state,
      color: STATE_COLORS[state],
      points: rows.map((r) => r[field] as number),
    })),
    markers: changes.map((c) => c.step),
  };
}

export function ratioChart(
  rows: StepMetricsRow[],
  changes: SwitchChange[],
): ChartModel {
  return {
    steps: rows.map((r) => r.step),
    series: [
      {
        label: "dead/inflamed",
        color: "#333333",
        // a null ratio (no inflamed cells) is a gap, not a zero
        points: rows.map((r) => r.dead_inflamed_ratio),
      },
    ],
    markers: changes.map((c) => c.step),
  };
}

export function drawChart(
  ctx: CanvasRenderingContext2D,
  model: ChartModel,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  if (model.steps.length === 0) return;
  const pad = 28;
  const xMin = model.steps[0];
  const xMax = Math.max(model.steps[model.steps.length - 1], xMin + 1);
  let yMax = 1;
  for (const s of model.series) {
    for (const p of s.points) {
      if (p !== null && p > yMax) yMax = p;
    }
  }
  const toX = (step: number) =>
    pad + ((step - xMin) / (xMax - xMin)) * (width - 2 * pad);
  const toY = (v: number) => height - pad - (v / yMax) * (height - 2 * pad);

  ctx.strokeStyle = "#cccccc";
  ctx.strokeRect(pad, pad, width - 2 * pad, height - 2 * pad);

  // switch-change markers: dashed vertical lines
  ctx.save();
  ctx.strokeStyle = "#b05cd6";
  ctx.setLineDash([4, 4]);
  for (const step of model.markers) {
    const x = toX(step);
    ctx.beginPath();
    ctx.moveTo(x, pad);
    ctx.lineTo(x, height - pad);
    ctx.stroke();
  }
  ctx.restore();

  for (const s of model.series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    let penDown = false;
    s.points.forEach((p, i) => {
      if (p === null) {
        penDown = false;
        return;
      }
      const x = toX(model.steps[i]);
      const y = toY(p);
      if (penDown) ctx.lineTo(x, y);
      else ctx.moveTo(x, y);
      penDown = true;
    });
    ctx.stroke();
  }
}
