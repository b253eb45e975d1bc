import type { StepMetricsRow } from "./types.js";

// Column order matches the simulator's metrics CSV exactly; a null
// dead/inflamed ratio becomes an empty cell. (n_new is JSON-only there too.)
export const CSV_COLUMNS = [
  "step",
  "n_nodes",
  "n_normal",
  "n_proliferative",
  "n_inflamed",
  "n_quiescent",
  "n_metastatic",
  "n_dead",
  "dead_inflamed_ratio",
  "p_redirect",
] as const;

export function metricsToCsv(rows: StepMetricsRow[]): string {
  const lines = [CSV_COLUMNS.join(",")];
  for (const row of rows) {
    lines.push(
      CSV_COLUMNS.map((col) => {
        const v = row[col];
        return v === null || v === undefined ? "" : String(v);
      }).join(","),
    );
  }
  return lines.join("\n") + "\n";
}

export function parseCsv(text: string): Record<string, string>[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) return [];
  const header = lines[0].split(",");
  return lines.slice(1).map((line) => {
    const cells = line.split(",");
    const rec: Record<string, string> = {};
    header.forEach((h, i) => {
      rec[h] = cells[i] ?? "";
    });
    return rec;
  });
}
