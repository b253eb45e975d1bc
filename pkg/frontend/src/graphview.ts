import { colorForState } from "./colors.js";
import type { GraphSnapshot } from "./types.js";

// Above this node count the view draws only the highest-degree nodes (and the
// links among them) so the canvas stays responsive.
export const RENDER_NODE_LIMIT = 5000;

export interface LayoutNode {
  id: number;
  x: number;
  y: number;
  color: string;
  radius: number;
}

export interface LayoutLink {
  src: number;
  dst: number;
}

export interface Layout {
  nodes: LayoutNode[];
  links: LayoutLink[];
  /** total nodes in the snapshot, before any degree filtering */
  totalNodes: number;
  filtered: boolean;
}

export function degreeMap(snap: GraphSnapshot): Map<number, number> {
  const deg = new Map<number, number>();
  for (const node of snap.nodes) deg.set(node.id, 0);
  for (const link of snap.links) {
    deg.set(link.src, (deg.get(link.src) ?? 0) + 1);
    deg.set(link.dst, (deg.get(link.dst) ?? 0) + 1);
  }
  return deg;
}

/** Pick the nodes to draw: everything when small, else the `limit`
 * highest-degree nodes (ties broken by id for determinism). */
export function visibleNodeIds(
  snap: GraphSnapshot,
  limit = RENDER_NODE_LIMIT,
): Set<number> {
  if (snap.nodes.length <= limit) {
    return new Set(snap.nodes.map((n) => n.id));
  }
  const deg = degreeMap(snap);
  const ranked = [...snap.nodes].sort((a, b) => {
    const d = (deg.get(b.id) ?? 0) - (deg.get(a.id) ?? 0);
    return d !== 0 ? d : a.id - b.id;
  });
  return new Set(ranked.slice(0, limit).map((n) => n.id));
}

// Deterministic hash-based jitter so layouts are reproducible without a
// seeded RNG dependency.
function jitter(id: number, salt: number): number {
  let h = (id * 2654435761 + salt * 40503) >>> 0;
  h ^= h >>> 13;
  h = (h * 2246822519) >>> 0;
  h ^= h >>> 16;
  return h / 0xffffffff;
}

/** A few rounds of force relaxation over a circular seed layout. Kept small
 * and dependency-free; visual quality over physical accuracy. */
export function computeLayout(
  snap: GraphSnapshot,
  width: number,
  height: number,
  limit = RENDER_NODE_LIMIT,
  iterations = 30,
): Layout {
  const visible = visibleNodeIds(snap, limit);
  const nodes = snap.nodes.filter((n) => visible.has(n.id));
  const links = snap.links.filter(
    (l) => visible.has(l.src) && visible.has(l.dst),
  );
  const index = new Map<number, number>();
  nodes.forEach((n, i) => index.set(n.id, i));

  const cx = width / 2;
  const cy = height / 2;
  const r0 = Math.min(width, height) * 0.4;
  const xs = new Float64Array(nodes.length);
  const ys = new Float64Array(nodes.length);
  nodes.forEach((n, i) => {
    const angle = 2 * Math.PI * (i / Math.max(1, nodes.length));
    xs[i] = cx + r0 * Math.cos(angle) * (0.5 + 0.5 * jitter(n.id, 1));
    ys[i] = cy + r0 * Math.sin(angle) * (0.5 + 0.5 * jitter(n.id, 2));
  });

  const springLength = r0 / Math.max(2, Math.sqrt(nodes.length));
  for (let it = 0; it < iterations; it++) {
    const step = 0.1 * (1 - it / iterations);
    // attraction along links
    for (const link of links) {
      const a = index.get(link.src)!;
      const b = index.get(link.dst)!;
      const dx = xs[b] - xs[a];
      const dy = ys[b] - ys[a];
      const dist = Math.hypot(dx, dy) || 1e-6;
      const f = ((dist - springLength) / dist) * step;
      xs[a] += dx * f;
      ys[a] += dy * f;
      xs[b] -= dx * f;
      ys[b] -= dy * f;
    }
    // weak pull to the center keeps disconnected pieces on screen
    for (let i = 0; i < nodes.length; i++) {
      xs[i] += (cx - xs[i]) * 0.01;
      ys[i] += (cy - ys[i]) * 0.01;
    }
  }

  const radius = nodes.length > 1000 ? 2 : nodes.length > 200 ? 3 : 5;
  return {
    nodes: nodes.map((n, i) => ({
      id: n.id,
      x: xs[i],
      y: ys[i],
      color: colorForState(n.state),
      radius,
    })),
    links,
    totalNodes: snap.nodes.length,
    filtered: visible.size < snap.nodes.length,
  };
}

export function drawLayout(
  ctx: CanvasRenderingContext2D,
  layout: Layout,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const pos = new Map<number, LayoutNode>();
  for (const n of layout.nodes) pos.set(n.id, n);
  ctx.strokeStyle = "rgba(120,120,120,0.25)";
  ctx.lineWidth = 0.5;
  ctx.beginPath();
  for (const l of layout.links) {
    const a = pos.get(l.src)!;
    const b = pos.get(l.dst)!;
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
  }
  ctx.stroke();
  for (const n of layout.nodes) {
    ctx.fillStyle = n.color;
    ctx.beginPath();
    ctx.arc(n.x, n.y, n.radius, 0, 2 * Math.PI);
    ctx.fill();
  }
}
