// Scene building and canvas painting for the board view.
//
// buildScene turns a GameView into a flat display list in face-plane
// coordinates; paintScene rasterizes it. Splitting the two keeps every
// drawing decision testable without a DOM: tests assert on primitives,
// the painter just walks them.

import { GameView, ViewFace } from "./state.js";

export type Role =
  | "board"
  | "ballA"
  | "ballB"
  | "ghost"
  | "danger"
  | "forbidden"
  | "pending"
  | "suggested"
  | "legal";

export type Primitive =
  | { kind: "polyline"; points: [number, number][]; role: Role }
  | { kind: "circle"; cx: number; cy: number; r: number; role: Role }
  | { kind: "marker"; x: number; y: number; label: string; role: Role };

export interface Scene {
  face: ViewFace;
  center: [number, number]; // viewport center, plane coords
  halfExtent: number;
  primitives: Primitive[];
}

/** Radial projection of an ambient point onto the viewed face plane. */
export function planeCoords(center: number[], face: ViewFace): number[] | null {
  const depth = face.sign * center[face.axis];
  if (depth < 0.5) return null;
  const out: number[] = [];
  for (let i = 0; i < center.length; i++) {
    if (i !== face.axis) out.push(center[i] / depth);
  }
  return out;
}

function pick2(plane: number[], slice: [number, number]): [number, number] {
  if (plane.length <= 2) return [plane[0] ?? 0, plane[1] ?? 0];
  return [plane[slice[0]] ?? 0, plane[slice[1]] ?? 0];
}

export function buildScene(view: GameView): Scene {
  const face = view.viewFace;
  const prims: Primitive[] = [];

  // board curve, only for the face we're looking at (served polylines)
  for (const f of view.boardFrame.faces) {
    if (f.axis !== face.axis || f.sign !== face.sign) continue;
    for (const run of f.polylines) {
      prims.push({ kind: "polyline", points: run.map((p) => [p[0], p[1]]), role: "board" });
    }
  }

  if (view.suggested && view.balls.length === 0) {
    const p = planeCoords(view.suggested.center, face);
    if (p) {
      const [cx, cy] = pick2(p, view.sliceAxes);
      prims.push({ kind: "circle", cx, cy, r: view.suggested.radius, role: "suggested" });
    }
  }

  let lastA: { cx: number; cy: number; r: number } | null = null;
  let lastAny: { cx: number; cy: number; r: number } | null = null;
  for (const ball of view.balls) {
    const p = planeCoords(ball.center, face);
    if (!p) continue;
    const [cx, cy] = pick2(p, view.sliceAxes);
    prims.push({ kind: "circle", cx, cy, r: ball.radius, role: ball.owner === "A" ? "ballA" : "ballB" });
    if (ball.owner === "A") lastA = { cx, cy, r: ball.radius };
    lastAny = { cx, cy, r: ball.radius };
  }
  if (lastA) {
    // the strategy keeps dodged directions three radii away; ghost that zone
    prims.push({ kind: "circle", cx: lastA.cx, cy: lastA.cy, r: 3 * lastA.r, role: "ghost" });
  }

  for (const d of view.dangers) {
    const [x, y] = pick2(d.plane, view.sliceAxes);
    prims.push({ kind: "marker", x, y, label: d.lattice.join(","), role: "danger" });
    if (d.forbidden_radius > 0) {
      prims.push({ kind: "circle", cx: x, cy: y, r: d.forbidden_radius, role: "forbidden" });
    }
  }

  if (view.pendingCenter) {
    const p = planeCoords(view.pendingCenter, face);
    if (p) {
      const [x, y] = pick2(p, view.sliceAxes);
      prims.push({ kind: "marker", x, y, label: "?", role: "pending" });
    }
  }

  // a rejected move's legal window, drawn around the last played ball
  const offset = view.banner?.legalBounds["max_center_offset"];
  if (offset !== undefined && lastAny) {
    prims.push({ kind: "circle", cx: lastAny.cx, cy: lastAny.cy, r: offset, role: "legal" });
  }

  const zc = planeCoords(view.zoom.center, face);
  const center = zc ? pick2(zc, view.sliceAxes) : ([0, 0] as [number, number]);
  return { face, center, halfExtent: view.zoom.halfExtent, primitives: prims };
}

// ---------------------------------------------------------------------- //
// rasterizing

export interface CanvasLike {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
  setLineDash(segments: number[]): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  font: string;
}

const STYLES: Record<Role, { stroke: string; dash: number[]; alpha: number }> = {
  board: { stroke: "#444", dash: [], alpha: 1 },
  ballB: { stroke: "#0a6cff", dash: [], alpha: 1 },
  ballA: { stroke: "#ff7a00", dash: [], alpha: 1 },
  ghost: { stroke: "#ff7a00", dash: [6, 4], alpha: 0.35 },
  danger: { stroke: "#d40000", dash: [], alpha: 1 },
  forbidden: { stroke: "#d40000", dash: [3, 3], alpha: 0.6 },
  pending: { stroke: "#888", dash: [2, 2], alpha: 0.8 },
  suggested: { stroke: "#19a319", dash: [4, 4], alpha: 0.8 },
  legal: { stroke: "#19a319", dash: [8, 4], alpha: 0.9 },
};

export function toScreen(scene: Scene, width: number, height: number, x: number, y: number): [number, number] {
  const scale = Math.min(width, height) / (2 * scene.halfExtent);
  return [width / 2 + (x - scene.center[0]) * scale, height / 2 - (y - scene.center[1]) * scale];
}

export function paintScene(scene: Scene, ctx: CanvasLike, width: number, height: number): void {
  const scale = Math.min(width, height) / (2 * scene.halfExtent);
  ctx.clearRect(0, 0, width, height);
  ctx.font = "11px sans-serif";
  for (const prim of scene.primitives) {
    const style = STYLES[prim.role];
    ctx.strokeStyle = style.stroke;
    ctx.fillStyle = style.stroke;
    ctx.globalAlpha = style.alpha;
    ctx.setLineDash(style.dash);
    ctx.lineWidth = 1.25;
    if (prim.kind === "polyline") {
      ctx.beginPath();
      prim.points.forEach(([x, y], i) => {
        const [sx, sy] = toScreen(scene, width, height, x, y);
        if (i === 0) ctx.moveTo(sx, sy);
        else ctx.lineTo(sx, sy);
      });
      ctx.stroke();
    } else if (prim.kind === "circle") {
      const [sx, sy] = toScreen(scene, width, height, prim.cx, prim.cy);
      ctx.beginPath();
      // keep hairline balls visible when zoomed far out
      ctx.arc(sx, sy, Math.max(prim.r * scale, 1.5), 0, 2 * Math.PI);
      ctx.stroke();
    } else {
      const [sx, sy] = toScreen(scene, width, height, prim.x, prim.y);
      ctx.beginPath();
      ctx.moveTo(sx - 4, sy);
      ctx.lineTo(sx + 4, sy);
      ctx.moveTo(sx, sy - 4);
      ctx.lineTo(sx, sy + 4);
      ctx.stroke();
      ctx.fillText(prim.label, sx + 6, sy - 6);
    }
  }
  ctx.globalAlpha = 1;
  ctx.setLineDash([]);
}

/** Normalized polyline of the margin history, for the little side chart. */
export function marginCurve(margins: (number | null)[]): [number, number][] {
  const pts: [number, number][] = [];
  const vals = margins.filter((m): m is number => m !== null && m > 0);
  if (vals.length === 0) return pts;
  const logs = vals.map((v) => Math.log10(v));
  const lo = Math.min(...logs);
  const hi = Math.max(...logs, lo + 1e-9);
  margins.forEach((m, round) => {
    if (m === null || m <= 0) return;
    const y = (Math.log10(m) - lo) / (hi - lo);
    pts.push([margins.length === 1 ? 0.5 : round / (margins.length - 1), y]);
  });
  return pts;
}
