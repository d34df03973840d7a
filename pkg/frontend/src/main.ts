// Browser entry point: wires the service client, the view fold and the
// canvas painter together. All game logic lives on the server; this file
// is forms, sliders and redraws.

import { ApiError, Client } from "./api.js";
import { buildScene, marginCurve, paintScene, planeCoords, Scene } from "./board.js";
import { forkPayload, frameAt, parseTranscript, ReplayLoadError, stepCount } from "./replay.js";
import {
  applyMove,
  applyRejection,
  GameView,
  newView,
  placeOptimistic,
  selectSlice,
  zoomOut,
} from "./state.js";
import { Transcript } from "./types.js";

const $ = (id: string) => document.getElementById(id)!;
const client = new Client("");

let view: GameView | null = null;
let replay: { t: Transcript; step: number } | null = null;

const board = $("board") as HTMLCanvasElement;
const chart = $("chart") as HTMLCanvasElement;
const slider = $("radius") as HTMLInputElement;

// ---------------------------------------------------------------------- //
// rendering

function fmt(x: number): string {
  return Math.abs(x) < 1e-3 || Math.abs(x) >= 1e4 ? x.toExponential(3) : x.toPrecision(5);
}

function redraw(): void {
  const ctx = board.getContext("2d")!;
  if (replay) {
    paintScene(replayScene(), ctx, board.width, board.height);
    $("status").textContent =
      `replay ${replay.step}/${stepCount(replay.t)} — ${replay.t.config.form}, m=${replay.t.config.m}`;
    const frame = frameAt(replay.t, replay.step);
    $("certificate").textContent = frame.certificate
      ? `certificate: c = ${fmt(frame.certificate.c)} after ${frame.certificate.rounds} rounds`
      : "";
    return;
  }
  if (!view) return;
  paintScene(buildScene(view), ctx, board.width, board.height);

  $("status").textContent =
    `${view.config.variant} board ${view.config.form}, m=${view.config.m} — ` +
    `round ${view.roundIndex}/${view.config.rounds}` +
    (view.margins.length ? ` — margin ${fmt(view.margins[view.margins.length - 1] ?? NaN)}` : "");

  const banner = $("banner");
  if (view.banner) {
    const bounds = Object.entries(view.banner.legalBounds)
      .map(([k, v]) => `${k} = ${fmt(v)}`)
      .join(", ");
    banner.textContent = `rejected — ${view.banner.rule}: ${view.banner.detail}` + (bounds ? ` (${bounds})` : "");
  } else {
    banner.textContent = "";
  }

  $("certificate").textContent = view.certificate
    ? `certificate: c = ${fmt(view.certificate.c)} at v = [${view.certificate.v.map(fmt).join(", ")}]`
    : "";

  // radius slider follows the served legal interval
  const b = view.radiusBounds;
  const max = b.exclusiveMax ? b.max * 0.999 : b.max;
  const min = b.min ?? max / 1000;
  slider.min = String(min);
  slider.max = String(max);
  slider.step = String((max - min) / 200 || max / 200);
  if (Number(slider.value) > max || Number(slider.value) < min) slider.value = String(max);
  $("radius-label").textContent = fmt(Number(slider.value));

  drawChart();
}

function drawChart(): void {
  const ctx = chart.getContext("2d")!;
  ctx.clearRect(0, 0, chart.width, chart.height);
  if (!view) return;
  const pts = marginCurve(view.margins);
  if (pts.length < 2) return;
  ctx.strokeStyle = "#0a6cff";
  ctx.beginPath();
  pts.forEach(([x, y], i) => {
    const sx = 4 + x * (chart.width - 8);
    const sy = chart.height - 4 - y * (chart.height - 8);
    if (i === 0) ctx.moveTo(sx, sy);
    else ctx.lineTo(sx, sy);
  });
  ctx.stroke();
}

function replayScene(): Scene {
  const frame = frameAt(replay!.t, replay!.step);
  const last = frame.balls[frame.balls.length - 1];
  const face = last ? faceOf(last.center) : { axis: 0, sign: 1 };
  const prims: Scene["primitives"] = [];
  for (const ball of frame.balls) {
    const p = planeCoords(ball.center, face);
    if (!p) continue;
    prims.push({ kind: "circle", cx: p[0], cy: p[1] ?? 0, r: ball.radius, role: ball.owner === "A" ? "ballA" : "ballB" });
  }
  const zc = last ? planeCoords(last.center, face) : null;
  return {
    face,
    center: zc ? [zc[0], zc[1] ?? 0] : [0, 0],
    halfExtent: last ? last.radius * 8 : 1.2,
    primitives: prims,
  };
}

function faceOf(center: number[]): { axis: number; sign: number } {
  let axis = 0;
  for (let i = 1; i < center.length; i++) if (Math.abs(center[i]) > Math.abs(center[axis])) axis = i;
  return { axis, sign: center[axis] >= 0 ? 1 : -1 };
}

// ---------------------------------------------------------------------- //
// live play

async function newGame(): Promise<void> {
  const cfg = {
    form: ($("form-input") as HTMLInputElement).value || "1,1,-1",
    m: ($("m-input") as HTMLInputElement).value || "0",
    game: ($("game-select") as HTMLSelectElement).value,
    beta: Number(($("beta-input") as HTMLInputElement).value) || 0.2,
    rounds: Number(($("rounds-input") as HTMLInputElement).value) || 30,
  };
  $("config-error").textContent = "";
  try {
    const doc = await client.createSession(cfg);
    replay = null;
    view = newView(doc);
    if (view.suggested) slider.value = String(view.suggested.radius);
    buildSliceSelector();
    redraw();
  } catch (e) {
    if (e instanceof ApiError) $("config-error").textContent = `${e.rule}: ${e.detail}`;
    else throw e;
  }
}

function buildSliceSelector(): void {
  const sel = $("slice-select") as HTMLSelectElement;
  sel.innerHTML = "";
  if (!view) return;
  const planeDim = view.boardFrame.dim - 1;
  sel.parentElement!.style.display = planeDim > 2 ? "" : "none";
  for (let i = 0; i < planeDim; i++) {
    for (let j = i + 1; j < planeDim; j++) {
      const opt = document.createElement("option");
      opt.value = `${i},${j}`;
      opt.textContent = `coords ${i + 1} & ${j + 1}`;
      sel.appendChild(opt);
    }
  }
}

board.addEventListener("click", (ev: MouseEvent) => {
  if (!view || view.finished || replay) return;
  const scene = buildScene(view);
  const rect = board.getBoundingClientRect();
  const sx = ((ev.clientX - rect.left) / rect.width) * board.width;
  const sy = ((ev.clientY - rect.top) / rect.height) * board.height;
  // invert toScreen for the current viewport
  const scale = Math.min(board.width, board.height) / (2 * scene.halfExtent);
  const px = scene.center[0] + (sx - board.width / 2) / scale;
  const py = scene.center[1] - (sy - board.height / 2) / scale;
  // lift the plane point back onto the cube face; the server snaps it
  // onto the variety (snap=true), we never solve the quadric here
  const zc = planeCoords(view.zoom.center, view.viewFace) ?? [];
  const plane = zc.slice();
  while (plane.length < view.boardFrame.dim - 1) plane.push(0);
  plane[view.sliceAxes[0]] = px;
  if (view.boardFrame.dim - 1 > 1) plane[view.sliceAxes[1]] = py;
  const ambient: number[] = [];
  let k = 0;
  for (let i = 0; i < view.boardFrame.dim; i++) {
    ambient.push(i === view.viewFace.axis ? view.viewFace.sign : plane[k++]);
  }
  view = placeOptimistic(view, ambient);
  redraw();
});

$("submit").addEventListener("click", async () => {
  if (!view || replay) return;
  const center = view.pendingCenter ?? view.suggested?.center ?? null;
  if (!center) return;
  try {
    const doc = await client.submitMove(view.sessionId, {
      center,
      radius: Number(slider.value),
      snap: true,
    });
    view = applyMove(view, doc);
  } catch (e) {
    if (e instanceof ApiError) view = applyRejection(view, e);
    else throw e;
  }
  redraw();
});

$("zoom-out").addEventListener("click", () => {
  if (view) {
    view = zoomOut(view);
    redraw();
  }
});

($("slice-select") as HTMLSelectElement).addEventListener("change", (ev) => {
  if (!view) return;
  const [i, j] = (ev.target as HTMLSelectElement).value.split(",").map(Number);
  view = selectSlice(view, [i, j]);
  redraw();
});

slider.addEventListener("input", () => {
  $("radius-label").textContent = fmt(Number(slider.value));
});

$("new-game").addEventListener("click", () => void newGame());

// ---------------------------------------------------------------------- //
// replay viewer

($("transcript-file") as HTMLInputElement).addEventListener("change", async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    const t = parseTranscript(await file.text());
    replay = { t, step: stepCount(t) };
    const step = $("step") as HTMLInputElement;
    step.min = "0";
    step.max = String(stepCount(t));
    step.value = String(replay.step);
    $("replay-error").textContent = "";
    redraw();
  } catch (e) {
    if (e instanceof ReplayLoadError) $("replay-error").textContent = e.message;
    else throw e;
  }
});

($("step") as HTMLInputElement).addEventListener("input", (ev) => {
  if (!replay) return;
  replay.step = Number((ev.target as HTMLInputElement).value);
  redraw();
});

$("fork").addEventListener("click", async () => {
  if (!replay) return;
  const { session, moves } = forkPayload(replay.t, replay.step);
  try {
    const doc = await client.createSession(session);
    let v = newView(doc);
    for (const mv of moves) {
      v = applyMove(v, await client.submitMove(doc.id, { ...mv, snap: true }));
    }
    view = v;
    replay = null;
    redraw();
  } catch (e) {
    if (e instanceof ApiError) $("replay-error").textContent = `fork failed — ${e.rule}: ${e.detail}`;
    else throw e;
  }
});

void newGame();
