// Game view state. A fold over service responses: session docs start a
// view, move docs extend it, error bodies surface as banners. Nothing in
// here decides legality or strategy - the service already did.

import { ApiError } from "./api.js";
import { BallDoc, Certificate, DangerDoc, MoveDoc, SessionDoc } from "./types.js";

export interface BallView {
  owner: "A" | "B";
  center: number[];
  radius: number;
  round: number;
}

export interface WindowView {
  round: number;
  lo: number;
  hi: number;
  count: number;
  missKind: string;
}

export interface Banner {
  rule: string;
  detail: string;
  legalBounds: Record<string, number>;
}

export interface RadiusBounds {
  min: number | null; // null: anything positive
  max: number;
  exclusiveMax: boolean; // opening bound R0 is strict
  source: "hint" | "server";
}

export interface ViewFace {
  axis: number;
  sign: number;
}

export interface GameView {
  sessionId: string;
  config: SessionDoc["config"];
  constants: SessionDoc["constants"];
  boardFrame: SessionDoc["board_frame"];
  balls: BallView[];
  dangers: DangerDoc[]; // from the latest exchange
  windows: WindowView[];
  margins: (number | null)[];
  roundIndex: number;
  finished: boolean;
  certificate: Certificate | null;
  banner: Banner | null;
  radiusBounds: RadiusBounds;
  suggested: BallDoc | null;
  pendingCenter: number[] | null; // optimistic marker awaiting the server
  viewFace: ViewFace; // which cube face the canvas is looking at
  sliceAxes: [number, number]; // plane coordinates drawn for d >= 3 boards
  zoom: { center: number[]; halfExtent: number };
}

function faceOfPoint(view: { boardFrame: SessionDoc["board_frame"] }, center: number[]): ViewFace {
  // the face whose coordinate the point maxes out; pure arithmetic on
  // served coordinates, not geometry
  let axis = 0;
  for (let i = 1; i < center.length; i++) {
    if (Math.abs(center[i]) > Math.abs(center[axis])) axis = i;
  }
  const sign = center[axis] >= 0 ? 1 : -1;
  const served = view.boardFrame.faces.find((f) => f.axis === axis && f.sign === sign);
  return served ? { axis: served.axis, sign: served.sign } : { axis, sign };
}

export function newView(doc: SessionDoc): GameView {
  const balls: BallView[] = doc.moves.map((mv) => ({
    owner: mv.owner === "A" ? "A" : "B",
    center: mv.center,
    radius: mv.radius,
    round: mv.round,
  }));
  const last = balls[balls.length - 1];
  const face = doc.board_frame.faces[0] ?? { axis: doc.board_frame.dim - 1, sign: 1 };
  return {
    sessionId: doc.id,
    config: doc.config,
    constants: doc.constants,
    boardFrame: doc.board_frame,
    balls,
    dangers: [],
    windows: [],
    margins: [],
    roundIndex: doc.round_index,
    finished: doc.finished,
    certificate: null,
    banner: null,
    radiusBounds: {
      min: null,
      max: doc.constants.R0,
      exclusiveMax: true,
      source: "hint",
    },
    suggested: doc.suggested_opening ?? null,
    pendingCenter: null,
    viewFace: last ? faceOfPoint({ boardFrame: doc.board_frame }, last.center) : { axis: face.axis, sign: face.sign },
    sliceAxes: [0, 1],
    zoom: last
      ? { center: last.center.slice(), halfExtent: last.radius * 8 }
      : { center: new Array(doc.board_frame.dim).fill(0), halfExtent: doc.board_frame.extent },
  };
}

/** Radius interval for the next move, from served config + reply only. */
function nextBounds(config: SessionDoc["config"], reply: BallDoc): RadiusBounds {
  const floor = config.beta * reply.radius;
  if (config.game === "strong") {
    return { min: floor, max: reply.radius, exclusiveMax: false, source: "hint" };
  }
  return { min: floor, max: floor, exclusiveMax: false, source: "hint" };
}

export function applyMove(view: GameView, doc: MoveDoc): GameView {
  const balls = view.balls.concat(
    { owner: "B", center: doc.b_ball.center, radius: doc.b_ball.radius, round: doc.round_index },
    { owner: "A", center: doc.a_reply.center, radius: doc.a_reply.radius, round: doc.round_index },
  );
  return {
    ...view,
    balls,
    dangers: doc.dangers,
    windows: view.windows.concat({
      round: doc.round_index,
      lo: doc.window.lo,
      hi: doc.window.hi,
      count: doc.window.count,
      missKind: doc.miss_kind,
    }),
    margins: view.margins.concat(doc.margin_so_far),
    roundIndex: doc.round_index,
    finished: doc.finished,
    certificate: doc.certificate ?? view.certificate,
    banner: null,
    radiusBounds: nextBounds(view.config, doc.a_reply),
    pendingCenter: null,
    viewFace: doc.chart_frame
      ? { axis: doc.chart_frame.face.axis, sign: doc.chart_frame.face.sign }
      : faceOfPoint(view, doc.a_reply.center),
    zoom: { center: doc.a_reply.center.slice(), halfExtent: doc.a_reply.radius * 8 },
  };
}

export function applyRejection(view: GameView, err: ApiError): GameView {
  let bounds = view.radiusBounds;
  if (err.legalBounds.max_radius !== undefined) {
    bounds = {
      min: err.legalBounds.min_radius ?? null,
      max: err.legalBounds.max_radius,
      exclusiveMax: err.rule === "R0",
      source: "server",
    };
  } else if (err.legalBounds.min_radius !== undefined) {
    bounds = { ...view.radiusBounds, min: err.legalBounds.min_radius, source: "server" };
  }
  return {
    ...view,
    banner: { rule: err.rule, detail: err.detail, legalBounds: err.legalBounds },
    radiusBounds: bounds,
    pendingCenter: null,
  };
}

export function placeOptimistic(view: GameView, center: number[]): GameView {
  return { ...view, pendingCenter: center.slice(), banner: null };
}

export function selectSlice(view: GameView, axes: [number, number]): GameView {
  return { ...view, sliceAxes: axes };
}

export function zoomOut(view: GameView): GameView {
  return {
    ...view,
    zoom: { center: new Array(view.boardFrame.dim).fill(0), halfExtent: view.boardFrame.extent },
  };
}
