// Transcript loading and the step-through viewer. Transcripts are the
// service's canonical game records; the viewer only re-orders what's in
// them, it never recomputes a move.

import { ZodError } from "zod";
import { BallView } from "./state.js";
import { Certificate, NewSessionRequest, Transcript, TranscriptSchema } from "./types.js";

export class ReplayLoadError extends Error {}

export function parseTranscript(text: string): Transcript {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new ReplayLoadError(`not JSON: ${(e as Error).message}`);
  }
  try {
    return TranscriptSchema.parse(raw);
  } catch (e) {
    if (e instanceof ZodError) {
      const first = e.issues[0];
      throw new ReplayLoadError(`bad transcript: ${first.path.join(".")} ${first.message}`);
    }
    throw e;
  }
}

export function stepCount(t: Transcript): number {
  return t.moves.length;
}

export interface ReplayFrame {
  step: number;
  balls: BallView[];
  certificate: Certificate | null; // shown once the last move is reached
}

export function frameAt(t: Transcript, step: number): ReplayFrame {
  const n = Math.max(0, Math.min(step, t.moves.length));
  const balls: BallView[] = t.moves.slice(0, n).map((mv, i) => ({
    owner: mv.owner === "A" ? "A" : "B",
    center: mv.center,
    radius: mv.radius,
    round: Math.floor(i / 2) + 1,
  }));
  return {
    step: n,
    balls,
    certificate: n === t.moves.length ? t.certificate : null,
  };
}

/** JSON with sorted keys and no whitespace, for stable comparisons. */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") return JSON.stringify(value);
  if (Array.isArray(value)) return `[${value.map(canonicalJson).join(",")}]`;
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${canonicalJson(v)}`);
  return `{${entries.join(",")}}`;
}

export function serializeTranscript(t: Transcript): string {
  return canonicalJson(t);
}

/**
 * "What if B had played differently from here?" - a new session with the
 * same config, to be fed the first `step` recorded B moves and then live
 * input. Returns the session request plus those scripted moves.
 */
export function forkPayload(t: Transcript, step: number): {
  session: NewSessionRequest;
  moves: { center: number[]; radius: number }[];
} {
  const session: NewSessionRequest = {
    form: t.config.form,
    m: t.config.m,
    game: t.config.game,
    beta: t.config.beta,
    rounds: t.config.rounds,
    sup_cap: t.config.sup_cap,
  };
  const moves = t.moves
    .slice(0, Math.max(0, Math.min(step, t.moves.length)))
    .filter((mv) => mv.owner === "B")
    .map((mv) => ({ center: mv.center, radius: mv.radius }));
  return { session, moves };
}
