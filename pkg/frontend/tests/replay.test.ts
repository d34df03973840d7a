// The replay viewer: loading, stepping, round-tripping and forking
// recorded transcripts.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  canonicalJson,
  forkPayload,
  frameAt,
  parseTranscript,
  ReplayLoadError,
  serializeTranscript,
  stepCount,
} from "../src/replay.js";

function fixtureText(name: string): string {
  const raw = JSON.parse(readFileSync(fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url)), "utf8"));
  return JSON.stringify(raw.body); // fixtures wrap the GET response
}

const text = fixtureText("transcript_lightcone.json");

describe("transcript loading", () => {
  it("parses a served transcript", () => {
    const t = parseTranscript(text);
    expect(t.moves.length).toBe(8);
    expect(t.config.form).toBe("1,1,-1");
    expect(t.certificate).not.toBeNull();
  });

  it("rejects non-JSON and schema mismatches as load errors", () => {
    expect(() => parseTranscript("not json at all")).toThrow(ReplayLoadError);
    const broken = JSON.parse(text);
    delete broken.moves;
    expect(() => parseTranscript(JSON.stringify(broken))).toThrow(ReplayLoadError);
    const wrongType = JSON.parse(text);
    wrongType.moves[0].radius = "big";
    expect(() => parseTranscript(JSON.stringify(wrongType))).toThrow(/radius/);
  });
});

describe("stepping", () => {
  const t = parseTranscript(text);

  it("replays the recorded balls in order", () => {
    for (let step = 0; step <= stepCount(t); step++) {
      const frame = frameAt(t, step);
      expect(frame.balls.length).toBe(step);
      frame.balls.forEach((ball, i) => {
        expect(ball.center).toEqual(t.moves[i].center);
        expect(ball.radius).toBe(t.moves[i].radius);
        expect(ball.owner).toBe(t.moves[i].owner);
      });
    }
  });

  it("owners alternate starting with B", () => {
    const frame = frameAt(t, stepCount(t));
    frame.balls.forEach((ball, i) => {
      expect(ball.owner).toBe(i % 2 === 0 ? "B" : "A");
    });
  });

  it("shows the certificate only at the end", () => {
    expect(frameAt(t, stepCount(t) - 1).certificate).toBeNull();
    expect(frameAt(t, stepCount(t)).certificate).toEqual(t.certificate);
  });

  it("clamps out-of-range steps", () => {
    expect(frameAt(t, -3).balls.length).toBe(0);
    expect(frameAt(t, 999).balls.length).toBe(stepCount(t));
  });
});

describe("round-trip", () => {
  it("parse -> serialize -> parse is the identity", () => {
    const t = parseTranscript(text);
    const again = parseTranscript(serializeTranscript(t));
    expect(again).toEqual(t);
    // and the canonical form is a fixed point
    expect(serializeTranscript(again)).toBe(serializeTranscript(t));
  });

  it("round-trips the level-board transcript too", () => {
    const t = parseTranscript(fixtureText("transcript_level.json"));
    expect(parseTranscript(serializeTranscript(t))).toEqual(t);
  });

  it("canonicalJson sorts keys at every depth", () => {
    expect(canonicalJson({ b: 1, a: [2, { d: 3, c: 4 }] })).toBe('{"a":[2,{"c":4,"d":3}],"b":1}');
    expect(canonicalJson(null)).toBe("null");
  });
});

describe("forking", () => {
  const t = parseTranscript(text);

  it("builds a same-config session plus the recorded B moves", () => {
    const { session, moves } = forkPayload(t, 4);
    expect(session.form).toBe(t.config.form);
    expect(session.m).toBe(t.config.m);
    expect(session.beta).toBe(t.config.beta);
    expect(session.rounds).toBe(t.config.rounds);
    // of the first four recorded balls, two belong to B
    expect(moves.length).toBe(2);
    expect(moves[0].center).toEqual(t.moves[0].center);
    expect(moves[1].center).toEqual(t.moves[2].center);
  });

  it("forking at step zero scripts nothing", () => {
    expect(forkPayload(t, 0).moves).toEqual([]);
  });
});
