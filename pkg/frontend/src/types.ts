// Wire shapes of the game service, validated at the boundary.
// Everything the UI renders comes out of these objects; nothing is
// recomputed locally.

import { z } from "zod";

export const BallSchema = z.object({
  center: z.array(z.number()),
  radius: z.number(),
});
export type BallDoc = z.infer<typeof BallSchema>;

export const FaceSchema = z.object({
  axis: z.number().int(),
  sign: z.number().int(),
  coeffs: z.array(z.number()),
  level: z.number(),
  polylines: z.array(z.array(z.tuple([z.number(), z.number()]))),
});
export type FaceDoc = z.infer<typeof FaceSchema>;

export const BoardFrameSchema = z.object({
  dim: z.number().int(),
  variant: z.string(),
  faces: z.array(FaceSchema),
  extent: z.number(),
});
export type BoardFrame = z.infer<typeof BoardFrameSchema>;

export const SessionConfigSchema = z.object({
  form: z.string(),
  m: z.string(),
  variant: z.string(),
  game: z.string(),
  beta: z.number(),
  rounds: z.number().int(),
  sup_cap: z.number().int(),
});
export type SessionConfig = z.infer<typeof SessionConfigSchema>;

export const SessionSchema = z.object({
  id: z.string(),
  config: SessionConfigSchema,
  constants: z.object({
    R0: z.number(),
    alpha: z.number(),
    kappa0: z.number(),
    c_pi: z.number(),
  }),
  round_index: z.number().int(),
  finished: z.boolean(),
  moves: z.array(BallSchema.extend({ owner: z.string(), round: z.number().int() })),
  board_frame: BoardFrameSchema,
  suggested_opening: BallSchema.optional(),
});
export type SessionDoc = z.infer<typeof SessionSchema>;

export const DangerSchema = z.object({
  lattice: z.array(z.number()),
  normalized: z.array(z.number()),
  plane: z.array(z.number()),
  chart: z.array(z.number()),
  forbidden_radius: z.number(),
});
export type DangerDoc = z.infer<typeof DangerSchema>;

export const CertificateSchema = z.object({
  v: z.array(z.number()),
  c: z.number(),
  rounds: z.number().int(),
});
export type Certificate = z.infer<typeof CertificateSchema>;

export const MoveSchema = z.object({
  round_index: z.number().int(),
  b_ball: BallSchema,
  a_reply: BallSchema,
  miss_kind: z.string(),
  dangers: z.array(DangerSchema),
  window: z.object({ lo: z.number(), hi: z.number(), count: z.number().int() }),
  invariant_slack: z.number().nullable(),
  margin_so_far: z.number().nullable(),
  finished: z.boolean(),
  chart_frame: z
    .object({
      pivot: z.number().int(),
      center_plane: z.array(z.number()),
      face: z.object({ axis: z.number().int(), sign: z.number().int() }),
    })
    .nullable(),
  certificate: CertificateSchema.optional(),
});
export type MoveDoc = z.infer<typeof MoveSchema>;

export const TranscriptSchema = z.object({
  config: z.object({
    form: z.string(),
    m: z.string(),
    variant: z.string(),
    game: z.string(),
    alpha: z.number(),
    beta: z.number(),
    rounds: z.number().int(),
    seed: z.number().int(),
    b_strategy: z.string(),
    sup_cap: z.number().int(),
  }),
  moves: z.array(BallSchema.extend({ owner: z.string() })),
  certificate: CertificateSchema.nullable(),
});
export type Transcript = z.infer<typeof TranscriptSchema>;

// the service's own error body, plus the framework's field-validation shape
export const RuleErrorSchema = z.object({
  error: z.object({
    rule: z.string(),
    detail: z.string(),
    legal_bounds: z.record(z.number()),
  }),
});
export const FieldErrorSchema = z.object({
  detail: z.array(z.object({ msg: z.string(), loc: z.array(z.union([z.string(), z.number()])) })),
});

export interface NewSessionRequest {
  form?: string;
  m?: string;
  game?: string;
  beta?: number;
  rounds?: number;
  sup_cap?: number;
  snapshots?: boolean;
}

export interface MoveRequest {
  center: number[];
  radius: number;
  snap?: boolean;
}
