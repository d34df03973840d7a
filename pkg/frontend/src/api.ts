// Thin typed client over the game service. The fetch function is
// injectable so tests can feed recorded responses through the same path
// a browser uses.

import {
  FieldErrorSchema,
  MoveDoc,
  MoveRequest,
  MoveSchema,
  NewSessionRequest,
  RuleErrorSchema,
  SessionDoc,
  SessionSchema,
  Transcript,
  TranscriptSchema,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  status: number;
  rule: string;
  detail: string;
  legalBounds: Record<string, number>;

  constructor(status: number, rule: string, detail: string, legalBounds: Record<string, number> = {}) {
    super(`${rule}: ${detail}`);
    this.status = status;
    this.rule = rule;
    this.detail = detail;
    this.legalBounds = legalBounds;
  }
}

/** Turn any non-2xx body into an ApiError with the server's named rule. */
export function errorFromBody(status: number, body: unknown): ApiError {
  const rule = RuleErrorSchema.safeParse(body);
  if (rule.success) {
    const e = rule.data.error;
    return new ApiError(status, e.rule, e.detail, e.legal_bounds);
  }
  const fields = FieldErrorSchema.safeParse(body);
  if (fields.success) {
    const detail = fields.data.detail
      .map((d) => `${d.loc.slice(1).join(".")}: ${d.msg}`)
      .join("; ");
    return new ApiError(status, "validation", detail);
  }
  return new ApiError(status, "unknown", JSON.stringify(body));
}

export class Client {
  baseUrl: string;
  fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const resp = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const parsed = await resp.json();
    if (!resp.ok) throw errorFromBody(resp.status, parsed);
    return parsed;
  }

  async createSession(cfg: NewSessionRequest): Promise<SessionDoc> {
    return SessionSchema.parse(await this.request("POST", "/sessions", cfg));
  }

  async getSession(id: string): Promise<SessionDoc> {
    return SessionSchema.parse(await this.request("GET", `/sessions/${id}`));
  }

  async submitMove(id: string, move: MoveRequest): Promise<MoveDoc> {
    return MoveSchema.parse(await this.request("POST", `/sessions/${id}/move`, move));
  }

  async getTranscript(id: string): Promise<Transcript> {
    return TranscriptSchema.parse(await this.request("GET", `/sessions/${id}/transcript`));
  }
}
