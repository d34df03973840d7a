"""HTTP wrapper around the game engine.

One session is one game.  The server owns player A: every POSTed ball is
player B's move, validated against the rules, and the reply comes back
with the danger directions (in face-plane and chart coordinates), the
running approximation margin, and drawing data for the board.  Errors
always carry the violated rule and the bounds a legal move must satisfy.
"""

from __future__ import annotations

import math
import random
import threading
import uuid
from fractions import Fraction
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .forms import FormError, parse_form
from .game import Ball, Game, GameConfig, InvariantViolation, RuleViolation
from .geometry import (
    GeometryError,
    active_faces,
    face_coeffs,
    face_level,
    project_to_variety,
    sample_board_points,
)

app = FastAPI(title="quadgame", version="0.1.0")


class SessionIn(BaseModel):
    form: str = "1,1,-1"
    m: str = "0"
    game: Literal["classic", "strong"] = "classic"
    beta: float = Field(default=0.2, gt=0.0, lt=1.0)
    rounds: int = Field(default=30, ge=1, le=500)
    sup_cap: int = Field(default=10_000, ge=10, le=100_000)
    snapshots: bool = False


class MoveIn(BaseModel):
    center: list[float]
    radius: float = Field(gt=0.0)
    snap: bool = True


class _Session:
    def __init__(self, sid: str, game: Game, keep_snapshots: bool):
        self.id = sid
        self.game = game
        self.lock = threading.Lock()
        self.snapshots: list[dict] | None = [] if keep_snapshots else None


_SESSIONS: dict[str, _Session] = {}


class _ServiceError(Exception):
    def __init__(self, status: int, rule: str, detail: str, legal_bounds: dict | None = None):
        self.status = status
        self.body = {"error": {"rule": rule, "detail": detail, "legal_bounds": legal_bounds or {}}}


@app.exception_handler(_ServiceError)
async def _service_error(request: Request, exc: _ServiceError):
    return JSONResponse(status_code=exc.status, content=exc.body)


def _get(sid: str) -> _Session:
    sess = _SESSIONS.get(sid)
    if sess is None:
        raise _ServiceError(404, "unknown-session", f"no session {sid!r}")
    return sess


# ---------------------------------------------------------------------- #
# drawing data


def _face_doc(form, face) -> dict:
    return {
        "axis": face.axis,
        "sign": face.sign,
        "coeffs": [float(c) for c in face_coeffs(form, face)],
        "level": float(face_level(form, face)),
    }


def _face_polylines(form, face, extent: float = 1.2, samples: int = 241) -> list:
    """Polylines of the face curve for two-dimensional boards.

    Each plane coordinate is swept and the quadric solved for the other
    one; both square-root branches are emitted as separate runs, split
    wherever the curve leaves the drawing extent.
    """
    coeffs = [float(c) for c in face_coeffs(form, face)]
    level = float(face_level(form, face))
    if len(coeffs) != 2:
        return []
    polys = []
    for sweep in (0, 1):
        other = 1 - sweep
        for branch in (1.0, -1.0):
            run: list[list[float]] = []
            for i in range(samples):
                v = -extent + 2.0 * extent * i / (samples - 1)
                rem = (level - coeffs[sweep] * v * v) / coeffs[other]
                if rem < 0:
                    if len(run) > 1:
                        polys.append(run)
                    run = []
                    continue
                w = branch * math.sqrt(rem)
                if abs(w) > extent:
                    if len(run) > 1:
                        polys.append(run)
                    run = []
                    continue
                point = [0.0, 0.0]
                point[sweep], point[other] = v, w
                run.append(point)
            if len(run) > 1:
                polys.append(run)
    return polys


def _board_frame(game: Game) -> dict:
    form = game.config.form
    faces = []
    for face in active_faces(form):
        doc = _face_doc(form, face)
        doc["polylines"] = _face_polylines(form, face)
        faces.append(doc)
    return {
        "dim": form.dim,
        "variant": game.config.variant,
        "faces": faces,
        "extent": 1.2,
    }


def _finite(x: float) -> float | None:
    """JSON has no infinities; an unconstrained quantity is sent as null."""
    return x if math.isfinite(x) else None


def _ball_doc(ball: Ball) -> dict:
    return {"center": list(ball.center), "radius": ball.radius}


def _session_doc(sess: _Session) -> dict:
    game = sess.game
    return {
        "id": sess.id,
        "config": {
            "form": game.config.form.label(),
            "m": f"{game.config.m.numerator}/{game.config.m.denominator}",
            "variant": game.config.variant,
            "game": game.config.game,
            "beta": game.config.beta,
            "rounds": game.config.rounds,
            "sup_cap": game.config.sup_cap,
        },
        "constants": {
            "R0": game.constants.R0,
            "alpha": game.alpha,
            "kappa0": game.kappa0,
            "c_pi": game.constants.c_pi,
        },
        "round_index": game.round_index,
        "finished": game.finished,
        "moves": [
            {"owner": rec.owner, "round": rec.round_index, **_ball_doc(rec.ball)}
            for rec in game.moves
        ],
        "board_frame": _board_frame(game),
    }


# ---------------------------------------------------------------------- #
# endpoints


@app.post("/sessions", status_code=201)
def create_session(body: SessionIn):
    try:
        form = parse_form(body.form)
        m = Fraction(body.m)
    except (FormError, ValueError) as exc:
        raise _ServiceError(422, "bad-config", str(exc))
    config = GameConfig(
        form=form, m=m, game=body.game, beta=body.beta,
        rounds=body.rounds, sup_cap=body.sup_cap,
    )
    try:
        game = Game(config)
    except (GeometryError, ValueError) as exc:
        raise _ServiceError(422, "bad-config", str(exc))
    sid = uuid.uuid4().hex
    sess = _Session(sid, game, body.snapshots)
    _SESSIONS[sid] = sess
    opening = sample_board_points(form, 1, random.Random(0))[0]
    doc = _session_doc(sess)
    doc["suggested_opening"] = {"center": list(opening), "radius": game.constants.R0 / 2}
    return doc


@app.get("/sessions/{sid}")
def get_session(sid: str):
    return _session_doc(_get(sid))


@app.post("/sessions/{sid}/move")
def post_move(sid: str, body: MoveIn):
    sess = _get(sid)
    if not sess.lock.acquire(blocking=False):
        raise _ServiceError(409, "busy", "another move is being processed")
    try:
        game = sess.game
        center = tuple(body.center)
        if len(center) != game.config.form.dim:
            raise _ServiceError(
                422, "bad-move", f"center needs {game.config.form.dim} coordinates"
            )
        if body.snap:
            try:
                center = project_to_variety(game.config.form, center)
            except GeometryError as exc:
                raise _ServiceError(422, "center-off-variety", str(exc))
        try:
            ball = Ball(center=center, radius=body.radius)
            report = game.submit_B(ball)
        except RuleViolation as exc:
            raise _ServiceError(
                422, exc.rule, exc.detail, {k: v for k, v in exc.legal_bounds.items()}
            )
        except InvariantViolation as exc:
            raise _ServiceError(500, "finding", str(exc))
        doc = {
            "round_index": report.round_index,
            "b_ball": _ball_doc(ball),
            "a_reply": _ball_doc(report.a_ball),
            "miss_kind": report.miss_kind,
            "dangers": [
                {
                    "lattice": list(d.lattice),
                    "normalized": list(d.normalized),
                    "plane": list(d.plane),
                    "chart": list(d.chart),
                    "forbidden_radius": d.forbidden_radius,
                }
                for d in report.dangers
            ],
            "window": {
                "lo": report.window_lo,
                "hi": report.window_hi,
                "count": report.window_count,
            },
            "invariant_slack": _finite(report.invariant_slack),
            "margin_so_far": _finite(game.margin_so_far(1000)),
            "finished": game.finished,
            "chart_frame": None,
        }
        if report.chart_frame is not None:
            ch = report.chart_frame
            doc["chart_frame"] = {
                "pivot": ch.pivot,
                "center_plane": list(ch.center),
                "face": {"axis": ch.face.axis, "sign": ch.face.sign},
            }
        if game.finished:
            doc["certificate"] = game.certificate()
        if sess.snapshots is not None:
            sess.snapshots.append(doc)
        return doc
    finally:
        sess.lock.release()


@app.get("/sessions/{sid}/transcript")
def get_transcript(sid: str):
    return _get(sid).game.transcript()


@app.get("/sessions/{sid}/snapshots")
def get_snapshots(sid: str):
    sess = _get(sid)
    if sess.snapshots is None:
        raise _ServiceError(404, "no-snapshots", "session was created without snapshots")
    return {"snapshots": sess.snapshots}
