"""A playable winning strategy on the zero-set board.

Two players alternate choosing nested closed Euclidean balls centered on
the board (the directions x with Q(x) = 0 and ||x||_sup = 1).  Player B
shrinks by beta, player A replies with radius alpha times B's ball --
exactly in the classic game, and as the allowed minimum in the strong
variant.  Player A's strategy steers the shrinking intersection point
away from every normalized lattice direction of {Q = m}, far enough that
the surviving point is badly approximable, and the engine checks the
claimed repulsion invariant after every reply.

The engine separates rule breaches (RuleViolation: an illegal ball, with
the legal bounds attached) from broken mathematics (InvariantViolation:
the strategy or the claimed inequalities failed, which should never
happen and aborts the game).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .forms import QuadraticForm
from .geometry import (
    Chart,
    Face,
    GeomConstants,
    GeometryError,
    chart,
    circle_surface_crossings,
    face_project,
    face_unproject,
    float_quadric,
    geom_constants,
    newton_to_face,
    pick_active_face,
    tangent_frame,
)
from .lattice import Window, core_points, equiv_key, shell_store

SURFACE_TOL = 1e-12   # |Q(center)| and | ||center||_sup - 1 | must stay below
NEST_REL_TOL = 1e-9   # slack on nesting, relative to the outer radius
RADIUS_REL_TOL = 1e-9  # slack on the radius laws


class RuleViolation(ValueError):
    """An illegal move.  ``legal_bounds`` tells the mover what would do."""

    def __init__(self, rule: str, detail: str, legal_bounds: dict | None = None):
        super().__init__(f"{rule}: {detail}")
        self.rule = rule
        self.detail = detail
        self.legal_bounds = legal_bounds or {}


class InvariantViolation(RuntimeError):
    """The engine's own mathematics failed; the game cannot continue."""


# ---------------------------------------------------------------------- #
# balls and configuration


@dataclass(frozen=True)
class Ball:
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(t) for t in self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise RuleViolation("radius", "radius must be positive")

    def dist_to(self, other: "Ball") -> float:
        return math.dist(self.center, other.center)


@dataclass(frozen=True)
class GameConfig:
    """Everything needed to reproduce a game byte for byte."""

    form: QuadraticForm
    m: Fraction
    game: str = "classic"          # or "strong"
    beta: float = 0.2
    alpha: float | None = None     # defaults to the provable winning value
    rounds: int = 30
    seed: int = 1
    b_strategy: str = "random"     # "random" | "adversarial" | "scripted"
    sup_cap: int = 10_000
    eps: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        if self.game not in ("classic", "strong"):
            raise ValueError("game must be 'classic' or 'strong'")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie strictly between 0 and 1")
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")

    @property
    def variant(self) -> str:
        return "lightcone" if self.m == 0 else "level"


@dataclass
class MoveRecord:
    owner: str
    ball: Ball
    round_index: int  # 0 for pre-window moves, then 1, 2, ...


@dataclass
class DangerPoint:
    """A normalized lattice direction too close to B's latest ball."""

    lattice: tuple[int, ...]
    normalized: tuple[float, ...]
    plane: tuple[float, ...]
    chart: tuple[float, ...]
    forbidden_radius: float


@dataclass
class MoveReport:
    """Engine output for one A reply, enough for a client to render."""

    round_index: int
    a_ball: Ball
    dangers: list[DangerPoint]
    window_lo: float
    window_hi: float
    window_count: int
    miss_kind: str           # "concentric" | "point" | "line"
    invariant_slack: float   # worst distance margin over tracked directions
    chart_frame: Chart | None


# ---------------------------------------------------------------------- #
# move validation


def validate_move(
    config: GameConfig,
    constants: GeomConstants,
    previous: Ball | None,
    ball: Ball,
    owner: str,
) -> None:
    """Check one ball against the rules; raise RuleViolation if illegal."""
    center_sup = max(abs(t) for t in ball.center)
    if abs(center_sup - 1.0) > SURFACE_TOL:
        raise RuleViolation(
            "center-off-variety",
            f"center sup norm {center_sup!r} is not 1",
            {"sup_norm": 1.0, "tolerance": SURFACE_TOL},
        )
    residual = float_quadric(config.form, ball.center)
    if abs(residual) > SURFACE_TOL:
        raise RuleViolation(
            "center-off-variety",
            f"form residual {residual!r} exceeds {SURFACE_TOL}",
            {"residual": 0.0, "tolerance": SURFACE_TOL},
        )

    if previous is None:
        if owner != "B":
            raise RuleViolation("owner", "player B opens the game")
        if ball.radius >= constants.R0:
            raise RuleViolation(
                "R0",
                f"opening radius {ball.radius!r} is not below {constants.R0!r}",
                {"max_radius": constants.R0},
            )
        return

    rate = (config.alpha if config.alpha is not None else constants.alpha) if owner == "A" else config.beta
    expected = rate * previous.radius
    if config.game == "classic" or owner == "A":
        # player A plays equality in both variants
        if owner == "A" and config.game == "strong":
            if ball.radius < expected * (1.0 - RADIUS_REL_TOL):
                raise RuleViolation(
                    "radius-law",
                    f"radius {ball.radius!r} below the strong-game minimum",
                    {"min_radius": expected, "max_radius": previous.radius},
                )
        elif abs(ball.radius - expected) > RADIUS_REL_TOL * expected:
            raise RuleViolation(
                "radius-law",
                f"radius {ball.radius!r} is not {rate} times {previous.radius!r}",
                {"min_radius": expected, "max_radius": expected},
            )
    else:  # strong game, player B: anything between beta * r and r
        if ball.radius < expected * (1.0 - RADIUS_REL_TOL):
            raise RuleViolation(
                "radius-law",
                f"radius {ball.radius!r} below the strong-game minimum",
                {"min_radius": expected, "max_radius": previous.radius},
            )

    slack = previous.radius * NEST_REL_TOL
    overhang = ball.dist_to(previous) + ball.radius - previous.radius
    if overhang > slack:
        raise RuleViolation(
            "nesting",
            f"ball sticks out of the previous one by {overhang!r}",
            {
                "max_center_offset": max(previous.radius - ball.radius, 0.0),
                "max_radius": previous.radius,
            },
        )


# ---------------------------------------------------------------------- #
# the engine


class Game:
    """State machine: feed it B balls, it answers with A balls.

    The first B ball fixes the face patch.  If a pooled small direction
    sits inside the doubled opening ball, A first plays one extra move to
    dodge it and the *next* B ball becomes the anchor; all window and
    constant bookkeeping is pinned to the anchor's radius.
    """

    def __init__(self, config: GameConfig, constants: GeomConstants | None = None):
        self.config = config
        self.constants = constants or geom_constants(
            config.form, config.m, eps=config.eps
        )
        self.alpha = config.alpha if config.alpha is not None else self.constants.alpha
        if not 0 < self.alpha <= self.constants.alpha * (1 + 1e-12):
            raise ValueError(
                f"alpha must lie in (0, {self.constants.alpha}] for this board"
            )
        self.kappa0 = self.constants.kappa0
        self._kappa0_exact = Fraction(self.kappa0)
        self.store = shell_store(config.form, config.m, config.sup_cap)
        self.moves: list[MoveRecord] = []
        self.reports: list[MoveReport] = []
        self.face: Face | None = None
        self.anchor: Ball | None = None     # the ball all windows are pinned to
        self.c_prime: float | None = None
        self.round_index = 0                # window rounds completed
        self.M: list[int] = []              # M_i per window round
        self.finished = False
        # tracked directions for the repulsion invariant
        self._active_pts = np.empty((0, config.form.dim))
        self._active_rx = np.empty((0,))
        self._active_lattice: list[tuple[int, ...]] = []
        self._core = core_points(config.form, config.m).points

    # -------------------------------------------------------------- #
    # small helpers

    def _last_ball(self) -> Ball | None:
        return self.moves[-1].ball if self.moves else None

    def _require_turn(self, owner: str):
        if self.finished:
            raise RuleViolation("owner", "the game is over")
        last = self.moves[-1].owner if self.moves else "A"
        if last == owner:
            raise RuleViolation("owner", f"it is not player {owner}'s turn")

    def _plane_of(self, point: Sequence[float]) -> tuple[float, ...]:
        projected = face_project(point, self.face)
        return newton_to_face(self.config.form, self.face, self.face.drop(projected))

    def _core_danger(self, ball: Ball):
        hits = []
        for p in self._core:
            q = tuple(t / p.sup for t in p.x)
            if math.dist(q, ball.center) <= 2.0 * ball.radius:
                hits.append(q)
        if len(hits) > 1:
            raise InvariantViolation(
                "two pooled small directions inside one doubled ball; "
                "the opening radius bound should make this impossible"
            )
        return hits[0] if hits else None

    # -------------------------------------------------------------- #
    # windows and the repulsion invariant

    def _window_for_round(self, i: int) -> Window:
        kf = self._kappa0_exact
        hi = Fraction(self.M[i - 1]) / kf
        if i == 1:
            lo_sq = 9 * abs(self.config.m) if self.config.variant == "level" else Fraction(1)
            if lo_sq > hi * hi:
                raise InvariantViolation(
                    "first window is empty: the opening ball was not small enough"
                )
            return Window(lo_sq=lo_sq, hi_sq=hi * hi, index=i)
        lo = Fraction(self.M[i - 2]) / kf
        return Window(lo_sq=lo * lo, hi_sq=hi * hi, index=i)

    def _anchor_game(self, ball: Ball):
        """Pin windows and the repulsion constant to this B ball."""
        self.anchor = ball
        self.face = pick_active_face(self.config.form, ball.center)
        a, b = self.alpha, self.config.beta
        k0 = self.kappa0
        r1 = ball.radius
        if self.config.variant == "level":
            root_m = math.sqrt(abs(float(self.config.m)))
            self.c_prime = min(
                (a * b) ** 2 / (4.0 * k0),
                (a * b) ** 2 / 4.0,
                3.0 * a * b * r1 * root_m / (4.0 * k0),
                3.0 * a * b * r1 * root_m / 4.0,
            )
            fitting = r1 / self.constants.c_pi - self.constants.c_pi * self.c_prime / (
                6.0 * root_m
            )
        else:
            self.c_prime = min(
                (a * b) ** 2 / (4.0 * k0),
                (a * b) ** 2 / 4.0,
                a * b * r1 / (4.0 * k0),
                a * b * r1 / 4.0,
            )
            fitting = r1 / self.constants.c_pi - self.constants.c_pi * self.c_prime / 2.0
        if fitting <= 7.0 * self.alpha * self.constants.c_pi * r1:
            raise InvariantViolation(
                "no fitting room: the dodging move could leave the current ball"
            )

    def _extend_active(self, window: Window):
        pts, sups, normalized = self.store.window_arrays(window)
        if len(pts) == 0:
            return 0
        rx = self.c_prime * self.constants.c_2s / (2.0 * sups.astype(float))
        self._active_pts = np.vstack([self._active_pts, normalized])
        self._active_rx = np.concatenate([self._active_rx, rx])
        self._active_lattice.extend(tuple(int(t) for t in row) for row in pts)
        return len(pts)

    def _check_invariant(self, a_ball: Ball) -> float:
        """Every tracked direction stays clear of the tripled A ball."""
        if len(self._active_rx) == 0:
            return math.inf
        dist = np.linalg.norm(self._active_pts - np.array(a_ball.center), axis=1)
        slack = dist - 3.0 * a_ball.radius - self._active_rx
        worst = int(np.argmin(slack))
        if slack[worst] < 0:
            raise InvariantViolation(
                f"direction {self._active_lattice[worst]} is inside the protected "
                f"zone of the tripled A ball (margin {slack[worst]!r})"
            )
        # prune directions that can never matter again: future A balls sit
        # inside the current one, so the tripled ball stays within one
        # extra radius of the current center
        keep = dist <= 4.0 * a_ball.radius + self._active_rx
        if not keep.all():
            self._active_pts = self._active_pts[keep]
            self._active_rx = self._active_rx[keep]
            self._active_lattice = [
                x for x, k in zip(self._active_lattice, keep) if k
            ]
        return float(slack[worst])

    def _check_c_prime_round(self, i: int, b_ball: Ball):
        a, b = self.alpha, self.config.beta
        quarter = 0.25 * a * b * b_ball.radius
        if i == 1:
            if self.config.variant == "level":
                lhs = self.c_prime / (3.0 * math.sqrt(abs(float(self.config.m))))
            else:
                lhs = self.c_prime
        else:
            lhs = self.c_prime * self.kappa0 / self.M[i - 2]
        if lhs > quarter * (1 + 1e-9):
            raise InvariantViolation(
                f"repulsion constant is too large for round {i}: {lhs!r} > {quarter!r}"
            )

    def _check_decay(self, b_ball: Ball):
        i = self.round_index + 1
        rate = self.alpha * self.config.beta if self.config.game == "classic" else self.alpha
        bound = self.anchor.radius * rate ** (i - 1)
        if b_ball.radius > bound * (1 + 1e-9):
            raise InvariantViolation(
                f"round {i} ball of radius {b_ball.radius!r} beats the decay bound {bound!r}"
            )

    # -------------------------------------------------------------- #
    # the dodging construction

    def _dodge(self, b_ball: Ball, targets_plane: list[tuple[float, ...]], kind: str) -> Ball:
        """Center an A ball on the surface, one step away from the danger.

        The step is taken in the face hyperplane along a tangent direction
        chosen against the danger point (or against the projected danger
        line), then Newton-snapped back to the patch and pulled onto the
        shell.  The step length 6 alpha c_pi rho(B) is what the fitting
        inequality budgeted for.
        """
        form, face = self.config.form, self.face
        p = self._plane_of(b_ball.center)
        normal, basis = tangent_frame(form, face, p)
        d = len(p)

        def tang(vec):
            dot = sum(a * b for a, b in zip(vec, normal))
            return [a - dot * b for a, b in zip(vec, normal)]

        if kind == "line":
            q1, q2 = targets_plane[0], targets_plane[1]
            u_line = [a - b for a, b in zip(q2, q1)]
            nrm = math.sqrt(sum(t * t for t in u_line))
            u_line = [t / nrm for t in u_line]
            u_t = tang(u_line)
            nrm = math.sqrt(sum(t * t for t in u_t))
            if nrm < 1e-9:  # the line is normal to the patch: dodge the point
                return self._dodge(b_ball, targets_plane[:1], "point")
            u_t = [t / nrm for t in u_t]
            v = None
            for b_vec in basis:
                cand = [a - sum(x * y for x, y in zip(b_vec, u_t)) * t for a, t in zip(b_vec, u_t)]
                nrm = math.sqrt(sum(t * t for t in cand))
                if nrm > 1e-8:
                    v = [t / nrm for t in cand]
                    break
            if v is None:
                raise InvariantViolation("no tangent direction clear of the danger line")
            # point v away from the plane carrying the line and the normal
            w = [a - b for a, b in zip(q1, p)]
            w = [
                a - sum(x * y for x, y in zip(w, u_line)) * ul
                for a, ul in zip(w, u_line)
            ]
            w = [a - sum(x * y for x, y in zip(w, normal)) * nn for a, nn in zip(w, normal)]
            if sum(a * b for a, b in zip(v, w)) > 0:
                v = [-t for t in v]
        else:  # point
            q = targets_plane[0]
            dq = tang([a - b for a, b in zip(q, p)])
            nrm = math.sqrt(sum(t * t for t in dq))
            if nrm < 1e-12:
                v = list(basis[0])  # danger sits on the normal line: any way works
            else:
                v = [-t / nrm for t in dq]

        delta = 6.0 * self.alpha * self.constants.c_pi * b_ball.radius
        target = [a + delta * t for a, t in zip(p, v)]
        new_plane = newton_to_face(form, face, target)
        center = face_unproject(face.embed(new_plane), face)
        if d == 2 or kind in ("point", "line"):
            # sanity: a small plane circle through the base point meets the
            # surface exactly twice, so the dodge stayed on a simple arc
            probe = v if kind != "line" else basis[0]
            hits = circle_surface_crossings(form, face, p, tuple(probe), normal, delta)
            if hits != 2:
                raise InvariantViolation(
                    f"expected the dodging circle to cross the surface twice, got {hits}"
                )
        return Ball(center=center, radius=self.alpha * b_ball.radius)

    # -------------------------------------------------------------- #
    # turns

    def submit_B(self, ball: Ball) -> MoveReport:
        """Validate a B move and produce A's reply with its paperwork."""
        self._require_turn("B")
        validate_move(self.config, self.constants, self._last_ball(), ball, "B")

        if self.anchor is None and self.face is None:
            # very first ball: fix a face, maybe dodge a pooled direction
            self.face = pick_active_face(self.config.form, ball.center)
            q0 = self._core_danger(ball)
            if q0 is not None:
                self.moves.append(MoveRecord("B", ball, 0))
                a_ball = self._dodge(ball, [self._plane_of(q0)], "point")
                try:
                    validate_move(self.config, self.constants, ball, a_ball, "A")
                except RuleViolation as exc:
                    raise InvariantViolation(f"the dodging move broke a rule: {exc}")
                if math.dist(a_ball.center, q0) <= 3.0 * a_ball.radius:
                    raise InvariantViolation("the dodge failed to clear the small direction")
                self.moves.append(MoveRecord("A", a_ball, 0))
                report = MoveReport(
                    round_index=0,
                    a_ball=a_ball,
                    dangers=[self._danger_entry(q0, None, ball)],
                    window_lo=0.0,
                    window_hi=0.0,
                    window_count=0,
                    miss_kind="point",
                    invariant_slack=math.inf,
                    chart_frame=self._chart_at(ball),
                )
                self.reports.append(report)
                return report

        if self.anchor is None:
            self._anchor_game(ball)
            if self._core_danger(ball) is not None:
                raise InvariantViolation(
                    "a pooled small direction survived the opening dodge"
                )

        i = self.round_index + 1
        self._check_decay(ball)
        self.M.append(math.ceil(1 / Fraction(ball.radius)))
        window = self._window_for_round(i)
        self._check_c_prime_round(i, ball)
        self.moves.append(MoveRecord("B", ball, i))
        count = self._extend_active(window)

        # danger scan: normalized window directions inside the doubled ball
        pts, sups, normalized = self.store.window_arrays(window)
        dangers: list[DangerPoint] = []
        danger_exact: dict[tuple, tuple[int, ...]] = {}
        if len(pts):
            dist = np.linalg.norm(normalized - np.array(ball.center), axis=1)
            for idx in np.nonzero(dist <= 2.0 * ball.radius)[0]:
                lattice = tuple(int(t) for t in pts[idx])
                exact = tuple(Fraction(t, int(sups[idx])) for t in lattice)
                danger_exact.setdefault(exact, lattice)

        if not danger_exact:
            a_ball = Ball(center=ball.center, radius=self.alpha * ball.radius)
            miss_kind = "concentric"
        else:
            items = sorted(danger_exact.items())
            if self.config.variant == "lightcone":
                if len(items) > 1:
                    raise InvariantViolation(
                        "two distinct directions inside one doubled ball on the zero set"
                    )
            else:
                keys = {equiv_key(self.config.form, lat, "block") for _, lat in items}
                if len(keys) > 1:
                    raise InvariantViolation(
                        "block-inequivalent directions inside one doubled ball"
                    )
            points_f = [tuple(float(c) for c in exact) for exact, _ in items]
            planes = [self._plane_of(q) for q in points_f]
            if len(planes) == 1:
                a_ball = self._dodge(ball, planes, "point")
                miss_kind = "point"
            else:
                if self.config.form.d == 2:
                    raise InvariantViolation(
                        "a planar board cannot hold two equivalent directions this close"
                    )
                a_ball = self._dodge(ball, planes, "line")
                miss_kind = "line"
            for q, (_, lat) in zip(points_f, items):
                dangers.append(self._danger_entry(q, lat, ball))

        try:
            validate_move(self.config, self.constants, ball, a_ball, "A")
        except RuleViolation as exc:
            raise InvariantViolation(f"the reply move broke a rule: {exc}")
        self.moves.append(MoveRecord("A", a_ball, i))
        slack = self._check_invariant(a_ball)
        self.round_index = i
        if i >= self.config.rounds:
            self.finished = True

        report = MoveReport(
            round_index=i,
            a_ball=a_ball,
            dangers=dangers,
            window_lo=window.lo,
            window_hi=window.hi,
            window_count=count,
            miss_kind=miss_kind,
            invariant_slack=slack,
            chart_frame=self._chart_at(ball),
        )
        self.reports.append(report)
        return report

    def _chart_at(self, ball: Ball) -> Chart | None:
        try:
            return chart(self.config.form, self.face, self._plane_of(ball.center))
        except GeometryError:
            return None

    def _danger_entry(self, q: tuple[float, ...], lattice, b_ball: Ball) -> DangerPoint:
        plane = self._plane_of(q)
        ch = self._chart_at(b_ball)
        chart_coords = ch.forward(plane) if ch is not None else ()
        sup = max(abs(t) for t in lattice) if lattice else 1
        rx = (
            self.c_prime * self.constants.c_2s / (2.0 * sup)
            if self.c_prime is not None and lattice
            else 0.0
        )
        return DangerPoint(
            lattice=tuple(lattice) if lattice else (),
            normalized=q,
            plane=plane,
            chart=tuple(chart_coords),
            forbidden_radius=rx,
        )

    # -------------------------------------------------------------- #
    # results

    def last_a_center(self) -> tuple[float, ...]:
        for rec in reversed(self.moves):
            if rec.owner == "A":
                return rec.ball.center
        raise InvariantViolation("no A move was played")

    def margin_so_far(self, sup_limit: int = 1000) -> float:
        """Worst normalized sup-distance to v, weighted by the sup norm.

        This is the quantity the certificate bounds from below, restricted
        to lattice points with sup norm up to the limit.
        """
        sup_limit = min(sup_limit, self.config.sup_cap)
        q2_sum = sum(self.config.form.numerators[self.config.form.k:])
        self.store.ensure(q2_sum * sup_limit * sup_limit)
        mask = self.store.sup <= sup_limit
        if not mask.any():
            return math.inf
        v = np.array(self.last_a_center())
        dist = np.abs(self.store.normalized[mask] - v).max(axis=1)
        return float((dist * self.store.sup[mask]).min())

    def certificate(self) -> dict:
        """The repulsion constant the finished game certifies for its point."""
        v = self.last_a_center()
        c = self.c_prime * self.constants.c_2s * self.constants.c_2s_prime / 2.0
        # pooled small directions are excluded from the windows, so their
        # own approximation quality caps the certified constant directly
        for p in self._core:
            margin = max(abs(t / p.sup - v_i) for t, v_i in zip(p.x, v)) * p.sup
            c = min(c, margin)
        return {
            "v": list(v),
            "c": c,
            "rounds": self.round_index,
        }

    def transcript(self) -> dict:
        cfg = self.config
        return {
            "config": {
                "form": cfg.form.label(),
                "m": f"{cfg.m.numerator}/{cfg.m.denominator}",
                "variant": cfg.variant,
                "game": cfg.game,
                "alpha": self.alpha,
                "beta": cfg.beta,
                "rounds": cfg.rounds,
                "seed": cfg.seed,
                "b_strategy": cfg.b_strategy,
                "sup_cap": cfg.sup_cap,
            },
            "moves": [
                {
                    "owner": rec.owner,
                    "center": list(rec.ball.center),
                    "radius": rec.ball.radius,
                }
                for rec in self.moves
            ],
            "certificate": self.certificate() if self.c_prime is not None else None,
        }

    def transcript_json(self) -> str:
        return json.dumps(self.transcript(), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------- #
# player B strategies


def _random_surface_ball(game: Game, rng: random.Random, radius: float) -> Ball:
    """A legal opening ball on a patch, away from the face boundary."""
    from .geometry import sample_board_points

    center = sample_board_points(game.config.form, 1, rng)[0]
    return Ball(center=center, radius=radius)


def _shifted_ball(
    game: Game,
    rng: random.Random,
    prev: Ball,
    radius: float,
    direction_plane: Sequence[float] | None,
    fraction: float,
) -> Ball:
    """Move the center inside the previous ball, staying on the surface."""
    form, face = game.config.form, game.face
    try:
        p = game._plane_of(prev.center)
        _, basis = tangent_frame(form, face, p)
    except GeometryError:
        return Ball(center=prev.center, radius=radius)
    if direction_plane is None:
        coeffs = [rng.gauss(0.0, 1.0) for _ in basis]
        nrm = math.sqrt(sum(t * t for t in coeffs)) or 1.0
        direction = [
            sum(c * b[i] for c, b in zip(coeffs, basis)) / nrm
            for i in range(len(p))
        ]
    else:
        direction = list(direction_plane)
        nrm = math.sqrt(sum(t * t for t in direction))
        if nrm < 1e-12:
            return Ball(center=prev.center, radius=radius)
        direction = [t / nrm for t in direction]
    budget = (prev.radius - radius) * fraction / game.constants.c_pi
    step = budget
    for _ in range(12):
        try:
            plane = newton_to_face(form, face, [a + step * t for a, t in zip(p, direction)])
            center = face_unproject(face.embed(plane), face)
        except GeometryError:
            step *= 0.5
            continue
        cand = Ball(center=center, radius=radius)
        if cand.dist_to(prev) + radius <= prev.radius:
            return cand
        step *= 0.5
    return Ball(center=prev.center, radius=radius)


def strategy_B(kind: str, seed: int = 1, script: Sequence[Ball] | None = None) -> Callable:
    """Build a B player: random wanderer, lattice chaser, or scripted."""
    if kind == "scripted":
        if not script:
            raise ValueError("a scripted player needs its script")
        queue = list(script)

        def scripted(game: Game) -> Ball:
            if not queue:
                raise RuleViolation("owner", "the script ran out of moves")
            return queue.pop(0)

        return scripted

    rng = random.Random(seed)

    def choose_radius(game: Game, prev: Ball | None) -> float:
        if prev is None:
            return rng.uniform(0.3, 0.8) * game.constants.R0
        if game.config.game == "strong" and rng.random() < 0.5:
            return rng.uniform(game.config.beta, 0.9) * prev.radius
        return game.config.beta * prev.radius

    if kind == "random":

        def player(game: Game) -> Ball:
            prev = game._last_ball()
            radius = choose_radius(game, prev)
            if prev is None:
                return _random_surface_ball(game, rng, radius)
            return _shifted_ball(game, rng, prev, radius, None, rng.uniform(0.2, 0.9))

        return player

    if kind == "adversarial":

        def opening(game: Game, radius: float) -> Ball:
            # open right on top of a lattice direction (snapped to the
            # board when the level set is off it) to force a dodge early
            from .geometry import project_to_variety

            q2_sum = sum(game.config.form.numerators[game.config.form.k:])
            game.store.ensure(q2_sum * 60 * 60)
            mask = game.store.sup <= 60
            rows = game.store.normalized[mask]
            if len(rows) == 0:
                return _random_surface_ball(game, rng, radius)
            for _ in range(40):
                target = rows[rng.randrange(len(rows))]
                try:
                    center = project_to_variety(game.config.form, tuple(target))
                except GeometryError:
                    continue
                return Ball(center=center, radius=radius)
            return _random_surface_ball(game, rng, radius)

        def player(game: Game) -> Ball:
            prev = game._last_ball()
            radius = choose_radius(game, prev)
            if prev is None:
                return opening(game, radius)
            # chase the nearest tracked lattice direction to pin A against it
            target = None
            if len(game._active_rx):
                dist = np.linalg.norm(
                    game._active_pts - np.array(prev.center), axis=1
                )
                target = game._active_pts[int(np.argmin(dist))]
            if target is None:
                return _shifted_ball(game, rng, prev, radius, None, 0.9)
            try:
                p = game._plane_of(prev.center)
                q = game._plane_of(tuple(target))
                direction = [a - b for a, b in zip(q, p)]
            except GeometryError:
                direction = None
            return _shifted_ball(game, rng, prev, radius, direction, 0.9)

        return player

    raise ValueError(f"unknown B strategy {kind!r}")


# ---------------------------------------------------------------------- #
# driving a full game


def run_game(config: GameConfig, constants: GeomConstants | None = None) -> Game:
    """Play a complete game: the configured B player against the engine."""
    game = Game(config, constants=constants)
    player = strategy_B(config.b_strategy, seed=config.seed)
    while not game.finished:
        game.submit_B(player(game))
    return game
