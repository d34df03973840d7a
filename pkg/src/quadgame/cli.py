"""Command line front end.

Data goes to stdout (JSON lines for point streams, one JSON document for
reports, the raw transcript for games) and is byte-identical across runs
with the same arguments.  A run manifest -- command, parsed configuration,
seed, version, wall time -- goes to stderr as a single JSON line.

Exit codes: 0 success, 2 usage errors, 3 an enumeration that would blow
the budget, 4 a finding (a claimed inequality failed on real data).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .badness import full_lattice_escape, margin_profile
from .forms import QuadraticForm, diagonalize, parse_form
from .game import Ball, Game, GameConfig, InvariantViolation, run_game
from .geometry import geom_constants
from .lattice import EnumerationBudgetError, Window, enumerate_window, point_json
from .separation import check_component_separation, check_separation, write_separation_csv

EXIT_OK = 0
EXIT_BUDGET = 3
EXIT_FINDING = 4


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None
    version: str
    wall_time_s: float


def _form_from_args(args) -> QuadraticForm:
    if getattr(args, "matrix", None):
        rows = json.loads(args.matrix)
        return diagonalize(rows)
    return parse_form(args.form)


def _manifest(args, t0: float) -> None:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "command"):
            continue
        if isinstance(value, Fraction):
            value = f"{value.numerator}/{value.denominator}"
        config[key] = value
    manifest = RunManifest(
        command=args.command,
        config=config,
        seed=getattr(args, "seed", None),
        version=__version__,
        wall_time_s=round(time.monotonic() - t0, 6),
    )
    print(json.dumps(asdict(manifest), sort_keys=True), file=sys.stderr)


# ---------------------------------------------------------------------- #
# subcommands


def cmd_enumerate(args) -> int:
    form = _form_from_args(args)
    window = Window(
        lo_sq=args.lo * args.lo,
        hi_sq=args.hi * args.hi,
        lo_open=args.open_lo,
        hi_open=args.open_hi,
    )
    points = enumerate_window(form, args.m, window, sup_cap=args.sup_cap, budget=args.budget)
    out = sys.stdout
    for p in points:
        out.write(json.dumps(point_json(p), sort_keys=True))
        out.write("\n")
    return EXIT_OK


def cmd_constants(args) -> int:
    form = _form_from_args(args)
    consts = geom_constants(form, args.m, eps=args.eps)
    doc = {
        "form": form.label(),
        "m": f"{Fraction(args.m).numerator}/{Fraction(args.m).denominator}",
        "variant": consts.variant,
        "kappa0": consts.kappa0,
        "alpha": consts.alpha,
        "R0": consts.R0,
        "R0_binding": consts.R0_binding,
        "report": consts.report,
    }
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def _jsonable(obj):
    """Rationals as "p/q" strings, containers walked recursively."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _separation_doc(rep) -> dict:
    return _jsonable(asdict(rep))


def cmd_separation(args) -> int:
    form = _form_from_args(args)
    reports = []
    for kind, checker in (
        ("direction", check_separation),
        ("component", check_component_separation),
    ):
        if args.kind in (kind, "both"):
            reports.append(checker(form, args.m, args.K, pair_cap=args.pair_cap))
    if args.csv:
        with open(args.csv, "w") as fh:
            write_separation_csv(reports, fh)
    print(json.dumps([_separation_doc(r) for r in reports], sort_keys=True))
    bad = [r for r in reports if r.ratio is not None and r.ratio < 1.0]
    if bad:
        for r in bad:
            print(
                f"finding: {r.kind} separation ratio {r.ratio} below 1 at K={r.K}",
                file=sys.stderr,
            )
        return EXIT_FINDING
    return EXIT_OK


def cmd_play(args) -> int:
    form = _form_from_args(args)
    config = GameConfig(
        form=form,
        m=args.m,
        game=args.game,
        beta=args.beta,
        rounds=args.rounds,
        seed=args.seed,
        b_strategy=args.b_strategy,
        sup_cap=args.sup_cap,
    )
    game = run_game(config)
    text = game.transcript_json()
    print(text)
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(text)
            fh.write("\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.transcript) as fh:
        data = json.load(fh)
    cfg = data["config"]
    config = GameConfig(
        form=parse_form(cfg["form"]),
        m=Fraction(cfg["m"]),
        game=cfg["game"],
        beta=cfg["beta"],
        alpha=cfg["alpha"],
        rounds=cfg["rounds"],
        seed=cfg["seed"],
        b_strategy=cfg["b_strategy"],
        sup_cap=cfg["sup_cap"],
    )
    game = Game(config)
    for move in data["moves"]:
        if move["owner"] == "B":
            game.submit_B(Ball(center=tuple(move["center"]), radius=move["radius"]))
    replayed = json.loads(game.transcript_json())
    same = replayed == data
    verdict = {
        "replay_matches": same,
        "rounds": game.round_index,
        "certificate": game.certificate() if game.c_prime is not None else None,
    }
    if args.margin_limit and game.c_prime is not None:
        cert = verdict["certificate"]
        profile = margin_profile(
            config.form, config.m, cert["v"], limits=sorted({100, args.margin_limit})
        )
        verdict["margins"] = [[p.sup_limit, p.margin] for p in profile]
        verdict["margin_ok"] = all(p.margin >= cert["c"] for p in profile)
    print(json.dumps(verdict, sort_keys=True))
    if not same or not verdict.get("margin_ok", True):
        print("finding: transcript does not replay cleanly", file=sys.stderr)
        return EXIT_FINDING
    return EXIT_OK


def cmd_escape(args) -> int:
    v = []
    for c in args.vector.split(","):
        try:
            v.append(Fraction(c))
        except ValueError:
            v.append(float(c))
    rep = full_lattice_escape(v, args.eps, args.n_max)
    print(json.dumps(asdict(rep), sort_keys=True))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------- #
# parser


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _add_form_args(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--form", help="diagonal coefficients, e.g. 1,1,-1")
    group.add_argument("--matrix", help="symmetric matrix as JSON rows")
    sub.add_argument("--m", type=_fraction, default=Fraction(0), help="level (fraction)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadgame",
        description="integer points, repulsion checks, and games on quadric boards",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("enumerate", help="stream lattice points of a norm window")
    _add_form_args(p)
    p.add_argument("--lo", type=_fraction, required=True, help="lower norm bound")
    p.add_argument("--hi", type=_fraction, required=True, help="upper norm bound")
    p.add_argument("--open-lo", action="store_true", help="exclude the lower bound")
    p.add_argument("--open-hi", action="store_true", help="exclude the upper bound")
    p.add_argument("--sup-cap", type=int, default=None)
    p.add_argument("--budget", type=int, default=20_000_000)
    p.set_defaults(func=cmd_enumerate)

    p = subs.add_parser("constants", help="geometric constants of a board")
    _add_form_args(p)
    p.add_argument("--eps", type=float, default=1e-3)
    p.set_defaults(func=cmd_constants)

    p = subs.add_parser("separation", help="repulsion checks across a norm range")
    _add_form_args(p)
    p.add_argument("--K", type=_fraction, required=True, help="upper norm bound")
    p.add_argument("--kind", choices=["direction", "component", "both"], default="both")
    p.add_argument("--pair-cap", type=int, default=100_000)
    p.add_argument("--csv", help="also write a CSV summary here")
    p.set_defaults(func=cmd_separation)

    p = subs.add_parser("play", help="play a full game and print the transcript")
    _add_form_args(p)
    p.add_argument("--game", choices=["classic", "strong"], default="classic")
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--rounds", type=int, default=30)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--b-strategy", choices=["random", "adversarial"], default="random")
    p.add_argument("--sup-cap", type=int, default=10_000)
    p.add_argument("--transcript", help="also write the transcript here")
    p.set_defaults(func=cmd_play)

    p = subs.add_parser("verify", help="replay a transcript and check its certificate")
    p.add_argument("--transcript", required=True)
    p.add_argument("--margin-limit", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("escape", help="first multiple of v near the integer lattice")
    p.add_argument("--vector", required=True, help="comma separated, fractions allowed")
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--n-max", type=int, default=10**6)
    p.set_defaults(func=cmd_escape)

    p = subs.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        code = args.func(args)
    except EnumerationBudgetError as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"finding: {exc}", file=sys.stderr)
        return EXIT_FINDING
    _manifest(args, t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
