"""Record service fixtures for the frontend contract tests.

Runs the real game service in-process and captures raw request/response
pairs exactly as a browser would see them.  Re-run after any service
change, then re-run the frontend tests:

    python3 scripts/record_fixtures.py
    npx vitest run
"""

from __future__ import annotations

import json
import pathlib

from fastapi.testclient import TestClient

from quadgame.service import app

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def dump(name: str, payload) -> None:
    path = OUT / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def call(client: TestClient, method: str, url: str, body=None) -> dict:
    resp = client.post(url, json=body) if method == "POST" else client.get(url)
    return {
        "request": {"method": method, "url": url, "body": body},
        "status": resp.status_code,
        "body": resp.json(),
    }


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(app)

    # -- a short game on the zero-set board, opened right on a lattice
    # direction so the reply has to dodge (danger points in round 1)
    session = call(client, "POST", "/sessions", {"form": "1,1,-1", "m": "0", "rounds": 4})
    sid = session["body"]["id"]
    r0 = session["body"]["constants"]["R0"]
    beta = session["body"]["config"]["beta"]
    dump("session_lightcone.json", session)

    moves = []
    move = call(client, "POST", f"/sessions/{sid}/move",
                {"center": [0.6, 0.8, 1.0], "radius": 0.9 * r0})
    moves.append(move)
    for _ in range(3):
        reply = move["body"]["a_reply"]
        move = call(client, "POST", f"/sessions/{sid}/move",
                    {"center": reply["center"], "radius": beta * reply["radius"]})
        moves.append(move)
    assert move["body"]["finished"], "fixture game should finish in 4 rounds"
    dump("game_lightcone.json", {"session": session["body"], "moves": moves})
    dump("transcript_lightcone.json",
         call(client, "GET", f"/sessions/{sid}/transcript"))

    # -- a level board with its transcript, for the replay viewer
    session2 = call(client, "POST", "/sessions", {"form": "1,1,-1", "m": "1", "rounds": 3})
    sid2 = session2["body"]["id"]
    opening = session2["body"]["suggested_opening"]
    dump("session_level.json", session2)
    move = call(client, "POST", f"/sessions/{sid2}/move",
                {"center": opening["center"], "radius": opening["radius"]})
    for _ in range(2):
        reply = move["body"]["a_reply"]
        move = call(client, "POST", f"/sessions/{sid2}/move",
                    {"center": reply["center"], "radius": beta * reply["radius"]})
    dump("transcript_level.json", call(client, "GET", f"/sessions/{sid2}/transcript"))

    # -- every rejection shape the UI has to render
    errors = {}

    fresh = call(client, "POST", "/sessions", {"form": "1,1,-1", "m": "0"})
    fid = fresh["body"]["id"]
    errors["opening_radius"] = call(
        client, "POST", f"/sessions/{fid}/move",
        {"center": [0.6, 0.8, 1.0], "radius": 2.0 * r0})
    ok = call(client, "POST", f"/sessions/{fid}/move",
              {"center": [0.6, 0.8, 1.0], "radius": 0.5 * r0})
    reply = ok["body"]["a_reply"]
    errors["nesting"] = call(
        client, "POST", f"/sessions/{fid}/move",
        {"center": [-0.6, 0.8, 1.0], "radius": beta * reply["radius"]})
    errors["radius_law"] = call(
        client, "POST", f"/sessions/{fid}/move",
        {"center": reply["center"], "radius": 3.0 * beta * reply["radius"]})
    errors["wrong_length"] = call(
        client, "POST", f"/sessions/{fid}/move",
        {"center": [0.6, 0.8], "radius": 0.5 * r0})
    errors["bad_form"] = call(client, "POST", "/sessions", {"form": "1,-1", "m": "0"})
    errors["bad_beta"] = call(client, "POST", "/sessions",
                              {"form": "1,1,-1", "m": "0", "beta": 1.5})
    errors["unknown_session"] = call(client, "GET", "/sessions/nope")
    dump("errors.json", errors)


if __name__ == "__main__":
    main()
