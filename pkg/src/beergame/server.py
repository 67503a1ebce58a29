"""Live game service: sessions mixing human seats and bot seats.

The server is a thin driver over the simulator.  A period advances only when
every human seat has submitted; bot orders are computed server-side at advance
time.  While a game is running each seat can fetch only its own local view;
the full cost breakdown and trace are released when the game finishes.

All payloads are versioned JSON; events are sequence-numbered and can be
consumed either as a server-sent-event stream or by polling.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import replace

import numpy as np
from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import StreamingResponse

from . import __version__
from .env import ROLES, BeerGame, FixedHorizon
from .scenarios import PRESETS, PolicySpec, load_scenario, make_policy, scenario_from_dict

PROTOCOL_VERSION = 1

BOT_KINDS = ("basestock", "sterman", "random", "dqn")


class Seat:
    def __init__(self, role: str, index: int, spec: dict):
        self.role = role
        self.index = index
        self.kind = spec["type"]
        self.spec = spec
        self.token = secrets.token_urlsafe(16)
        self.policy = None  # bots only
        self.pending_order: int | None = None
        self.cumulative_cost = 0.0

    @property
    def is_human(self) -> bool:
        return self.kind == "human"


class Session:
    def __init__(self, scenario, seats: list[Seat], seed: int, periods: int, shot_clock=None):
        self.id = secrets.token_urlsafe(8)
        self.scenario = scenario
        self.seats = seats
        self.seed = int(seed)
        self.periods = int(periods)
        self.shot_clock = shot_clock
        self.status = "lobby"
        self.game: BeerGame | None = None
        self.trace: list[dict] = []
        self.events: list[dict] = []
        self.lock = threading.RLock()
        self.deadline = None

    def emit(self, kind: str, **payload):
        self.events.append({"seq": len(self.events), "type": kind, **payload})

    def seat_by_token(self, token: str) -> Seat:
        for seat in self.seats:
            if secrets.compare_digest(seat.token, token):
                return seat
        raise HTTPException(403, "unknown token")

    # -- lifecycle -----------------------------------------------------------

    def start(self):
        with self.lock:
            if self.status != "lobby":
                raise HTTPException(409, "session already started")
            cfg = replace(self.scenario.config, horizon=FixedHorizon(self.periods))
            # seeded exactly like the harness trace runner so all-bot sessions
            # reproduce harness trajectories bit for bit
            self.game = BeerGame(cfg, seed=np.random.SeedSequence(self.seed))
            for seat in self.seats:
                if not seat.is_human:
                    spec = PolicySpec(
                        kind=seat.kind,
                        s=seat.spec.get("s"),
                        weights=seat.spec.get("weights"),
                        m=seat.spec.get("m"),
                    )
                    seat.policy = make_policy(spec, self.scenario, seat.index, seed=self.seed + 101 * seat.index)
            self.status = "in_play"
            self.emit("started")
            self._arm_clock()
            if all(not s.is_human for s in self.seats):
                while self.status == "in_play":
                    self._advance()

    def _arm_clock(self):
        if self.shot_clock:
            self.deadline = time.monotonic() + self.shot_clock

    def submit(self, seat: Seat, order: int):
        with self.lock:
            if self.status != "in_play":
                raise HTTPException(409, f"session is {self.status}")
            if not seat.is_human:
                raise HTTPException(403, "bot seats do not submit")
            if seat.pending_order is not None:
                raise HTTPException(409, "already submitted this period")
            if order < 0:
                raise HTTPException(400, "order must be a non-negative integer")
            seat.pending_order = int(order)
            if all(s.pending_order is not None for s in self.seats if s.is_human):
                self._advance()

    def force_advance(self):
        """Shot clock expiry: unsubmitted humans order their received demand."""
        with self.lock:
            if self.status != "in_play":
                return
            for seat in self.seats:
                if seat.is_human and seat.pending_order is None:
                    seat.pending_order = self.game.local_view(seat.index).arriving_order
            self._advance()

    def _advance(self):
        game = self.game
        t = game.t
        views = [
            game.local_view(s.index, m=getattr(s.policy, "window", 0) or None)
            for s in self.seats
        ]
        orders = []
        for seat, view in zip(self.seats, views):
            orders.append(seat.pending_order if seat.is_human else seat.policy.act(view))
        out = game.step(orders)
        for seat, view in zip(self.seats, views):
            i = seat.index
            seat.cumulative_cost += out.costs[i]
            seat.pending_order = None
            self.trace.append(
                {
                    "period": t,
                    "agent": i,
                    "role": seat.role,
                    "IL": out.il[i],
                    "OO": out.oo[i],
                    "a": orders[i],
                    "r": out.costs[i],
                    "OUTL": (view.il - view.arriving_order) + view.oo + orders[i],
                }
            )
        if out.terminal:
            self.status = "finished"
            self.emit("finished", period=game.t)
        else:
            self.emit("period_advanced", period=game.t)
            self._arm_clock()

    # -- views ----------------------------------------------------------------

    def seat_state(self, seat: Seat) -> dict:
        with self.lock:
            base = {
                "v": PROTOCOL_VERSION,
                "session": self.id,
                "status": self.status,
                "role": seat.role,
                "agent": seat.index,
                "scenario": self.scenario.name,
            }
            if self.status == "lobby":
                return base
            game = self.game
            view = game.local_view(seat.index)
            base.update(
                {
                    "period": game.t,
                    "submitted": seat.pending_order is not None,
                    "cumulative_cost": round(seat.cumulative_cost, 6),
                    "seat": {
                        "inventory_level": view.il,
                        "on_order": view.oo,
                        "arriving_order": view.arriving_order,
                        "arriving_shipment": view.arriving_shipment,
                        "history": [list(row) for row in game.history[seat.index]],
                    },
                }
            )
            if self.status == "finished":
                per_agent = [round(s.cumulative_cost, 6) for s in sorted(self.seats, key=lambda s: s.index)]
                base["reveal"] = {
                    "per_agent_costs": per_agent,
                    "roles": [s.role for s in sorted(self.seats, key=lambda s: s.index)],
                    "total_cost": round(sum(per_agent), 6),
                    "periods": self.periods,
                    "trace": self.trace,
                }
            return base


app = FastAPI(title="beergame server", version=__version__)
SESSIONS: dict[str, Session] = {}


def _session(sid: str) -> Session:
    try:
        return SESSIONS[sid]
    except KeyError:
        raise HTTPException(404, "no such session") from None


@app.get("/v1/presets")
def list_presets():
    return {
        "v": PROTOCOL_VERSION,
        "presets": [
            {"name": name, "roles": list(ROLES), "description": PRESETS[name]().description}
            for name in PRESETS
        ],
    }


@app.post("/v1/sessions", status_code=201)
def create_session(body: dict = Body(...)):
    scenario_ref = body.get("scenario", "basic")
    if isinstance(scenario_ref, dict):
        scenario = scenario_from_dict(scenario_ref)
    else:
        try:
            scenario = load_scenario(scenario_ref)
        except (KeyError, FileNotFoundError):
            raise HTTPException(400, f"unknown scenario {scenario_ref!r}") from None
    seats_plan = body.get("seats")
    if not isinstance(seats_plan, list) or len(seats_plan) != len(ROLES):
        raise HTTPException(400, f"seat plan must list exactly {len(ROLES)} seats")
    seen = set()
    seats = []
    for entry in seats_plan:
        role = entry.get("role")
        if role not in ROLES:
            raise HTTPException(400, f"unknown role {role!r}")
        if role in seen:
            raise HTTPException(400, f"duplicate role {role!r}")
        seen.add(role)
        kind = entry.get("type")
        if kind != "human" and kind not in BOT_KINDS:
            raise HTTPException(400, f"unknown seat type {kind!r}")
        if kind == "dqn":
            weights = entry.get("weights")
            if not weights:
                raise HTTPException(400, "dqn seat needs a weight file")
            try:
                open(weights, "rb").close()
            except OSError:
                raise HTTPException(400, f"cannot read weights {weights!r}") from None
        seats.append(Seat(role, ROLES.index(role), entry))
    seats.sort(key=lambda s: s.index)
    session = Session(
        scenario,
        seats,
        seed=int(body.get("seed", 0)),
        periods=int(body.get("periods", 100)),
        shot_clock=body.get("shot_clock"),
    )
    SESSIONS[session.id] = session
    return {
        "v": PROTOCOL_VERSION,
        "session": session.id,
        "scenario": scenario.name,
        "tokens": {seat.role: seat.token for seat in seats},
        "status": session.status,
    }


@app.post("/v1/sessions/{sid}/start")
def start_session(sid: str):
    session = _session(sid)
    session.start()
    if session.shot_clock:
        threading.Thread(target=_clock_loop, args=(session,), daemon=True).start()
    return {"v": PROTOCOL_VERSION, "session": sid, "status": session.status}


def _clock_loop(session: Session):
    while session.status == "in_play":
        deadline = session.deadline
        if deadline is None:
            return
        now = time.monotonic()
        if now >= deadline:
            session.force_advance()
        else:
            time.sleep(min(0.05, deadline - now))


@app.get("/v1/seats/{token}")
def join_seat(token: str):
    """Join flow: resolve a seat token without knowing the session id."""
    for session in SESSIONS.values():
        for seat in session.seats:
            if secrets.compare_digest(seat.token, token):
                return session.seat_state(seat)
    raise HTTPException(403, "unknown token")


@app.get("/v1/sessions/{sid}/state")
def get_state(sid: str, token: str = Query(...)):
    session = _session(sid)
    return session.seat_state(session.seat_by_token(token))


@app.post("/v1/sessions/{sid}/orders")
def submit_order(sid: str, body: dict = Body(...)):
    session = _session(sid)
    seat = session.seat_by_token(str(body.get("token", "")))
    order = body.get("order")
    if not isinstance(order, int) or isinstance(order, bool):
        raise HTTPException(400, "order must be a non-negative integer")
    session.submit(seat, order)
    return {
        "v": PROTOCOL_VERSION,
        "accepted": True,
        "period": session.game.t,
        "status": session.status,
    }


@app.get("/v1/sessions/{sid}/events/poll")
def poll_events(sid: str, token: str = Query(...), after: int = Query(-1)):
    session = _session(sid)
    session.seat_by_token(token)
    with session.lock:
        events = [e for e in session.events if e["seq"] > after]
    return {"v": PROTOCOL_VERSION, "events": events, "status": session.status}


@app.get("/v1/sessions/{sid}/events")
def event_stream(sid: str, token: str = Query(...), after: int = Query(-1)):
    session = _session(sid)
    session.seat_by_token(token)

    def stream():
        cursor = after
        while True:
            with session.lock:
                pending = [e for e in session.events if e["seq"] > cursor]
                status = session.status
            for event in pending:
                cursor = event["seq"]
                yield f"data: {json.dumps(event)}\n\n"
            if status == "finished":
                return
            time.sleep(0.05)

    return StreamingResponse(stream(), media_type="text/event-stream")


@app.get("/v1/sessions/{sid}/trace")
def download_trace(sid: str, token: str = Query(...)):
    session = _session(sid)
    session.seat_by_token(token)
    if session.status != "finished":
        raise HTTPException(409, "trace is released when the game finishes")
    return {"v": PROTOCOL_VERSION, "trace": session.trace}


def _mount_frontend():
    """Serve the browser client when a built frontend/ is around."""
    import os
    from pathlib import Path

    candidates = [os.environ.get("BEERGAME_FRONTEND")]
    here = Path(__file__).resolve()
    for parent in here.parents[:4]:
        candidates.append(parent / "frontend")
    for cand in candidates:
        if not cand:
            continue
        cand = Path(cand)
        if (cand / "index.html").exists() and (cand / "dist").is_dir():
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=cand, html=True), name="frontend")
            return


_mount_frontend()
