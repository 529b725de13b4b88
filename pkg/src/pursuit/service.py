"""Live session service: one game, one external evader, over TCP.

Wire format: newline-delimited UTF-8 JSON objects, each tagged with a
protocol version ``v``.  The server owns the authoritative game state and
clamps every incoming action to the disturbance box before use, so a
client can never exceed the evader's input limit.

Message kinds
  server -> client: Hello, StateUpdate (exactly one per tick), End, Error
  client -> server: Action {ux, uy}, Reset {scenario}

Timing: with a positive tick rate the server advances on a fixed deadline,
applying the latest action received in the window (zero when idle).  With
``tick_rate=0`` the server runs in lockstep -- it waits for exactly one
Action per tick -- which makes sessions fully deterministic and is what
the scripted-replay tests use.  On disconnect the game pauses until a new
client arrives; the session resumes from the same state.

The schema is documented in docs/protocol.md.
"""
from __future__ import annotations

import json
import logging
import queue
import socket
import threading
import time

import numpy as np

from . import policies as _pol
from .scenario import ScenarioError, load_scenario
from .sim import Game, ScenarioConfig

log = logging.getLogger("pursuit.service")

PROTOCOL_VERSION = 1


class ProtocolError(Exception):
    pass


def encode_message(msg: dict) -> bytes:
    """One message -> one JSON line.  Adds the version tag."""
    out = dict(msg)
    out.setdefault("v", PROTOCOL_VERSION)
    if "kind" not in out:
        raise ProtocolError("message needs a 'kind'")
    return (json.dumps(out) + "\n").encode("utf-8")


def decode_message(line: bytes | str) -> dict:
    """One JSON line -> message dict; rejects unknown versions and junk."""
    if isinstance(line, bytes):
        line = line.decode("utf-8", errors="replace")
    try:
        msg = json.loads(line)
    except json.JSONDecodeError as err:
        raise ProtocolError(f"bad JSON frame: {err}")
    if not isinstance(msg, dict) or "kind" not in msg:
        raise ProtocolError("frame is not a message object")
    if msg.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {msg.get('v')!r}")
    return msg


def state_update(game: Game) -> dict:
    from .geom2d import DegenerateInput, convex_hull

    s = game.state
    rays = []
    if game.cfg.pursuer_policy == "tmpc":
        rays = [float(a) for a in game.team.partition.boundaries()[:-1]]
    try:
        hull = [[float(x), float(y)]
                for x, y in convex_hull(s.pursuers).vertices]
    except DegenerateInput:
        hull = []
    rec = game.records[-1]
    return {
        "kind": "StateUpdate",
        "t": s.t,
        "pursuers": [[float(x), float(y)] for x, y in s.pursuers],
        "evader": [float(s.evader[0]), float(s.evader[1])],
        "sector_rays": rays,
        "hull": hull,
        "capture_radius": game.cfg.r_c,
        "encircled": bool(s.encircled),
        "captured": bool(s.captured),
        "hull_signed_dist": float(rec.hull_signed_distance_all),
    }


class _ClientConn:
    """Reader thread plus a latest-wins action mailbox for one socket."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        self.inbox: "queue.Queue[dict]" = queue.Queue()
        self.alive = True
        self._wfile = sock.makefile("wb")
        self._thread = threading.Thread(target=self._read_loop, daemon=True)
        self._thread.start()

    def _read_loop(self) -> None:
        try:
            with self.sock.makefile("rb") as rfile:
                for line in rfile:
                    if not line.strip():
                        continue
                    try:
                        self.inbox.put(decode_message(line))
                    except ProtocolError as err:
                        self.inbox.put({"kind": "_protocol_error",
                                        "error": str(err)})
        except OSError:
            pass
        self.alive = False

    def send(self, msg: dict) -> bool:
        try:
            self._wfile.write(encode_message(msg))
            self._wfile.flush()
            return True
        except OSError:
            self.alive = False
            return False

    def close(self) -> None:
        self.alive = False
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self.sock.close()


class SessionServer:
    """Single-session server: accepts one client at a time and drives the
    game loop; a dropped client pauses the game rather than ending it."""

    def __init__(self, cfg: ScenarioConfig, host: str = "127.0.0.1",
                 port: int = 0, tick_rate: float = 10.0):
        if cfg.evader_policy != "external":
            raise ValueError("service needs evader_policy = external")
        self.cfg = cfg
        self.tick_rate = tick_rate
        self.evader = _pol.ExternalEvader(cfg.u_e_max)
        self.game = Game(cfg, external_evader=self.evader)
        self._listener = socket.create_server((host, port))
        self._listener.settimeout(0.2)
        self.address = self._listener.getsockname()
        self._stop = threading.Event()
        self.sessions_completed = 0

    def stop(self) -> None:
        self._stop.set()

    def serve_forever(self) -> None:
        try:
            while not self._stop.is_set():
                try:
                    sock, peer = self._listener.accept()
                except socket.timeout:
                    continue
                log.info("client connected from %s", peer)
                conn = _ClientConn(sock)
                try:
                    self._run_session(conn)
                finally:
                    conn.close()
        finally:
            self._listener.close()

    # ------------------------------------------------------------------

    def _handle(self, conn: _ClientConn, msg: dict) -> bool:
        """Apply one client message; returns True when it was an Action."""
        kind = msg.get("kind")
        if kind == "Action":
            try:
                self.evader.submit([float(msg["ux"]), float(msg["uy"])])
            except (KeyError, TypeError, ValueError):
                conn.send({"kind": "Error", "error": "bad Action payload"})
                return False
            return True
        if kind == "Reset":
            name = msg.get("scenario")
            try:
                cfg = (load_scenario(name, ["evader_policy=external"])
                       if name else self.cfg)
                self.game = Game(cfg, external_evader=self.evader)
                self.cfg = cfg
            except Exception as err:
                conn.send({"kind": "Error", "error": f"reset failed: {err}"})
            return False
        if kind == "_protocol_error":
            conn.send({"kind": "Error", "error": msg["error"]})
            return False
        conn.send({"kind": "Error", "error": f"unexpected kind {kind!r}"})
        return False

    def _collect_deadline(self, conn: _ClientConn, deadline: float) -> None:
        """Drain messages until the deadline; the latest Action wins."""
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
            try:
                msg = conn.inbox.get(timeout=remaining)
            except queue.Empty:
                break
            self._handle(conn, msg)

    def _collect_lockstep(self, conn: _ClientConn) -> bool:
        """Block until one Action arrives (or the client drops)."""
        while not self._stop.is_set():
            try:
                msg = conn.inbox.get(timeout=0.2)
            except queue.Empty:
                if not conn.alive:
                    return False
                continue
            if self._handle(conn, msg):
                return True
        return False

    def _run_session(self, conn: _ClientConn) -> None:
        conn.send({
            "kind": "Hello",
            "tick_rate": self.tick_rate,
            "u_e_max": self.cfg.u_e_max,
            "capture_radius": self.cfg.r_c,
            "t": self.game.state.t,
        })
        period = 1.0 / self.tick_rate if self.tick_rate > 0 else 0.0
        while not self._stop.is_set() and conn.alive:
            if not conn.send(state_update(self.game)):
                break
            if self.game.state.captured or \
                    self.game.state.t >= self.cfg.max_steps:
                outcome = self.game.outcome()
                conn.send({"kind": "End", "outcome": outcome.kind,
                           "t": outcome.t})
                self.sessions_completed += 1
                # wait for a Reset (or disconnect) before continuing
                while not self._stop.is_set() and conn.alive:
                    try:
                        msg = conn.inbox.get(timeout=0.2)
                    except queue.Empty:
                        continue
                    self._handle(conn, msg)
                    break
                else:
                    break
                continue
            if period > 0:
                self._collect_deadline(conn, time.monotonic() + period)
            else:
                if not self._collect_lockstep(conn):
                    break  # pause: back to accept loop, state preserved
            if not conn.alive:
                break  # pause-on-disconnect
            self.game.tick()
        log.info("client session ended (t=%d)", self.game.state.t)


def serve(cfg: ScenarioConfig, host: str, port: int,
          tick_rate: float = 10.0) -> None:
    """Blocking entry point used by the CLI."""
    server = SessionServer(cfg, host, port, tick_rate)
    log.warning("listening on %s:%d (tick_rate=%s)",
                server.address[0], server.address[1], tick_rate)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()
