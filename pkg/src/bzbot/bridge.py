"""Live telemetry-and-command bridge.

Exposes one running simulation session over a WebSocket. Every message is
a single JSON object; events flow to all subscribers in one total order,
commands flow in and are applied at the next control-tick boundary.

Event messages:

    {"kind": "status",   "t": 0.0,  "state": "started"}
    {"kind": "stimulus", "t": 10.0, "t_on_s": 10.0, "duration_s": 10.0,
                         "amplitude": 0.2, "mode": "inhibit"}
    {"kind": "sample",   "t": 12.0, "volts": 0.0042, "laser_on": false}
    {"kind": "decision", "t": 12.0, "decision": "L"}
    {"kind": "pose",     "t": 12.0, "x_cm": 1.198357, "y_cm": 0.062815,
                         "theta_deg": 3.0}

Command messages and their acknowledgments:

    {"kind": "fire_laser", "duration_s": 10, "amplitude": 0.2, "mode": "inhibit"}
    {"kind": "pause"} | {"kind": "resume"} | {"kind": "reset"}
    {"kind": "set_speed", "factor": 10}
    -> {"kind": "ack", "command": "fire_laser", "ok": true, "applies_at_t": 12.0}
    -> {"kind": "ack", "command": "set_speed", "ok": false, "error": "..."}

The default pacing is 10x realtime so a one-minute experiment plays in six
seconds; a slow subscriber whose queue fills up is dropped with a status
event rather than stalling the simulation clock.
"""
from __future__ import annotations

import asyncio
import json
import math
from typing import Any

from .controller import control_tick
from .lab import Scenario, _build_rig, _tick_indices
from .marble import SAMPLE_PERIOD_S, LaserStimulus, Marble, MarbleError
from .robot import Pose

DEFAULT_SPEED = 10.0


class BridgeError(RuntimeError):
    pass


def _event(kind: str, t: float, **body: Any) -> dict:
    return {"kind": kind, "t": t, **body}


class Session:
    """One simulation clock plus its subscribers and command queue.

    Owned by a single asyncio event loop. ``run()`` is the only writer of
    simulation state; commands submitted from handler tasks are queued and
    applied at tick boundaries.
    """

    def __init__(self, scenario: Scenario, *, speed: float = DEFAULT_SPEED,
                 queue_size: int = 4096, endless: bool = False):
        if speed <= 0:
            raise BridgeError("speed factor must be > 0")
        self.scenario = scenario
        self.speed = speed
        self.endless = endless
        self._queue_size = queue_size
        self._subscribers: list[asyncio.Queue] = []
        self._commands: list[dict] = []
        self._paused = False
        self._resume = asyncio.Event()
        self._resume.set()
        self._stopping = False
        self._reset_sim()

    # -- simulation state ---------------------------------------------------

    def _reset_sim(self) -> None:
        rig = _build_rig(self.scenario)
        self._rig = rig
        self._marble = Marble(params=rig.params, calib=rig.calib,
                              light=rig.light, state=rig.state0,
                              seed=self.scenario.seed)
        for s in self.scenario.stimuli:
            self._marble.schedule_laser(s)
        self._pose = Pose()
        self._first, self._every, self._total = _tick_indices(
            rig.control, self.scenario.duration_s)
        self._k = 0
        # identity-based: two equal-valued stimuli are still two events
        self._announced: set[int] = set()

    @property
    def t(self) -> float:
        return self._marble.t_s

    def _next_tick_t(self) -> float:
        if self._k < self._first:
            return self._first * SAMPLE_PERIOD_S
        ticks_done = (self._k - self._first) // self._every
        return (self._first + (ticks_done + 1) * self._every) * SAMPLE_PERIOD_S

    # -- subscribers ----------------------------------------------------------

    def subscribe(self) -> asyncio.Queue:
        q: asyncio.Queue = asyncio.Queue(maxsize=self._queue_size)
        self._subscribers.append(q)
        return q

    def unsubscribe(self, q: asyncio.Queue) -> None:
        if q in self._subscribers:
            self._subscribers.remove(q)

    def _broadcast(self, event: dict) -> None:
        dropped = []
        for q in self._subscribers:
            try:
                q.put_nowait(event)
            except asyncio.QueueFull:
                dropped.append(q)
        for q in dropped:
            self._subscribers.remove(q)
        if dropped:
            notice = _event("status", self.t, state="subscriber_dropped",
                            detail="queue overflow")
            for q in self._subscribers:
                try:
                    q.put_nowait(notice)
                except asyncio.QueueFull:
                    pass

    def _finish(self, state: str) -> None:
        self._broadcast(_event("status", self.t, state=state))
        for q in self._subscribers:
            try:
                q.put_nowait(None)
            except asyncio.QueueFull:
                pass

    # -- commands -------------------------------------------------------------

    def apply_command(self, command: dict) -> dict:
        """Validate now, queue for the next tick, and acknowledge.

        Invalid payloads are rejected with a reason; nothing is silently
        dropped.
        """
        kind = command.get("kind")
        ack = {"kind": "ack", "command": kind}
        if kind == "fire_laser":
            try:
                stim = LaserStimulus(
                    t_on_s=self.t,
                    duration_s=float(command.get("duration_s", 10.0)),
                    amplitude=float(command.get("amplitude", 0.2)),
                    mode=str(command.get("mode", "inhibit")))
            except (MarbleError, TypeError, ValueError) as err:
                return {**ack, "ok": False, "error": str(err)}
            self._commands.append({"kind": kind, "stimulus": stim})
            return {**ack, "ok": True, "applies_at_t": self._next_tick_t()}
        if kind == "set_speed":
            try:
                factor = float(command.get("factor", 0.0))
            except (TypeError, ValueError):
                return {**ack, "ok": False, "error": "factor must be a number"}
            if not math.isfinite(factor) or factor <= 0:
                return {**ack, "ok": False, "error": "factor must be > 0"}
            self.speed = factor  # pacing only; takes effect at the next sleep
            return {**ack, "ok": True, "applies_at_t": self._next_tick_t()}
        if kind == "resume":
            # must act immediately: a paused clock owner drains nothing
            self._paused = False
            self._resume.set()
            return {**ack, "ok": True, "applies_at_t": self._next_tick_t()}
        if kind in ("pause", "reset"):
            self._commands.append(command)
            return {**ack, "ok": True, "applies_at_t": self._next_tick_t()}
        return {**ack, "ok": False, "error": f"unknown command kind {kind!r}"}

    def _drain_commands(self) -> None:
        commands, self._commands = self._commands, []
        for command in commands:
            kind = command["kind"]
            if kind == "fire_laser":
                stim: LaserStimulus = command["stimulus"]
                if stim.t_on_s < self.t:
                    stim = LaserStimulus(t_on_s=self.t,
                                         duration_s=stim.duration_s,
                                         amplitude=stim.amplitude,
                                         mode=stim.mode)
                self._marble.schedule_laser(stim)
            elif kind == "pause":
                self._paused = True
                self._resume.clear()
            elif kind == "reset":
                self._reset_sim()
                self._broadcast(_event("status", 0.0, state="reset"))

    # -- main loop ------------------------------------------------------------

    def _emit_stimuli_through(self, t: float) -> None:
        for s in self._marble.schedule:
            if s.t_on_s <= t and id(s) not in self._announced:
                self._announced.add(id(s))
                self._broadcast(_event("stimulus", s.t_on_s, t_on_s=s.t_on_s,
                                       duration_s=s.duration_s,
                                       amplitude=s.amplitude, mode=s.mode))

    async def run(self) -> None:
        """Drive the session to completion (or until ``stop()``)."""
        self._broadcast(_event("status", self.t, state="started"))
        while not self._stopping:
            self._drain_commands()
            if self._paused:
                await self._resume.wait()
                continue
            target = self._first if self._k < self._first else self._k + self._every
            if target > self._total:
                if self.endless:
                    self._total = target
                else:
                    break
            while self._k < target:
                self._marble.advance_sample()
                self._k += 1
            sample, decision, pose = control_tick(
                self._marble, self._pose, self._rig.control, self._rig.motion)
            self._pose = pose
            self._emit_stimuli_through(sample.t_s)
            self._broadcast(_event("sample", sample.t_s, volts=sample.volts,
                                   laser_on=sample.laser_on))
            self._broadcast(_event("decision", sample.t_s,
                                   decision=decision.value))
            self._broadcast(_event("pose", sample.t_s, x_cm=pose.x,
                                   y_cm=pose.y, theta_deg=pose.theta))
            await asyncio.sleep(self._rig.control.decision_period_s / self.speed)
        self._finish("finished" if not self._stopping else "stopped")

    def stop(self) -> None:
        self._stopping = True
        self._resume.set()


async def handle_connection(websocket, session: Session) -> None:
    """Forward session events to one client and its commands back."""
    queue = session.subscribe()

    async def sender():
        while True:
            event = await queue.get()
            if event is None:
                break
            await websocket.send(json.dumps(event))

    async def receiver():
        async for message in websocket:
            try:
                command = json.loads(message)
            except json.JSONDecodeError as err:
                ack = {"kind": "ack", "command": None, "ok": False,
                       "error": f"bad JSON: {err}"}
            else:
                ack = session.apply_command(command)
            await websocket.send(json.dumps(ack))

    send_task = asyncio.create_task(sender())
    recv_task = asyncio.create_task(receiver())
    try:
        done, pending = await asyncio.wait(
            {send_task, recv_task}, return_when=asyncio.FIRST_COMPLETED)
        for task in pending:
            task.cancel()
        for task in done:
            # a client that vanished mid-send is routine, not an error
            task.exception()
    finally:
        session.unsubscribe(queue)


async def serve(scenario: Scenario, *, host: str = "127.0.0.1", port: int = 8765,
                speed: float = DEFAULT_SPEED, endless: bool = False,
                ready=None) -> None:
    """Run one session and serve it until it finishes.

    ``ready`` (if given) is called with the bound port once listening;
    useful with port 0.
    """
    import websockets.asyncio.server

    session = Session(scenario, speed=speed, endless=endless)

    async def handler(websocket):
        await handle_connection(websocket, session)

    async with websockets.asyncio.server.serve(handler, host, port) as server:
        bound = server.sockets[0].getsockname()[1] if server.sockets else port
        if ready is not None:
            ready(bound)
        else:
            print(f"listening on ws://{host}:{bound}", flush=True)
        await session.run()
