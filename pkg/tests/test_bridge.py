import asyncio
import json

import pytest

from bzbot.bridge import BridgeError, Session, serve
from bzbot.lab import Scenario, run_scenario, scenario_e2

FAST = 1e6   # unpaced: stream-only tests where consumers just buffer
PACED = 100  # 20 ms per tick: command tests stay in lockstep with consumers


def drain(session: Session, *, commands=None, stop_after=None):
    """Run a session to completion, returning its event list.

    ``commands`` is a list of (tick_index, command_dict) submitted after
    that many sample events have been seen; ``stop_after`` stops the
    session once that many sample events have been seen.
    """
    events = []
    acks = []

    async def main():
        queue = session.subscribe()
        task = asyncio.create_task(session.run())
        pending = sorted(commands or [], key=lambda c: c[0])
        seen = 0
        while True:
            event = await asyncio.wait_for(queue.get(), timeout=30)
            if event is None:
                break
            events.append(event)
            if event["kind"] == "sample":
                seen += 1
                while pending and pending[0][0] <= seen:
                    _, command = pending.pop(0)
                    acks.append(session.apply_command(command))
                if stop_after is not None and seen >= stop_after:
                    session.stop()
        await asyncio.wait_for(task, timeout=30)

    asyncio.run(main())
    return events, acks


def short_scenario(duration=15.0, seed=1, **kwargs):
    return Scenario(name="bridge-probe", duration_s=duration, seed=seed, **kwargs)


class TestSessionStream:
    def test_monotone_event_times_and_kinds(self):
        events, _ = drain(Session(short_scenario(), speed=FAST))
        times = [e["t"] for e in events]
        assert times == sorted(times)
        kinds = {e["kind"] for e in events}
        assert {"status", "sample", "decision", "pose"} <= kinds
        samples = [e for e in events if e["kind"] == "sample"]
        assert [e["t"] for e in samples] == [3.0 + 2.0 * i for i in range(len(samples))]

    def test_all_subscribers_see_identical_sequences(self):
        session = Session(short_scenario(), speed=FAST)
        seqs = [[], []]

        async def main():
            queues = [session.subscribe(), session.subscribe()]
            task = asyncio.create_task(session.run())
            for q, out in zip(queues, seqs):
                while True:
                    event = await asyncio.wait_for(q.get(), timeout=30)
                    if event is None:
                        break
                    out.append(event)
            await task

        asyncio.run(main())
        assert seqs[0] == seqs[1]

    def test_headless_session_equals_scenario_run(self):
        """Bridge equivalence: no commands -> event bodies match the lab."""
        scenario = scenario_e2(seed=7)
        events, _ = drain(Session(scenario, speed=FAST))
        trace = run_scenario(scenario)

        samples = [e for e in events if e["kind"] == "sample"]
        assert [(e["t"], e["volts"], e["laser_on"]) for e in samples] == \
            [(s.t_s, s.volts, s.laser_on) for s in trace.samples]

        decisions = [e for e in events if e["kind"] == "decision"]
        assert [e["decision"] for e in decisions] == \
            [d.value for d in trace.decisions]

        poses = [e for e in events if e["kind"] == "pose"]
        assert [(e["x_cm"], e["y_cm"], e["theta_deg"]) for e in poses] == \
            [(p.x, p.y, p.theta) for p in trace.poses[1:]]

        stimuli = [e for e in events if e["kind"] == "stimulus"]
        assert [(e["t_on_s"], e["duration_s"], e["amplitude"], e["mode"])
                for e in stimuli] == \
            [(s.t_on_s, s.duration_s, s.amplitude, s.mode) for s in scenario.stimuli]


class TestCommands:
    def test_fire_laser_appears_within_one_tick(self):
        command = {"kind": "fire_laser", "duration_s": 10, "amplitude": 1.2,
                   "mode": "excite"}
        events, acks = drain(Session(short_scenario(duration=25.0), speed=PACED),
                             commands=[(3, command)])
        assert acks[0]["ok"] is True
        applies_at = acks[0]["applies_at_t"]
        # submitted after the sample at 7.0 s; must apply by the next tick
        assert applies_at == 9.0
        stimuli = [e for e in events if e["kind"] == "stimulus"]
        assert len(stimuli) == 1
        assert 7.0 <= stimuli[0]["t_on_s"] <= applies_at
        # the kick is visible in the very next sample
        samples = [e for e in events if e["kind"] == "sample"]
        before = [e["volts"] for e in samples if e["t"] < applies_at]
        at = [e["volts"] for e in samples if e["t"] == applies_at]
        assert abs(at[0] - before[-1]) > 0.020

    def test_fire_laser_inhibit_suppresses_output(self):
        command = {"kind": "fire_laser", "duration_s": 10, "amplitude": 0.2,
                   "mode": "inhibit"}
        events, acks = drain(Session(short_scenario(duration=80.0), speed=PACED),
                             commands=[(5, command)])
        assert acks[0]["ok"] is True
        applies_at = acks[0]["applies_at_t"]
        samples = [e for e in events if e["kind"] == "sample"]
        pre = [e["volts"] for e in samples if e["t"] <= applies_at]
        post = [e["volts"] for e in samples if applies_at + 10 < e["t"] <= applies_at + 35]
        spread = lambda xs: max(xs) - min(xs)  # noqa: E731
        assert spread(post) < 0.5 * spread(pre)

    def test_two_fires_in_one_tick_both_scheduled(self):
        # even two identical commands are two stimuli (overlap saturates
        # inside the marble, but both are scheduled and both announced)
        command = {"kind": "fire_laser", "duration_s": 10, "amplitude": 0.2}
        session = Session(short_scenario(duration=20.0), speed=PACED)
        events, acks = drain(session, commands=[(2, command), (2, dict(command))])
        assert all(a["ok"] for a in acks)
        stimuli = [e for e in events if e["kind"] == "stimulus"]
        assert len(stimuli) == 2

    def test_set_speed_zero_rejected(self):
        session = Session(short_scenario(), speed=FAST)
        ack = session.apply_command({"kind": "set_speed", "factor": 0})
        assert ack["ok"] is False
        assert "factor" in ack["error"]

    def test_unknown_command_rejected_with_reason(self):
        session = Session(short_scenario(), speed=FAST)
        ack = session.apply_command({"kind": "self_destruct"})
        assert ack["ok"] is False
        assert "unknown" in ack["error"]

    def test_invalid_fire_payload_rejected(self):
        session = Session(short_scenario(), speed=FAST)
        ack = session.apply_command({"kind": "fire_laser", "amplitude": -1})
        assert ack["ok"] is False

    def test_speed_must_be_positive_at_construction(self):
        with pytest.raises(BridgeError):
            Session(short_scenario(), speed=0.0)


class TestPauseResumeReset:
    def test_pause_emits_no_new_times_then_resume_continues(self):
        session = Session(short_scenario(duration=40.0), speed=PACED)
        observed = []

        async def main():
            queue = session.subscribe()
            task = asyncio.create_task(session.run())
            seen = 0
            while seen < 3:
                event = await asyncio.wait_for(queue.get(), timeout=30)
                observed.append(event)
                if event and event["kind"] == "sample":
                    seen += 1
            session.apply_command({"kind": "pause"})
            await asyncio.sleep(0.1)  # let the pause reach the tick boundary
            while not queue.empty():
                observed.append(queue.get_nowait())
            await asyncio.sleep(0.3)
            n_during_pause = queue.qsize()
            session.apply_command({"kind": "resume"})
            while True:
                event = await asyncio.wait_for(queue.get(), timeout=30)
                if event is None:
                    break
                observed.append(event)
            await task
            return n_during_pause

        stalled = asyncio.run(main())
        assert stalled == 0
        samples = [e["t"] for e in observed if e and e["kind"] == "sample"]
        assert samples == sorted(samples)
        assert len(samples) > 3

    def test_reset_restarts_from_time_zero(self):
        session = Session(short_scenario(duration=15.0), speed=PACED)
        events, _ = drain(session, commands=[(3, {"kind": "reset"})])
        sample_times = [e["t"] for e in events if e["kind"] == "sample"]
        # 3 ticks, reset, then the full run again from 3.0
        assert sample_times[:3] == [3.0, 5.0, 7.0]
        assert sample_times[3] == 3.0
        reset_events = [e for e in events if e["kind"] == "status"
                        and e.get("state") == "reset"]
        assert len(reset_events) == 1


class TestSlowSubscriber:
    def test_overflowing_subscriber_dropped_with_status(self):
        session = Session(short_scenario(duration=30.0), speed=PACED, queue_size=4)
        dropped_queue_sizes = []
        good_events = []

        async def main():
            slow = session.subscribe()
            task = asyncio.create_task(session.run())
            good = session.subscribe()
            while True:
                event = await asyncio.wait_for(good.get(), timeout=30)
                if event is None:
                    break
                good_events.append(event)
            await task
            dropped_queue_sizes.append(slow.qsize())

        asyncio.run(main())
        assert dropped_queue_sizes[0] <= 4
        assert any(e["kind"] == "status" and e.get("state") == "subscriber_dropped"
                   for e in good_events)


class TestOverTheWire:
    def test_websocket_round_trip(self):
        websockets = pytest.importorskip("websockets")

        scenario = short_scenario(duration=15.0)
        received = []
        acks = []

        async def main():
            port_box = {}
            ready = asyncio.Event()

            def on_ready(port):
                port_box["port"] = port
                ready.set()

            server = asyncio.create_task(
                serve(scenario, port=0, speed=PACED, ready=on_ready))
            await asyncio.wait_for(ready.wait(), timeout=10)
            uri = f"ws://127.0.0.1:{port_box['port']}"
            async with websockets.connect(uri) as ws:
                await ws.send(json.dumps({"kind": "fire_laser",
                                          "duration_s": 5, "amplitude": 0.2}))
                while True:
                    try:
                        message = await asyncio.wait_for(ws.recv(), timeout=10)
                    except (asyncio.TimeoutError, websockets.ConnectionClosed):
                        break
                    obj = json.loads(message)
                    if obj["kind"] == "ack":
                        acks.append(obj)
                    else:
                        received.append(obj)
                    if obj.get("kind") == "status" and obj.get("state") == "finished":
                        break
            await asyncio.wait_for(server, timeout=30)

        asyncio.run(main())
        assert acks and acks[0]["ok"] is True
        kinds = {e["kind"] for e in received}
        assert {"sample", "decision", "pose", "stimulus"} <= kinds
