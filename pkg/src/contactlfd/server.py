"""WebSocket session service for the browser UI.

Messages are JSON text frames. The server sends ``hello`` once per
connection (scene geometry for rendering), ``state`` frames at the state
rate, ``result`` messages for command outcomes and ``error`` for rejected
input. Clients send ``master`` messages (pointer positions mapped into the
master workspace) and ``cmd`` messages: start_demo, stop_demo, learn,
reproduce, set_config.

One session loop owns the simulation; client handlers only enqueue
commands and master input, and any number of clients may watch the state
stream.
"""

from __future__ import annotations

import json
import socket
import threading
import time
from collections import deque
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import persist
from .errors import ContactLfdError
from .learning import learn_controller
from .session import (
    MasterStream,
    ReproductionStepper,
    SessionConfig,
    StepSample,
    TeleopStepper,
    demonstration_log,
)

STATE_RATE = 50.0  # Hz sent to clients; the loop itself runs at sim rate


def _to_jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    return value


class SessionServer:
    """Owns one simulated teleoperation session behind a socket endpoint."""

    def __init__(self, cfg: SessionConfig, out_dir, speed: float = 1.0):
        self.cfg = cfg
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.speed = speed
        self._clients: set = set()
        self._clients_lock = threading.Lock()
        self._commands: deque = deque()
        self._master_inputs: deque = deque()
        self._master_target = np.asarray(cfg.start_position, dtype=float) / cfg.coupling.position_scale
        self._mode = "idle"
        self._running = False
        self._loop_thread: threading.Thread | None = None
        self._ws_server = None

        self._teleop = TeleopStepper(cfg)
        self._repro: ReproductionStepper | None = None
        self._repro_samples: list[StepSample] = []
        self._recording: list[StepSample] | None = None
        self._recording_master: list[np.ndarray] | None = None
        self._recording_cfg: SessionConfig | None = None
        self._recorded_demos: list[Path] = []
        self._demo_counter = 0
        self._state_divisor = max(1, int(round(cfg.sim_rate / STATE_RATE)))

    # -- lifecycle ----------------------------------------------------------

    def start(self, host: str = "127.0.0.1", port: int = 0) -> int:
        """Start loop and acceptor threads; returns the bound port."""
        from websockets.sync.server import serve

        sock = socket.create_server((host, port))
        bound_port = sock.getsockname()[1]
        self._ws_server = serve(self._handle_client, sock=sock)
        self._running = True
        self._loop_thread = threading.Thread(target=self._loop, daemon=True)
        self._loop_thread.start()
        threading.Thread(target=self._ws_server.serve_forever, daemon=True).start()
        return bound_port

    def serve_forever(self, host: str, port: int) -> None:
        from websockets.sync.server import serve

        sock = socket.create_server((host, port))
        self._ws_server = serve(self._handle_client, sock=sock)
        self._running = True
        self._loop_thread = threading.Thread(target=self._loop, daemon=True)
        self._loop_thread.start()
        self._ws_server.serve_forever()

    def stop(self) -> None:
        self._running = False
        if self._loop_thread is not None:
            self._loop_thread.join(timeout=5.0)
        if self._ws_server is not None:
            self._ws_server.shutdown()

    # -- session loop ---------------------------------------------------------

    def _loop(self) -> None:
        dt = self.cfg.dt
        tick = 0
        next_deadline = time.monotonic()
        while self._running:
            self._process_commands()
            sample = self._advance()
            if self._recording is not None and self._mode == "recording":
                self._recording.append(sample)
                self._recording_master.append(self._master_target.copy())
            if tick % self._state_divisor == 0:
                self._broadcast(self._state_message(sample))
            tick += 1
            if self.speed > 0.0:
                next_deadline += dt / self.speed
                delay = next_deadline - time.monotonic()
                if delay > 0.0:
                    time.sleep(delay)
                else:
                    next_deadline = time.monotonic()  # fell behind; don't burst

    def _advance(self) -> StepSample:
        if self._mode == "reproducing" and self._repro is not None:
            sample = self._repro.tick()
            self._repro_samples.append(sample)
            if self._repro.done:
                self._finish_reproduction(sample)
            return sample
        # idle and recording both run the teleoperation loop
        while self._master_inputs:
            self._master_target = self._master_inputs.popleft()
        return self._teleop.tick(self._master_target)

    def _process_commands(self) -> None:
        while self._commands:
            action, payload = self._commands.popleft()
            try:
                if action == "start_demo":
                    self._start_demo()
                elif action == "stop_demo":
                    self._stop_demo()
                elif action == "reproduce":
                    self._start_reproduction(payload)
            except (ContactLfdError, ValueError) as exc:
                self._broadcast({"type": "error", "message": str(exc)})

    def _start_demo(self) -> None:
        if self._mode != "idle":
            raise ValueError(f"cannot start a demonstration while {self._mode}")
        # Fresh stepper from the current pose: the saved log replays through
        # the same code path with the same initial state.
        start = tuple(float(v) for v in self._teleop.world.tip_state.position)
        self._recording_cfg = replace(self.cfg, start_position=start)
        self._teleop = TeleopStepper(self._recording_cfg)
        self._recording = []
        self._recording_master = []
        self._mode = "recording"
        self._broadcast({"type": "result", "kind": "demo_started"})

    def _stop_demo(self) -> None:
        if self._mode != "recording" or not self._recording:
            raise ValueError("no demonstration is being recorded")
        samples, cfg = self._recording, self._recording_cfg
        dt = cfg.dt
        stream = MasterStream(
            times=np.arange(len(samples)) * dt,
            positions=np.array(self._recording_master),
        )
        self._recording = None
        self._recording_master = None
        self._mode = "idle"
        log = demonstration_log(samples, cfg, stream)
        self._demo_counter += 1
        demo_path = self.out_dir / f"demo_{self._demo_counter:02d}.txt"
        log_path = self.out_dir / f"session_log_{self._demo_counter:02d}.json"
        persist.save_demonstration(log.demonstration, demo_path)
        persist.save_session_log(log, cfg, log_path)
        self._recorded_demos.append(demo_path)
        self._broadcast(
            {
                "type": "result",
                "kind": "demo_saved",
                "demo_path": str(demo_path),
                "log_path": str(log_path),
                "samples": len(samples),
                "metrics": log.metrics,
            }
        )

    def _learn(self, payload: dict) -> dict:
        paths = payload.get("demos") or [str(p) for p in self._recorded_demos]
        if not paths:
            raise ValueError("no demonstrations recorded or given")
        demos = [persist.load_demonstration(p) for p in paths]
        controller = learn_controller(demos, self.cfg.learning)
        path = self.out_dir / "controller.json"
        persist.save_controller(controller, path)
        return {
            "type": "result",
            "kind": "learned",
            "controller_path": str(path),
            "demos": paths,
            "parameters": persist.controller_to_dict(controller),
        }

    def _start_reproduction(self, payload: dict) -> None:
        if self._mode != "idle":
            raise ValueError(f"cannot reproduce while {self._mode}")
        path = payload.get("controller_path") or str(self.out_dir / "controller.json")
        controller = persist.load_controller(path)
        start = payload.get("start") or self._teleop.world.tip_state.position
        duration = payload.get("duration") or self.cfg.trajectory_duration
        self._repro = ReproductionStepper(self.cfg, controller, np.asarray(start, dtype=float), duration)
        self._repro_samples = []
        self._mode = "reproducing"
        self._broadcast({"type": "result", "kind": "reproduction_started"})

    def _finish_reproduction(self, last: StepSample) -> None:
        from .session import SessionTrace, _metrics_from_trace

        samples = self._repro_samples
        self._repro = None
        self._repro_samples = []
        self._mode = "idle"
        # Resume teleoperation from wherever reproduction ended.
        end = tuple(float(v) for v in last.position)
        self._teleop = TeleopStepper(replace(self.cfg, start_position=end))
        self._master_target = np.asarray(end) / self.cfg.coupling.position_scale
        trace = SessionTrace.from_samples(samples)
        metrics = _metrics_from_trace(trace)
        plot_path = self.out_dir / "reproduction.csv"
        persist.save_plot_data(trace, plot_path)
        self._broadcast(
            {
                "type": "result",
                "kind": "reproduction",
                "metrics": metrics,
                "plot_path": str(plot_path),
            }
        )

    # -- client handling ------------------------------------------------------

    def _handle_client(self, connection) -> None:
        with self._clients_lock:
            self._clients.add(connection)
        try:
            connection.send(json.dumps(self._hello_message()))
            for raw in connection:
                self._dispatch(connection, raw)
        except Exception:
            pass
        finally:
            with self._clients_lock:
                self._clients.discard(connection)

    def _dispatch(self, connection, raw) -> None:
        try:
            msg = json.loads(raw)
        except json.JSONDecodeError as exc:
            self._send(connection, {"type": "error", "message": f"bad json: {exc.msg}"})
            return
        kind = msg.get("type")
        if kind == "master":
            pos = msg.get("pos")
            if (
                isinstance(pos, list)
                and len(pos) == 2
                and all(isinstance(v, (int, float)) for v in pos)
            ):
                self._master_inputs.append(np.array(pos, dtype=float))
            else:
                self._send(connection, {"type": "error", "message": "master.pos must be [x, y]"})
        elif kind == "cmd":
            self._handle_cmd(connection, msg)
        else:
            self._send(connection, {"type": "error", "message": f"unknown message type {kind!r}"})

    def _handle_cmd(self, connection, msg: dict) -> None:
        action = msg.get("action")
        if action in ("start_demo", "stop_demo", "reproduce"):
            self._commands.append((action, msg))
        elif action == "learn":
            try:
                self._broadcast(self._learn(msg))
            except (ContactLfdError, ValueError, OSError) as exc:
                self._send(connection, {"type": "error", "message": str(exc)})
        elif action == "set_config":
            if "speed" in msg:
                self.speed = float(msg["speed"])
            self._send(connection, {"type": "result", "kind": "config_updated", "speed": self.speed})
        else:
            self._send(connection, {"type": "error", "message": f"unknown action {action!r}"})

    # -- messages -------------------------------------------------------------

    def _hello_message(self) -> dict:
        m = self.cfg.manipulator
        return {
            "type": "hello",
            "links": list(m.link_lengths),
            "base": list(m.base_origin),
            "reach": m.reach,
            "position_scale": self.cfg.coupling.position_scale,
            "sim_rate": self.cfg.sim_rate,
            "state_rate": self.cfg.sim_rate / self._state_divisor,
            "surfaces": [
                {"start": list(s.start), "end": list(s.end), "friction": s.friction}
                for s in self.cfg.environment.surfaces
            ],
        }

    def _state_message(self, sample: StepSample) -> dict:
        return {
            "type": "state",
            "t": sample.time,
            "master": _to_jsonable(sample.master_position),
            "slave": _to_jsonable(sample.position),
            "force": _to_jsonable(sample.estimated_force),
            "contact": bool(np.linalg.norm(sample.true_force) > 0.0),
            "joints": _to_jsonable(sample.joint_angles),
            "mode": self._mode,
            "recording": self._mode == "recording",
        }

    def _send(self, connection, message: dict) -> None:
        try:
            connection.send(json.dumps(message))
        except Exception:
            pass

    def _broadcast(self, message: dict) -> None:
        data = json.dumps(message)
        with self._clients_lock:
            clients = list(self._clients)
        for connection in clients:
            try:
                connection.send(data)
            except Exception:
                with self._clients_lock:
                    self._clients.discard(connection)
