"""Command-line entry points.

Subcommands: ``simulate`` records a demonstration from a scripted master
stream, ``demo-replay`` re-runs a recorded session log and checks it
reproduces bit-exactly, ``learn`` turns demonstration logs into a
controller document, ``reproduce`` executes a controller against an
environment and writes plot data, ``serve`` opens the socket endpoint for
the UI.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import persist
from .errors import ContactLfdError
from .learning import learn_controller
from .session import MasterStream, SessionConfig, run_demonstration, run_reproduction


def _load_config(args) -> SessionConfig:
    cfg = persist.load_session_config(args.config) if args.config else SessionConfig()
    if getattr(args, "env", None):
        cfg = cfg.with_environment(persist.load_environment(args.env))
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    if getattr(args, "rate", None) is not None:
        cfg = replace(cfg, sim_rate=args.rate)
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_common(parser: argparse.ArgumentParser, env=True):
    parser.add_argument("--config", help="session config JSON")
    if env:
        parser.add_argument("--env", help="environment definition file (overrides config)")
    parser.add_argument("--seed", type=int, default=None, help="estimator seed override")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--rate", type=float, default=None, help="simulation rate in Hz")


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    raw = persist.load_master_stream(args.stream)
    # Stream files are waypoint paths; interpolate so coarse hand-written
    # files command smooth strokes. Recorded session logs replay their
    # dense streams sample-exactly through demo-replay instead.
    if len(raw.times) > 1 and raw.times[-1] > raw.times[0]:
        waypoints = np.column_stack([raw.times, raw.positions])
        stream = MasterStream.from_waypoints(waypoints)
    else:
        stream = raw
    log = run_demonstration(cfg, stream, duration=args.duration)
    out = _out_dir(args)
    persist.save_demonstration(log.demonstration, out / "demo.txt")
    persist.save_session_log(log, cfg, out / "session_log.json")
    persist.save_plot_data(log.trace, out / "plot.csv")
    print(f"recorded {len(log.demonstration)} samples at {cfg.sim_rate:g} Hz")
    for key in ("contact_time", "mean_force_magnitude", "max_penetration"):
        print(f"  {key}: {log.metrics[key]:.6g}")
    if log.workspace_violations:
        print(f"  workspace violations: {log.workspace_violations}")
    print(f"wrote {out / 'demo.txt'}")
    return 0


def cmd_demo_replay(args) -> int:
    mode, seed, cfg, stream, recorded, _ = persist.load_session_log(args.log)
    if mode != "demonstrate" or stream is None:
        print("session log does not contain a replayable demonstration", file=sys.stderr)
        return 1
    log = run_demonstration(cfg, stream, duration=recorded.times[-1])
    out = _out_dir(args)
    persist.save_demonstration(log.demonstration, out / "demo.txt")
    identical = (
        np.array_equal(log.demonstration.positions, recorded.positions)
        and np.array_equal(log.demonstration.forces, recorded.forces)
    )
    print(f"replayed {len(log.demonstration)} samples; bit-identical: {identical}")
    return 0 if identical else 1


def cmd_learn(args) -> int:
    cfg = _load_config(args)
    demos = [persist.load_demonstration(p) for p in args.demos]
    controller = learn_controller(
        demos, cfg.learning, trajectory_length=args.trajectory_length
    )
    out = _out_dir(args)
    path = out / "controller.json"
    persist.save_controller(controller, path)
    v = controller.desired_direction
    print(f"desired direction: ({v[0]:+.6f}, {v[1]:+.6f})")
    print(f"compliant axes: {controller.n_compliant}")
    print("position gain ((m/s)/m):")
    for row in controller.gains.position_gain:
        print("  " + "  ".join(f"{x:10.4f}" for x in row))
    print("force gain ((m/s)/N):")
    for row in controller.gains.force_gain:
        print("  " + "  ".join(f"{x:10.3e}" for x in row))
    print(f"wrote {path}")
    return 0


def cmd_reproduce(args) -> int:
    cfg = _load_config(args)
    controller = persist.load_controller(args.controller)
    start = (
        np.array([float(v) for v in args.start.split(",")])
        if args.start
        else np.asarray(cfg.start_position)
    )
    log = run_reproduction(cfg, controller, start, duration=args.duration)
    out = _out_dir(args)
    persist.save_session_log(log, cfg, out / "session_log.json")
    persist.save_plot_data(log.trace, out / "plot.csv")
    for key, value in log.metrics.items():
        print(f"  {key}: {value:.6g}")
    print(f"wrote {out / 'plot.csv'}")
    return 0


def cmd_serve(args) -> int:
    from .server import SessionServer  # deferred: optional websockets import

    cfg = _load_config(args)
    server = SessionServer(cfg, out_dir=_out_dir(args), speed=args.speed)
    print(f"serving on ws://{args.host}:{args.port} (speed x{args.speed:g})")
    try:
        server.serve_forever(args.host, args.port)
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contactlfd",
        description="Teleoperated demonstration, learning and reproduction of compliant motions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="record a demonstration from a scripted master stream")
    _add_common(p)
    p.add_argument("--stream", required=True, help="master input file (t x y per line)")
    p.add_argument("--duration", type=float, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("demo-replay", help="re-run a recorded session log")
    p.add_argument("--log", required=True, help="session log JSON")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_demo_replay)

    p = sub.add_parser("learn", help="learn a controller from demonstration logs")
    _add_common(p, env=False)
    p.add_argument("demos", nargs="+", help="demonstration log files")
    p.add_argument("--trajectory-length", type=float, default=None)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("reproduce", help="execute a learned controller")
    _add_common(p)
    p.add_argument("--controller", required=True, help="controller JSON")
    p.add_argument("--start", help="start position 'x,y' (default: config)")
    p.add_argument("--duration", type=float, default=None)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("serve", help="open the socket endpoint for the UI")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--speed", type=float, default=1.0,
                   help="pacing factor; 0 runs unpaced")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContactLfdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
