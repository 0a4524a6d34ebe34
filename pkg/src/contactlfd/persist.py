"""File formats: environments, demonstrations, controllers, configs, logs.

Text formats are human-editable and line-oriented; numeric fields are
written with shortest round-trip precision so persisted values reload
bit-exactly. Parse failures report the offending line number.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .estimation import EstimatorConfig
from .impedance import ControlGains
from .learning import Demonstration, LearnedController, LearningParams
from .session import MasterStream, SessionConfig, SessionLog, SessionTrace
from .simulation import Environment, ManipulatorModel, Surface
from .teleop import CouplingConfig


def _fmt(x: float) -> str:
    return repr(float(x))


def _matrix(m) -> list:
    return [[float(v) for v in row] for row in np.asarray(m, dtype=float)]


# ---------------------------------------------------------------------------
# Environment definition: one surface per line


def save_environment(env: Environment, path) -> None:
    lines = [
        "# surfaces: x1 y1 x2 y2 stiffness damping friction",
    ]
    for s in env.surfaces:
        lines.append(
            " ".join(
                _fmt(v)
                for v in (*s.start, *s.end, s.stiffness, s.damping, s.friction)
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def load_environment(path) -> Environment:
    surfaces = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 7:
            raise ParseError(path, lineno, f"expected 7 fields, got {len(fields)}")
        try:
            x1, y1, x2, y2, k, c, mu = (float(f) for f in fields)
        except ValueError as exc:
            raise ParseError(path, lineno, f"bad number: {exc}") from exc
        try:
            surfaces.append(Surface((x1, y1), (x2, y2), stiffness=k, damping=c, friction=mu))
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from exc
    return Environment(tuple(surfaces))


# ---------------------------------------------------------------------------
# Demonstration logs: header plus one record per line


def save_demonstration(demo: Demonstration, path) -> None:
    dim = demo.dim
    axes = "xyz"[:dim]
    header = [
        f"# demonstration dim={dim} rate={_fmt(demo.sample_rate)} label={demo.label}",
        "# t " + " ".join(axes) + " " + " ".join(f"f{a}" for a in axes),
    ]
    rows = [
        " ".join(_fmt(v) for v in (t, *p, *f))
        for t, p, f in zip(demo.times, demo.positions, demo.forces)
    ]
    Path(path).write_text("\n".join(header + rows) + "\n")


def load_demonstration(path) -> Demonstration:
    dim = None
    rate = None
    label = ""
    records = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "demonstration" in line:
                for token in line[1:].split():
                    if token.startswith("dim="):
                        dim = int(token[4:])
                    elif token.startswith("rate="):
                        rate = float(token[5:])
                    elif token.startswith("label="):
                        label = token[6:]
            continue
        fields = line.split()
        if dim is None:
            raise ParseError(path, lineno, "record before the header line")
        if len(fields) != 1 + 2 * dim:
            raise ParseError(path, lineno, f"expected {1 + 2 * dim} fields, got {len(fields)}")
        try:
            records.append([float(f) for f in fields])
        except ValueError as exc:
            raise ParseError(path, lineno, f"bad number: {exc}") from exc
    if dim is None or rate is None:
        raise ParseError(path, 1, "missing demonstration header")
    data = np.array(records)
    if len(data) < 2:
        raise ParseError(path, 1, "demonstration needs at least 2 records")
    return Demonstration(
        times=data[:, 0],
        positions=data[:, 1 : 1 + dim],
        forces=data[:, 1 + dim :],
        sample_rate=rate,
        label=label,
    )


# ---------------------------------------------------------------------------
# Master-input streams: t x y per line


def save_master_stream(stream: MasterStream, path) -> None:
    lines = ["# master input: t x y"]
    lines += [
        " ".join(_fmt(v) for v in (t, *p))
        for t, p in zip(stream.times, stream.positions)
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def load_master_stream(path) -> MasterStream:
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(path, lineno, f"expected 3 fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise ParseError(path, lineno, f"bad number: {exc}") from exc
    if not rows:
        raise ParseError(path, 1, "empty master stream")
    data = np.array(rows)
    return MasterStream(times=data[:, 0], positions=data[:, 1:])


# ---------------------------------------------------------------------------
# Controller and session config documents (JSON, matrices row-major)


def controller_to_dict(controller: LearnedController) -> dict:
    return {
        "desired_direction": [float(v) for v in controller.desired_direction],
        "stiffness": _matrix(controller.stiffness),
        "damping": _matrix(controller.damping),
        "position_gain": _matrix(controller.gains.position_gain),
        "force_gain": _matrix(controller.gains.force_gain),
        "trajectory_length": float(controller.trajectory_length),
        "n_compliant": int(controller.n_compliant),
    }


def controller_from_dict(doc: dict) -> LearnedController:
    return LearnedController(
        desired_direction=np.array(doc["desired_direction"]),
        stiffness=np.array(doc["stiffness"]),
        damping=np.array(doc["damping"]),
        gains=ControlGains(
            position_gain=np.array(doc["position_gain"]),
            force_gain=np.array(doc["force_gain"]),
        ),
        trajectory_length=doc["trajectory_length"],
        n_compliant=doc.get("n_compliant", 0),
    )


def save_controller(controller: LearnedController, path) -> None:
    Path(path).write_text(json.dumps(controller_to_dict(controller), indent=2) + "\n")


def load_controller(path) -> LearnedController:
    return controller_from_dict(json.loads(Path(path).read_text()))


def config_to_dict(cfg: SessionConfig) -> dict:
    m = cfg.manipulator
    c = cfg.coupling
    e = cfg.estimator
    l = cfg.learning
    return {
        "manipulator": {
            "link_lengths": list(m.link_lengths),
            "payload_mass": m.payload_mass,
            "base_origin": list(m.base_origin),
            "servo_time_constant": m.servo_time_constant,
            "servo_admittance": m.servo_admittance,
            "elbow": m.elbow,
        },
        "environment": {
            "surfaces": [
                {
                    "start": list(s.start),
                    "end": list(s.end),
                    "stiffness": s.stiffness,
                    "damping": s.damping,
                    "friction": s.friction,
                }
                for s in cfg.environment.surfaces
            ]
        },
        "coupling": {
            "position_gain": _matrix(c.position_gain),
            "force_gain": _matrix(c.force_gain),
            "position_scale": c.position_scale,
            "force_scale": c.force_scale,
            "filter_cutoff": c.filter_cutoff,
        },
        "estimator": {
            "velocity_bias_gain": e.velocity_bias_gain,
            "acceleration_bias_gain": e.acceleration_bias_gain,
            "constant_bias": list(e.constant_bias),
            "noise_std": e.noise_std,
            "seed": e.seed,
        },
        "learning": {
            "alpha": l.alpha,
            "outlier_fraction": l.outlier_fraction,
            "sigma": l.sigma,
            "k_stiff": l.k_stiff,
            "compliance_ratio": l.compliance_ratio,
            "damping": _matrix(l.damping_matrix),
            "min_motion": l.min_motion,
            "contact_threshold": l.contact_threshold,
            "target_rate": l.target_rate,
        },
        "sim_rate": cfg.sim_rate,
        "trajectory_duration": cfg.trajectory_duration,
        "start_position": list(cfg.start_position),
        "desired_force": list(cfg.desired_force),
    }


def config_from_dict(doc: dict) -> SessionConfig:
    m = doc.get("manipulator", {})
    env = doc.get("environment", {})
    c = doc.get("coupling")
    e = doc.get("estimator", {})
    l = doc.get("learning", {})
    coupling = (
        CouplingConfig(
            position_gain=np.array(c["position_gain"]),
            force_gain=np.array(c["force_gain"]),
            position_scale=c.get("position_scale", 10.0),
            force_scale=c.get("force_scale", 0.0),
            filter_cutoff=c.get("filter_cutoff", 20.0),
        )
        if c
        else CouplingConfig.default()
    )
    return SessionConfig(
        manipulator=ManipulatorModel(
            link_lengths=tuple(m.get("link_lengths", (1.6, 1.6))),
            payload_mass=m.get("payload_mass", 475.0),
            base_origin=tuple(m.get("base_origin", (0.0, 0.0))),
            servo_time_constant=m.get("servo_time_constant", 0.05),
            servo_admittance=m.get("servo_admittance", 5e-5),
            elbow=m.get("elbow", "down"),
        ),
        environment=Environment(
            tuple(
                Surface(
                    tuple(s["start"]),
                    tuple(s["end"]),
                    stiffness=s["stiffness"],
                    damping=s.get("damping", 0.0),
                    friction=s.get("friction", 0.0),
                )
                for s in env.get("surfaces", ())
            )
        ),
        coupling=coupling,
        estimator=EstimatorConfig(
            velocity_bias_gain=e.get("velocity_bias_gain", 0.0),
            acceleration_bias_gain=e.get("acceleration_bias_gain", 0.0),
            constant_bias=tuple(e.get("constant_bias", (0.0, 0.0))),
            noise_std=e.get("noise_std", 0.0),
            seed=e.get("seed", 0),
        ),
        learning=LearningParams(
            alpha=l.get("alpha", float(np.radians(10.0))),
            outlier_fraction=l.get("outlier_fraction", 0.1),
            sigma=l.get("sigma", 0.15),
            k_stiff=l.get("k_stiff", 4.0e4),
            compliance_ratio=l.get("compliance_ratio", 0.1),
            damping=tuple(tuple(row) for row in l.get("damping", ((2.0e3, 0.0), (0.0, 2.4e3)))),
            min_motion=l.get("min_motion", 1e-3),
            contact_threshold=l.get("contact_threshold", 1.0),
            target_rate=l.get("target_rate", 25.0),
        ),
        sim_rate=doc.get("sim_rate", 500.0),
        trajectory_duration=doc.get("trajectory_duration", 5.0),
        start_position=tuple(doc.get("start_position", (1.2, 1.0))),
        desired_force=tuple(doc.get("desired_force", (0.0, 0.0))),
    )


def save_session_config(cfg: SessionConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(cfg), indent=2) + "\n")


def load_session_config(path) -> SessionConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, exc.msg) from exc
    return config_from_dict(doc)


# ---------------------------------------------------------------------------
# Session logs: replayable record of a whole run


def save_session_log(log: SessionLog, cfg: SessionConfig, path) -> None:
    doc = {
        "mode": log.mode,
        "seed": log.seed,
        "workspace_violations": log.workspace_violations,
        "metrics": log.metrics,
        "config": config_to_dict(cfg),
    }
    if log.master_stream is not None:
        doc["master_stream"] = {
            "times": [float(t) for t in log.master_stream.times],
            "positions": _matrix(log.master_stream.positions),
        }
    if log.demonstration is not None:
        d = log.demonstration
        doc["demonstration"] = {
            "times": [float(t) for t in d.times],
            "positions": _matrix(d.positions),
            "forces": _matrix(d.forces),
            "sample_rate": d.sample_rate,
            "label": d.label,
        }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_session_log(path):
    """Returns (mode, seed, config, master_stream, demonstration, metrics)."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, exc.msg) from exc
    cfg = config_from_dict(doc["config"])
    stream = None
    if "master_stream" in doc:
        stream = MasterStream(
            times=np.array(doc["master_stream"]["times"]),
            positions=np.array(doc["master_stream"]["positions"]),
        )
    demo = None
    if "demonstration" in doc:
        d = doc["demonstration"]
        demo = Demonstration(
            times=np.array(d["times"]),
            positions=np.array(d["positions"]),
            forces=np.array(d["forces"]),
            sample_rate=d["sample_rate"],
            label=d.get("label", ""),
        )
    return doc["mode"], doc["seed"], cfg, stream, demo, doc.get("metrics", {})


# ---------------------------------------------------------------------------
# Plot data for reproduction runs: CSV of t, position, forces per axis


def save_plot_data(trace: SessionTrace, path) -> None:
    header = "t,x,y,fx,fy,desired_x,desired_y"
    desired = trace.desired_positions
    if desired is None:
        desired = np.full_like(trace.positions, np.nan)
    rows = [header]
    for i in range(len(trace)):
        rows.append(
            ",".join(
                _fmt(v)
                for v in (
                    trace.times[i],
                    *trace.positions[i],
                    *trace.estimated_forces[i],
                    *desired[i],
                )
            )
        )
    Path(path).write_text("\n".join(rows) + "\n")
