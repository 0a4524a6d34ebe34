"""Session orchestration: demonstration recording and reproduction runs.

Every human-in-the-loop flow has a headless twin driven by a scripted
master-input stream, so teleoperation, learning and reproduction are all
testable without a UI. Runs are deterministic given the stream, the
configuration and the estimator seed. The incremental steppers below are
the single implementation of the control loops; the batch runners and the
live service both drive them, which is what makes live logs replayable
bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .estimation import EstimatorConfig, ForceEstimator
from .impedance import QuinticTrajectory, required_velocity
from .learning import Demonstration, LearnedController, LearningParams
from .simulation import ArmSimulator, Environment, ManipulatorModel
from .teleop import BilateralCoupling, CouplingConfig, master_required_velocity, slave_required_velocity


@dataclass(frozen=True)
class MasterStream:
    """Scripted or recorded master positions, zero-order-held between
    samples. Before the first sample the first position holds."""

    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.positions, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)
        if len(t) == 0 or p.shape != (len(t), 2):
            raise ValueError("stream needs times (n,) and positions (n, 2), n >= 1")
        if np.any(np.diff(t) < 0.0):
            raise ValueError("stream timestamps must be non-decreasing")

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def sample(self, t: float) -> np.ndarray:
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        return self.positions[max(idx, 0)].copy()

    @staticmethod
    def hold(position, duration: float) -> "MasterStream":
        return MasterStream(np.array([0.0, duration]), np.array([position, position]))

    @staticmethod
    def from_waypoints(waypoints, rate: float = 100.0) -> "MasterStream":
        """Piecewise-linear path through (t, x, y) waypoints, sampled at a
        fixed rate so the zero-order hold stays smooth."""
        wp = np.asarray(waypoints, dtype=float)
        t_end = wp[-1, 0]
        times = np.arange(0.0, t_end + 0.5 / rate, 1.0 / rate)
        xs = np.interp(times, wp[:, 0], wp[:, 1])
        ys = np.interp(times, wp[:, 0], wp[:, 2])
        return MasterStream(times, np.column_stack([xs, ys]))


@dataclass(frozen=True)
class SessionConfig:
    """Everything a session needs, in one document."""

    manipulator: ManipulatorModel = field(default_factory=ManipulatorModel)
    environment: Environment = field(default_factory=Environment)
    coupling: CouplingConfig = field(default_factory=CouplingConfig.default)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    learning: LearningParams = field(default_factory=LearningParams)
    sim_rate: float = 500.0  # Hz
    trajectory_duration: float = 5.0  # s, reproduction
    start_position: tuple[float, float] = (1.2, 1.0)
    desired_force: tuple[float, float] = (0.0, 0.0)  # reproduction setpoint

    @property
    def dt(self) -> float:
        return 1.0 / self.sim_rate

    def with_environment(self, env: Environment) -> "SessionConfig":
        return replace(self, environment=env)

    def with_seed(self, seed: int) -> "SessionConfig":
        return replace(self, estimator=replace(self.estimator, seed=seed))


@dataclass
class StepSample:
    """One tick of a session loop."""

    time: float
    master_position: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    true_force: np.ndarray
    estimated_force: np.ndarray
    penetration: float
    joint_angles: np.ndarray
    workspace_limited: bool
    desired_position: np.ndarray | None = None


class TeleopStepper:
    """Incremental teleoperation loop: one tick per master sample."""

    def __init__(self, cfg: SessionConfig, start_position=None):
        self.cfg = cfg
        self.sim = ArmSimulator(cfg.manipulator, cfg.environment)
        self.world = self.sim.initial_state(
            cfg.start_position if start_position is None else start_position
        )
        self.coupling = BilateralCoupling(cfg.coupling)
        self.estimator = ForceEstimator(cfg.estimator)
        self._master_prev: np.ndarray | None = None
        self._velocity_prev = self.world.tip_state.velocity
        self._master_force = np.zeros(2)  # no haptic device attached

    def tick(self, master_position) -> StepSample:
        cfg = self.cfg
        dt = cfg.dt
        master_pos = np.asarray(master_position, dtype=float)
        if self._master_prev is None:
            master_vel = np.zeros(2)
        else:
            master_vel = (master_pos - self._master_prev) / dt
        self._master_prev = master_pos

        signals = self.coupling.update(
            master_position=master_pos,
            master_velocity=master_vel,
            master_force=self._master_force,
            slave_position=self.world.tip_state.position,
            slave_velocity=self.world.tip_state.velocity,
            slave_force=self.world.tip_state.contact_force,
            dt=dt,
        )
        command = slave_required_velocity(signals, cfg.coupling)
        master_required_velocity(signals, cfg.coupling)  # exercised, unactuated master
        self.world = self.sim.step(self.world, command, dt)

        acceleration = (self.world.tip_state.velocity - self._velocity_prev) / dt
        self._velocity_prev = self.world.tip_state.velocity
        estimate = self.estimator.estimate(
            self.world.tip_state.contact_force, self.world.tip_state.velocity, acceleration
        )
        return StepSample(
            time=self.world.time,
            master_position=master_pos,
            position=self.world.tip_state.position,
            velocity=self.world.tip_state.velocity,
            true_force=self.world.tip_state.contact_force,
            estimated_force=estimate,
            penetration=cfg.environment.max_penetration(self.world.tip_state.position),
            joint_angles=self.world.joint_angles,
            workspace_limited=self.world.workspace_limited,
        )


class ReproductionStepper:
    """Incremental reproduction loop along a learned direction."""

    def __init__(
        self,
        cfg: SessionConfig,
        controller: LearnedController,
        start_position,
        duration: float | None = None,
    ):
        self.cfg = cfg
        self.controller = controller
        self.duration = cfg.trajectory_duration if duration is None else duration
        self.trajectory = QuinticTrajectory.from_direction(
            np.asarray(start_position, dtype=float),
            controller.desired_direction,
            controller.trajectory_length,
            self.duration,
        )
        self.sim = ArmSimulator(cfg.manipulator, cfg.environment)
        self.world = self.sim.initial_state(start_position)
        self.estimator = ForceEstimator(cfg.estimator)
        self._desired_force = np.asarray(cfg.desired_force, dtype=float)
        self._velocity_prev = self.world.tip_state.velocity
        self._estimate = self.estimator.estimate(
            self.world.tip_state.contact_force, self.world.tip_state.velocity, np.zeros(2)
        )
        self._step = 0

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.cfg.dt))

    @property
    def done(self) -> bool:
        return self._step >= self.n_steps

    def tick(self) -> StepSample:
        cfg = self.cfg
        dt = cfg.dt
        t = self._step * dt
        desired_pos, desired_vel, _ = self.trajectory.sample(t)
        command = required_velocity(
            desired_vel,
            desired_pos,
            self.world.tip_state.position,
            self._desired_force,
            self._estimate,
            self.controller.gains,
        )
        self.world = self.sim.step(self.world, command, dt)
        acceleration = (self.world.tip_state.velocity - self._velocity_prev) / dt
        self._velocity_prev = self.world.tip_state.velocity
        self._estimate = self.estimator.estimate(
            self.world.tip_state.contact_force, self.world.tip_state.velocity, acceleration
        )
        self._step += 1
        return StepSample(
            time=self.world.time,
            master_position=np.zeros(2),
            position=self.world.tip_state.position,
            velocity=self.world.tip_state.velocity,
            true_force=self.world.tip_state.contact_force,
            estimated_force=self._estimate,
            penetration=cfg.environment.max_penetration(self.world.tip_state.position),
            joint_angles=self.world.joint_angles,
            workspace_limited=self.world.workspace_limited,
            desired_position=desired_pos,
        )


@dataclass
class SessionTrace:
    """Per-step arrays of one run, for logging and plotting."""

    times: np.ndarray
    master_positions: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    true_forces: np.ndarray
    estimated_forces: np.ndarray
    penetrations: np.ndarray
    desired_positions: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.times)

    @staticmethod
    def from_samples(samples: list[StepSample]) -> "SessionTrace":
        desired = None
        if samples and samples[0].desired_position is not None:
            desired = np.array([s.desired_position for s in samples])
        return SessionTrace(
            times=np.array([s.time for s in samples]),
            master_positions=np.array([s.master_position for s in samples]),
            positions=np.array([s.position for s in samples]),
            velocities=np.array([s.velocity for s in samples]),
            true_forces=np.array([s.true_force for s in samples]),
            estimated_forces=np.array([s.estimated_force for s in samples]),
            penetrations=np.array([s.penetration for s in samples]),
            desired_positions=desired,
        )


@dataclass
class SessionLog:
    """Outcome of one demonstration or reproduction run."""

    mode: str  # "demonstrate" | "reproduce"
    demonstration: Demonstration | None
    metrics: dict
    trace: SessionTrace
    master_stream: MasterStream | None = None
    seed: int = 0
    workspace_violations: int = 0


def _metrics_from_trace(trace: SessionTrace) -> dict:
    force_mag = np.linalg.norm(trace.true_forces, axis=1)
    in_contact = force_mag > 0.0
    n = len(trace.times)
    dt = float(trace.times[1] - trace.times[0]) if n > 1 else 0.0
    metrics = {
        "duration": float(n * dt),
        "contact_time": float(in_contact.sum() * dt),
        "contact_fraction": float(in_contact.mean()) if n else 0.0,
        "mean_force_magnitude": float(force_mag[in_contact].mean()) if in_contact.any() else 0.0,
        "peak_force_magnitude": float(force_mag.max()) if n else 0.0,
        "max_penetration": float(trace.penetrations.max()) if n else 0.0,
        "mean_penetration": float(trace.penetrations[in_contact].mean()) if in_contact.any() else 0.0,
    }
    if trace.desired_positions is not None and n:
        metrics["final_position_error"] = float(
            np.linalg.norm(trace.desired_positions[-1] - trace.positions[-1])
        )
    return metrics


def demonstration_log(
    samples: list[StepSample], cfg: SessionConfig, stream: MasterStream | None
) -> SessionLog:
    """Package teleoperation samples into a demonstration log."""
    trace = SessionTrace.from_samples(samples)
    demo = Demonstration(
        times=trace.times,
        positions=trace.positions,
        forces=trace.estimated_forces,
        sample_rate=cfg.sim_rate,
        label="recorded",
    )
    return SessionLog(
        mode="demonstrate",
        demonstration=demo,
        metrics=_metrics_from_trace(trace),
        trace=trace,
        master_stream=stream,
        seed=cfg.estimator.seed,
        workspace_violations=sum(s.workspace_limited for s in samples),
    )


def run_demonstration(
    cfg: SessionConfig,
    stream: MasterStream,
    duration: float | None = None,
) -> SessionLog:
    """Record one teleoperated demonstration from a scripted stream.

    The master is a kinematic desk-scale device following the stream; the
    slave tracks the coupling's required velocity through the simulator.
    The recorded demonstration holds the estimated (not true) forces.
    Workspace violations are flagged and counted, never fatal.
    """
    duration = stream.duration if duration is None else duration
    n_steps = int(round(duration / cfg.dt))
    if n_steps < 2:
        raise ValueError("demonstration too short for the simulation rate")
    stepper = TeleopStepper(cfg)
    samples = [stepper.tick(stream.sample(k * cfg.dt)) for k in range(n_steps)]
    return demonstration_log(samples, cfg, stream)


def run_reproduction(
    cfg: SessionConfig,
    controller: LearnedController,
    start_position,
    duration: float | None = None,
) -> SessionLog:
    """Reproduce a learned motion from a start position.

    Builds the smooth reference path along the learned direction, runs the
    required-velocity law against the simulator with estimated forces in
    the force-error term, and reports outcome metrics.
    """
    stepper = ReproductionStepper(cfg, controller, start_position, duration)
    samples = []
    while not stepper.done:
        samples.append(stepper.tick())
    trace = SessionTrace.from_samples(samples)
    return SessionLog(
        mode="reproduce",
        demonstration=None,
        metrics=_metrics_from_trace(trace),
        trace=trace,
        seed=cfg.estimator.seed,
        workspace_violations=sum(s.workspace_limited for s in samples),
    )
