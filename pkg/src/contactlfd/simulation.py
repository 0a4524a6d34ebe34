"""Planar manipulator plant with penalty contact and Coulomb friction.

The plant is a two-link arm whose tip carries the payload. An idealized
inner servo tracks a commanded required velocity with a first-order lag,
plus a small admittance so that contact forces saturate instead of growing
without bound. Contact with piecewise-linear surfaces is penalty-based:
spring-damper along the surface normal (compression only) and regularized
Coulomb friction along the tangent.

Sign convention: ``contact_force`` returns the force the tool exerts on
the environment, expressed in the base frame. The reaction the tool feels
is its negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kinematics

# Tangential speed below which friction ramps linearly to zero, to avoid
# chatter at sticking.
FRICTION_REGULARIZATION_SPEED = 1e-3  # m/s

# Keep the tip strictly inside the annulus so the Jacobian stays invertible.
_OUTER_MARGIN = 1e-3  # m
_INNER_MARGIN = 0.05  # m


@dataclass(frozen=True)
class ManipulatorModel:
    """Geometry and inner-servo parameters of the simulated arm."""

    link_lengths: tuple[float, float] = (1.6, 1.6)
    payload_mass: float = 475.0
    base_origin: tuple[float, float] = (0.0, 0.0)
    servo_time_constant: float = 0.05  # s
    servo_admittance: float = 5e-5  # (m/s)/N, saturates contact forces
    elbow: str = "down"

    def __post_init__(self):
        if min(self.link_lengths) <= 0.0:
            raise ValueError("link lengths must be positive")
        if self.payload_mass < 0.0:
            raise ValueError("payload_mass must be >= 0")
        if self.servo_time_constant <= 0.0:
            raise ValueError("servo_time_constant must be positive")

    @property
    def reach(self) -> float:
        return float(sum(self.link_lengths))

    @property
    def base(self) -> np.ndarray:
        return np.asarray(self.base_origin, dtype=float)

    def forward_kinematics(self, q) -> np.ndarray:
        """Tip position in the base frame."""
        return self.base + kinematics.forward_kinematics(self.link_lengths, q)

    def inverse_kinematics(self, tip) -> np.ndarray:
        return kinematics.inverse_kinematics(
            self.link_lengths, np.asarray(tip, dtype=float) - self.base, self.elbow
        )

    def jacobian(self, q) -> np.ndarray:
        return kinematics.jacobian(self.link_lengths, q)


@dataclass(frozen=True)
class Surface:
    """One-sided line segment. The outward normal is the left perpendicular
    of (end - start), so contact acts on tools approaching from that side."""

    start: tuple[float, float]
    end: tuple[float, float]
    stiffness: float  # N/m
    damping: float = 0.0  # N*s/m
    friction: float = 0.0  # Coulomb coefficient

    def __post_init__(self):
        if self.stiffness <= 0.0:
            raise ValueError("surface stiffness must be positive")
        if self.damping < 0.0:
            raise ValueError("surface damping must be >= 0")
        if not 0.0 <= self.friction < 1.5:
            raise ValueError("friction coefficient must lie in [0, 1.5)")
        if np.allclose(self.start, self.end):
            raise ValueError("surface endpoints coincide")

    @property
    def normal(self) -> np.ndarray:
        d = np.asarray(self.end, dtype=float) - np.asarray(self.start, dtype=float)
        n = np.array([-d[1], d[0]])
        return n / np.linalg.norm(n)

    def penetration(self, position) -> float:
        """Depth below the surface, 0 if not in contact."""
        a = np.asarray(self.start, dtype=float)
        d = np.asarray(self.end, dtype=float) - a
        rel = np.asarray(position, dtype=float) - a
        along = np.dot(rel, d) / np.dot(d, d)
        if along < 0.0 or along > 1.0:
            return 0.0
        depth = -np.dot(rel, self.normal)
        return float(max(0.0, depth))


@dataclass(frozen=True)
class Environment:
    """Collection of contact surfaces."""

    surfaces: tuple[Surface, ...] = ()

    def max_penetration(self, position) -> float:
        if not self.surfaces:
            return 0.0
        return max(s.penetration(position) for s in self.surfaces)


@dataclass(frozen=True)
class CartesianState:
    """Tip state in the base frame: position, velocity, and the force the
    tool currently exerts on the environment."""

    position: np.ndarray
    velocity: np.ndarray
    contact_force: np.ndarray

    @staticmethod
    def at_rest(position) -> "CartesianState":
        p = np.asarray(position, dtype=float)
        return CartesianState(p, np.zeros_like(p), np.zeros_like(p))


@dataclass(frozen=True)
class WorldState:
    """Full simulator state. ``tip_state.position`` always equals the
    forward kinematics of ``joint_angles``."""

    joint_angles: np.ndarray
    joint_velocities: np.ndarray
    tip_state: CartesianState
    time: float = 0.0
    workspace_limited: bool = False


def contact_force(env: Environment, position, velocity) -> np.ndarray:
    """Force the tool exerts on the environment (base frame).

    Zero without penetration. Otherwise, per penetrating surface, the tool
    feels a normal reaction ``k*depth + c*depth_rate`` (clamped compressive)
    plus Coulomb friction ``mu*|N|`` opposing its tangential velocity,
    ramped linearly below FRICTION_REGULARIZATION_SPEED; the returned force
    is the negated sum of those reactions.
    """
    p = np.asarray(position, dtype=float)
    v = np.asarray(velocity, dtype=float)
    reaction = np.zeros(2)
    for surface in env.surfaces:
        depth = surface.penetration(p)
        if depth <= 0.0:
            continue
        n = surface.normal
        depth_rate = -np.dot(v, n)
        normal_mag = surface.stiffness * depth + surface.damping * depth_rate
        if normal_mag <= 0.0:
            continue  # separating faster than the spring pushes; never adhesive
        v_t = v - np.dot(v, n) * n
        speed_t = np.linalg.norm(v_t)
        friction = np.zeros(2)
        if surface.friction > 0.0 and speed_t > 0.0:
            scale = min(1.0, speed_t / FRICTION_REGULARIZATION_SPEED)
            friction = -surface.friction * normal_mag * scale * (v_t / speed_t)
        reaction += normal_mag * n + friction
    return -reaction


@dataclass
class ArmSimulator:
    """Steps a WorldState under commanded required velocities.

    Single-writer: one owner advances the state; returned states are
    immutable snapshots safe to share.
    """

    model: ManipulatorModel = field(default_factory=ManipulatorModel)
    environment: Environment = field(default_factory=Environment)

    def initial_state(self, tip_position) -> WorldState:
        q = self.model.inverse_kinematics(tip_position)
        tip = self.model.forward_kinematics(q)
        force = contact_force(self.environment, tip, np.zeros(2))
        return WorldState(
            joint_angles=q,
            joint_velocities=np.zeros(2),
            tip_state=CartesianState(tip, np.zeros(2), force),
            time=0.0,
        )

    def step(self, world: WorldState, required_velocity, dt: float) -> WorldState:
        """Advance one step of duration ``dt`` (semi-implicit).

        The realized tip velocity relaxes toward the command plus the servo
        admittance times the environment reaction, then the position is
        integrated and mapped back through exact inverse kinematics. At the
        workspace boundary the velocity is projected to keep the tip
        strictly inside and the state is flagged.
        """
        if not 0.0 < dt <= 0.01:
            raise ValueError("dt must lie in (0, 0.01] s")
        cmd = np.asarray(required_velocity, dtype=float)
        pos = world.tip_state.position
        vel = world.tip_state.velocity

        tool_on_env = contact_force(self.environment, pos, vel)
        target = cmd + self.model.servo_admittance * (-tool_on_env)
        decay = np.exp(-dt / self.model.servo_time_constant)
        new_vel = target + (vel - target) * decay

        new_pos = pos + new_vel * dt
        limited = False
        radial = new_pos - self.model.base
        r = np.linalg.norm(radial)
        r_max = self.model.reach - _OUTER_MARGIN
        r_min = max(abs(self.model.link_lengths[0] - self.model.link_lengths[1]),
                    _INNER_MARGIN)
        if r > r_max or r < r_min:
            limited = True
            r_clamped = min(max(r, r_min), r_max)
            new_pos = self.model.base + radial * (r_clamped / r)
            new_vel = (new_pos - pos) / dt

        q = self.model.inverse_kinematics(new_pos)
        new_pos = self.model.forward_kinematics(q)  # re-evaluate: consistency invariant
        jac = self.model.jacobian(q)
        joint_vel = np.linalg.solve(jac, new_vel)
        force = contact_force(self.environment, new_pos, new_vel)
        return WorldState(
            joint_angles=q,
            joint_velocities=joint_vel,
            tip_state=CartesianState(new_pos, new_vel, force),
            time=world.time + dt,
            workspace_limited=limited,
        )
