"""Target impedance law, required-velocity control law and reference paths.

The controller renders a virtual spring-damper between a desired trajectory
and the tool. Desired damping and stiffness matrices are converted into a
position gain and a force gain for the required-velocity law; with those
gains the velocity law and the spring-damper law are algebraically the same
behaviour, which ``target_impedance_residual`` lets tests verify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GainDefinitionError

_PD_TOL = 1e-9


def is_positive_definite(matrix: np.ndarray, require_symmetric: bool = True) -> bool:
    """Positive-definiteness via eigenvalues of the symmetric part."""
    m = np.asarray(matrix, dtype=float)
    if require_symmetric and not np.allclose(m, m.T, rtol=0.0, atol=_PD_TOL * max(1.0, np.abs(m).max())):
        return False
    sym = 0.5 * (m + m.T)
    return bool(np.linalg.eigvalsh(sym).min() > 0.0)


@dataclass(frozen=True)
class ImpedanceSpec:
    """Desired damping and stiffness (SI units).

    ``inertia`` is retained for completeness but never used by the control
    law, which neglects the inertia term.
    """

    damping: np.ndarray  # N*s/m
    stiffness: np.ndarray  # N/m
    inertia: np.ndarray | None = None  # kg

    def __post_init__(self):
        object.__setattr__(self, "damping", np.asarray(self.damping, dtype=float))
        object.__setattr__(self, "stiffness", np.asarray(self.stiffness, dtype=float))
        if not is_positive_definite(self.damping):
            raise ValueError("damping must be symmetric positive-definite")
        if not is_positive_definite(self.stiffness):
            raise ValueError("stiffness must be symmetric positive-definite")
        if self.inertia is not None:
            inertia = np.asarray(self.inertia, dtype=float)
            object.__setattr__(self, "inertia", inertia)
            if np.linalg.eigvalsh(0.5 * (inertia + inertia.T)).min() < -_PD_TOL:
                raise ValueError("inertia must be positive-semidefinite")


@dataclass(frozen=True)
class ControlGains:
    """Gains of the required-velocity law.

    ``position_gain`` maps position error to velocity, ``force_gain`` maps
    force error to velocity. Derived from an ImpedanceSpec they satisfy
    force_gain = damping^-1 and position_gain = damping^-1 @ stiffness.
    """

    position_gain: np.ndarray  # (m/s)/m
    force_gain: np.ndarray  # (m/s)/N

    def __post_init__(self):
        object.__setattr__(self, "position_gain", np.asarray(self.position_gain, dtype=float))
        object.__setattr__(self, "force_gain", np.asarray(self.force_gain, dtype=float))


def gains_from_impedance(spec: ImpedanceSpec) -> ControlGains:
    """Derive required-velocity gains from desired damping and stiffness.

    Raises:
        GainDefinitionError: damping singular, or a derived gain fails the
            positive-definiteness requirement (symmetric part must have
            strictly positive eigenvalues).
    """
    try:
        force_gain = np.linalg.inv(spec.damping)
    except np.linalg.LinAlgError as exc:
        raise GainDefinitionError("damping", f"damping matrix is singular: {exc}") from exc
    position_gain = force_gain @ spec.stiffness
    if not is_positive_definite(force_gain):
        raise GainDefinitionError("force_gain", "force gain is not positive-definite")
    if not is_positive_definite(position_gain, require_symmetric=False):
        raise GainDefinitionError(
            "position_gain",
            "position gain has a non-positive-definite symmetric part",
        )
    return ControlGains(position_gain=position_gain, force_gain=force_gain)


def required_velocity(
    desired_velocity,
    desired_position,
    position,
    desired_force,
    force,
    gains: ControlGains,
) -> np.ndarray:
    """Velocity reference for the inner servo.

    desired velocity, plus position gain times position error, plus force
    gain times force error.
    """
    return (
        np.asarray(desired_velocity, dtype=float)
        + gains.position_gain @ (np.asarray(desired_position, dtype=float) - np.asarray(position, dtype=float))
        + gains.force_gain @ (np.asarray(desired_force, dtype=float) - np.asarray(force, dtype=float))
    )


def target_impedance_residual(
    desired_velocity,
    velocity,
    desired_position,
    position,
    desired_force,
    force,
    spec: ImpedanceSpec,
) -> np.ndarray:
    """Residual of the spring-damper target law (zero when it holds).

    r = (F_d - F) + D (v_d - v) + K (p_d - p). Substituting the output of
    ``required_velocity`` (with gains derived from the same spec) for the
    actual velocity makes this vanish identically.
    """
    return (
        np.asarray(desired_force, dtype=float) - np.asarray(force, dtype=float)
        + spec.damping @ (np.asarray(desired_velocity, dtype=float) - np.asarray(velocity, dtype=float))
        + spec.stiffness @ (np.asarray(desired_position, dtype=float) - np.asarray(position, dtype=float))
    )


@dataclass(frozen=True)
class QuinticTrajectory:
    """Fifth-order point-to-point path with zero boundary velocity and
    acceleration. Outside [0, T] it holds the endpoint values."""

    start: np.ndarray
    end: np.ndarray
    duration: float

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ValueError("trajectory duration must be positive")
        object.__setattr__(self, "start", np.asarray(self.start, dtype=float))
        object.__setattr__(self, "end", np.asarray(self.end, dtype=float))

    @staticmethod
    def from_direction(start, direction, length: float, duration: float) -> "QuinticTrajectory":
        """Path of the given length along a unit direction."""
        start = np.asarray(start, dtype=float)
        direction = np.asarray(direction, dtype=float)
        direction = direction / np.linalg.norm(direction)
        return QuinticTrajectory(start, start + length * direction, duration)

    @property
    def displacement(self) -> np.ndarray:
        return self.end - self.start

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.displacement))

    @property
    def direction(self) -> np.ndarray:
        return self.displacement / self.length

    def sample(self, t: float):
        """Desired (position, velocity, acceleration) at time ``t``."""
        delta = self.displacement
        if t <= 0.0:
            return self.start.copy(), np.zeros_like(delta), np.zeros_like(delta)
        if t >= self.duration:
            return self.end.copy(), np.zeros_like(delta), np.zeros_like(delta)
        s = t / self.duration
        blend = 10.0 * s**3 - 15.0 * s**4 + 6.0 * s**5
        dblend = (30.0 * s**2 - 60.0 * s**3 + 30.0 * s**4) / self.duration
        ddblend = (60.0 * s - 180.0 * s**2 + 120.0 * s**3) / self.duration**2
        return self.start + blend * delta, dblend * delta, ddblend * delta
