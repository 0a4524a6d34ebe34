"""Contact-force estimation surrogate.

The learner never sees the true simulated contact force. It sees an
estimate corrupted by a structured error model: terms proportional to tip
velocity and acceleration (standing in for unmodeled inertia and actuator
friction), a constant offset (residual gravity compensation error), and
white noise. All magnitudes are synthetic and configurable; zero config
makes the estimator the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EstimatorConfig:
    velocity_bias_gain: float = 0.0  # N per m/s
    acceleration_bias_gain: float = 0.0  # N per m/s^2
    constant_bias: tuple[float, ...] = (0.0, 0.0)  # N
    noise_std: float = 0.0  # N, per component
    seed: int = 0

    def __post_init__(self):
        if self.noise_std < 0.0:
            raise ValueError("noise_std must be >= 0")
        for g in (self.velocity_bias_gain, self.acceleration_bias_gain):
            if not np.isfinite(g):
                raise ValueError("bias gains must be finite")


class ForceEstimator:
    """Stateful only in its pseudo-random stream, which the seed fixes."""

    def __init__(self, config: EstimatorConfig):
        self.config = config
        self._rng = np.random.default_rng(config.seed)

    def estimate(self, true_force, velocity, acceleration) -> np.ndarray:
        cfg = self.config
        est = (
            np.asarray(true_force, dtype=float)
            + cfg.velocity_bias_gain * np.asarray(velocity, dtype=float)
            + cfg.acceleration_bias_gain * np.asarray(acceleration, dtype=float)
            + np.asarray(cfg.constant_bias, dtype=float)
        )
        if cfg.noise_std > 0.0:
            est = est + self._rng.normal(0.0, cfg.noise_std, size=est.shape)
        return est
