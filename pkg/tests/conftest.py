"""Shared scenario builders: simulated sliding and free-space sessions."""

from dataclasses import replace

import numpy as np
import pytest

from contactlfd import Environment, EstimatorConfig, Surface
from contactlfd.learning import Demonstration, LearningParams
from contactlfd.session import MasterStream, SessionConfig, run_demonstration

SURFACE_Y = 0.55
STIFF_K = 2.0e6
SOFT_K = 2.0e5


def horizontal_environment(stiffness=STIFF_K, friction=0.5) -> Environment:
    damping = 5.0e3 * np.sqrt(stiffness / STIFF_K)
    return Environment(
        (Surface((0.5, SURFACE_Y), (3.0, SURFACE_Y), stiffness=stiffness,
                 damping=damping, friction=friction),)
    )


def sliding_session_config(stiffness=STIFF_K, friction=0.5) -> SessionConfig:
    return SessionConfig(
        environment=horizontal_environment(stiffness, friction),
        start_position=(1.2, 0.8),
    )


# Master strokes at desk scale (position scale 10): approach, press about
# 7 cm below the surface at slave scale, slide along it.
SLIDE_STROKES = [
    ((0.12, 0.048), (0.22, 0.044)),
    ((0.13, 0.047), (0.21, 0.043)),
    ((0.12, 0.049), (0.23, 0.045)),
    ((0.11, 0.048), (0.22, 0.044)),
]


def slide_stream(index: int) -> MasterStream:
    (x0, depth), (x1, depth1) = SLIDE_STROKES[index]
    return MasterStream.from_waypoints([
        (0.0, x0, 0.080),
        (1.0, x0, 0.060),
        (2.0, x0, depth),
        (7.0, x1, depth1),
        (7.5, x1, depth1),
    ])


def record_slide(index: int, noisy: bool = False, friction: float = 0.5) -> Demonstration:
    cfg = sliding_session_config(friction=friction)
    if noisy:
        cfg = replace(
            cfg,
            estimator=EstimatorConfig(
                noise_std=50.0, velocity_bias_gain=200.0, seed=100 + index
            ),
        )
    else:
        cfg = cfg.with_seed(index)
    return run_demonstration(cfg, slide_stream(index)).demonstration


def free_space_demos(direction=(0.8, 0.6), speeds=(0.10, 0.12, 0.09, 0.11)):
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    demos = []
    for i, speed in enumerate(speeds):
        t = np.arange(0.0, 4.0, 0.04)
        pos = np.array([1.0, 0.8]) + np.outer(t * speed, direction)
        demos.append(
            Demonstration(t, pos, np.zeros_like(pos), sample_rate=25.0, label=f"free{i}")
        )
    return demos


@pytest.fixture(scope="session")
def clean_slides():
    return [record_slide(i) for i in range(4)]


@pytest.fixture(scope="session")
def noisy_slides():
    return [record_slide(i, noisy=True) for i in range(4)]


@pytest.fixture(scope="session")
def noiseless_params() -> LearningParams:
    return LearningParams()


@pytest.fixture(scope="session")
def noisy_params() -> LearningParams:
    return LearningParams.for_noise(50.0)
