"""End-to-end learning: demonstrations in, reproduction controller out."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .compliance import ComplianceModel, compliance_from_mean_directions
from .controller import LearnedController, assemble_controller
from .demonstration import (
    Demonstration,
    actual_directions,
    mean_actual_direction,
    resample,
)
from .directions import (
    build_direction_set,
    choose_desired_direction,
    intersect_direction_sets,
)


@dataclass(frozen=True)
class LearningParams:
    """Knobs of the learning pipeline.

    ``contact_threshold`` is the force magnitude treated as contact; pick
    it from the estimator noise level (3 sigma with a 1 N floor works).
    """

    alpha: float = np.radians(10.0)  # perpendicular extension, 3-D only
    outlier_fraction: float = 0.1
    sigma: float = 0.15  # demonstration uncertainty on the projected plane
    k_stiff: float = 4.0e4  # N/m
    compliance_ratio: float = 0.1
    damping: tuple = ((2.0e3, 0.0), (0.0, 2.4e3))  # N*s/m
    min_motion: float = 1e-3  # m per resampled step
    contact_threshold: float = 1.0  # N
    target_rate: float = 25.0  # Hz

    def __post_init__(self):
        if not 0.0 <= self.outlier_fraction < 0.5:
            raise ValueError("outlier_fraction must lie in [0, 0.5)")
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive")

    @property
    def damping_matrix(self) -> np.ndarray:
        return np.asarray(self.damping, dtype=float)

    @staticmethod
    def for_noise(noise_std: float, **overrides) -> "LearningParams":
        threshold = max(3.0 * noise_std, 1.0)
        return LearningParams(contact_threshold=threshold, **overrides)


def _prepare(demo: Demonstration, params: LearningParams) -> Demonstration:
    if demo.sample_rate != params.target_rate:
        return resample(demo, params.target_rate)
    return demo


def direction_sets_from_demo(demo: Demonstration, params: LearningParams):
    """Per-sample direction sets of one demonstration (resampled first).

    A demonstration in which contact never triggers is treated as a
    free-space motion: every moving sample contributes a degenerate sector
    along its own motion direction.
    """
    prepared = _prepare(demo, params)
    motion, force = actual_directions(
        prepared, params.min_motion, params.contact_threshold
    )
    if len(motion) == 0 and params.contact_threshold > 0.0:
        motion, force = actual_directions(prepared, params.min_motion, 0.0)
    return [
        build_direction_set(m, f, params.alpha)
        for m, f in zip(motion, force)
    ]


def learn_desired_direction(demos, params: LearningParams = LearningParams()) -> np.ndarray:
    """Desired unit direction from one or more demonstrations.

    Direction sets of all demonstrations are concatenated, intersected
    with the configured outlier allowance, and the window center is
    returned.
    """
    demos = list(demos)
    if not demos:
        raise ValueError("need at least one demonstration")
    sets = []
    for demo in demos:
        sets.extend(direction_sets_from_demo(demo, params))
    if not sets:
        raise ValueError("no demonstration produced qualifying direction samples")
    window = intersect_direction_sets(sets, params.outlier_fraction)
    return choose_desired_direction(window)


def learn_compliance(
    demos,
    desired_direction,
    params: LearningParams = LearningParams(),
) -> ComplianceModel:
    """Compliance model for a known desired direction."""
    means = [
        mean_actual_direction(_prepare(d, params), params.min_motion, params.contact_threshold)
        for d in demos
    ]
    return compliance_from_mean_directions(np.array(means), desired_direction, params.sigma)


def learn_controller(
    demos,
    params: LearningParams = LearningParams(),
    trajectory_length: float | None = None,
) -> LearnedController:
    """Full pipeline: desired direction, compliance model, stiffness,
    control gains.

    When no trajectory length is given, the mean in-contact path length of
    the demonstrations is used.
    """
    demos = list(demos)
    desired = learn_desired_direction(demos, params)
    model = learn_compliance(demos, desired, params)
    if trajectory_length is None:
        trajectory_length = float(
            np.mean([contact_path_length(_prepare(d, params), params) for d in demos])
        )
        if trajectory_length <= 0.0:
            raise ValueError("demonstrations contain no in-contact path; pass trajectory_length")
    return assemble_controller(
        model,
        params.k_stiff,
        params.compliance_ratio,
        params.damping_matrix,
        trajectory_length,
    )


def contact_path_length(demo: Demonstration, params: LearningParams) -> float:
    """Path length over the in-contact portion of a demonstration (whole
    path when contact never triggers)."""
    mag = np.linalg.norm(demo.forces, axis=1)
    mask = mag >= params.contact_threshold
    if not mask.any():
        mask = np.ones(len(demo), dtype=bool)
    steps = np.diff(demo.positions, axis=0)
    keep = mask[:-1] & mask[1:]
    return float(np.linalg.norm(steps[keep], axis=1).sum())
