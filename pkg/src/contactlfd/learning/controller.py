"""Stiffness construction and controller assembly from a learned model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..impedance import ControlGains, ImpedanceSpec, gains_from_impedance
from .compliance import ComplianceModel, perpendicular_basis


def build_stiffness(
    desired_direction,
    model: ComplianceModel,
    k_stiff: float,
    compliance_ratio: float,
) -> np.ndarray:
    """Stiffness matrix: full stiffness along the desired direction and
    any remaining stiff axes, reduced stiffness on each compliant axis.

    K = R diag(...) R^T with the desired direction as the first column of
    R; symmetric positive-definite by construction.
    """
    if k_stiff <= 0.0:
        raise ValueError("k_stiff must be positive")
    if not 0.0 < compliance_ratio <= 1.0:
        raise ValueError("compliance_ratio must lie in (0, 1]")
    v = np.asarray(desired_direction, dtype=float)
    v = v / np.linalg.norm(v)
    dim = v.shape[0]

    columns = [v]
    values = [k_stiff]
    for axis in model.compliant_directions:
        columns.append(np.asarray(axis, dtype=float))
        values.append(compliance_ratio * k_stiff)
    # Complete with stiff axes spanning the rest of the perpendicular.
    for cand in perpendicular_basis(v):
        if len(columns) == dim:
            break
        rest = np.asarray(cand, dtype=float).copy()
        for c in columns[1:]:
            rest -= np.dot(rest, c) * c
        norm = np.linalg.norm(rest)
        if norm > 1e-9:
            columns.append(rest / norm)
            values.append(k_stiff)
    rotation = np.column_stack(columns)
    return rotation @ np.diag(values) @ rotation.T


@dataclass(frozen=True)
class LearnedController:
    """Everything reproduction needs: direction, impedance, gains, length."""

    desired_direction: np.ndarray
    stiffness: np.ndarray
    damping: np.ndarray
    gains: ControlGains
    trajectory_length: float
    n_compliant: int = 0

    def __post_init__(self):
        v = np.asarray(self.desired_direction, dtype=float)
        object.__setattr__(self, "desired_direction", v / np.linalg.norm(v))
        object.__setattr__(self, "stiffness", np.asarray(self.stiffness, dtype=float))
        object.__setattr__(self, "damping", np.asarray(self.damping, dtype=float))
        if self.trajectory_length <= 0.0:
            raise ValueError("trajectory_length must be positive")


def assemble_controller(
    model: ComplianceModel,
    k_stiff: float,
    compliance_ratio: float,
    damping,
    trajectory_length: float,
) -> LearnedController:
    """Build stiffness from the compliance model, derive the control gains
    and package them with the motion direction and length.

    Raises whatever gain derivation raises if the damping or the resulting
    gains are unusable, so an ill-posed controller never ships.
    """
    stiffness = build_stiffness(
        model.desired_direction, model, k_stiff, compliance_ratio
    )
    spec = ImpedanceSpec(damping=np.asarray(damping, dtype=float), stiffness=stiffness)
    gains = gains_from_impedance(spec)
    return LearnedController(
        desired_direction=model.desired_direction,
        stiffness=stiffness,
        damping=spec.damping,
        gains=gains,
        trajectory_length=trajectory_length,
        n_compliant=model.n_compliant,
    )
