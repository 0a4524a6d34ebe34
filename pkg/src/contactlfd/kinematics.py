"""Planar two-link kinematics.

All functions take link lengths as a pair ``(l1, l2)`` and joint angles
``q = (q1, q2)`` in radians, with q1 measured from the base x-axis and q2
relative to the first link. Positions are relative to the shoulder joint.
"""

from __future__ import annotations

import numpy as np

from .errors import WorkspaceError


def forward_kinematics(link_lengths, q) -> np.ndarray:
    """Tip position of the two-link chain, relative to the base."""
    l1, l2 = link_lengths
    q1, q2 = q
    return np.array([
        l1 * np.cos(q1) + l2 * np.cos(q1 + q2),
        l1 * np.sin(q1) + l2 * np.sin(q1 + q2),
    ])


def inverse_kinematics(link_lengths, tip, elbow: str = "down") -> np.ndarray:
    """Joint angles reaching ``tip``, for the requested elbow branch.

    Args:
        link_lengths: (l1, l2) in meters.
        tip: target position relative to the base.
        elbow: "down" for q2 <= 0, "up" for q2 >= 0.

    Raises:
        WorkspaceError: target outside the reachable annulus.
    """
    l1, l2 = link_lengths
    x, y = float(tip[0]), float(tip[1])
    r2 = x * x + y * y
    reach = l1 + l2
    inner = abs(l1 - l2)
    # Allow tiny excursions from roundoff at the annulus boundaries.
    if r2 > reach * reach * (1.0 + 1e-12) or r2 < inner * inner * (1.0 - 1e-12):
        raise WorkspaceError(
            f"target ({x:.6g}, {y:.6g}) outside workspace "
            f"(|p| must lie in [{inner:.6g}, {reach:.6g}])"
        )
    cos_q2 = (r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)
    cos_q2 = min(1.0, max(-1.0, cos_q2))
    q2 = np.arccos(cos_q2)
    if elbow == "down":
        q2 = -q2
    elif elbow != "up":
        raise ValueError(f"elbow must be 'up' or 'down', got {elbow!r}")
    q1 = np.arctan2(y, x) - np.arctan2(l2 * np.sin(q2), l1 + l2 * np.cos(q2))
    return np.array([q1, q2])


def jacobian(link_lengths, q) -> np.ndarray:
    """Tip-velocity Jacobian d(tip)/d(q), shape (2, 2)."""
    l1, l2 = link_lengths
    q1, q2 = q
    s1, c1 = np.sin(q1), np.cos(q1)
    s12, c12 = np.sin(q1 + q2), np.cos(q1 + q2)
    return np.array([
        [-l1 * s1 - l2 * s12, -l2 * s12],
        [l1 * c1 + l2 * c12, l2 * c12],
    ])
