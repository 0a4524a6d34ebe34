"""Demonstration traces and their reduction to direction samples.

A demonstration is a timestamped trace of tool positions and estimated
contact forces recorded at the simulation rate. Learning first block-
averages it down (500 Hz to 25 Hz by default), then extracts, per sample,
the unit direction of actual motion and the unit direction of the
estimated contact force.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# A force estimate must exceed the detection threshold this many samples in
# a row before the trace counts as in contact.
CONTACT_DETECTION_RUN = 3


@dataclass(frozen=True)
class Demonstration:
    """One recorded run: times (n,), positions (n, d), forces (n, d)."""

    times: np.ndarray
    positions: np.ndarray
    forces: np.ndarray
    sample_rate: float
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.positions, dtype=float)
        f = np.asarray(self.forces, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "forces", f)
        if t.ndim != 1 or len(t) < 2:
            raise ValueError("a demonstration needs at least 2 samples")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("timestamps must be strictly increasing")
        if p.shape != (len(t), p.shape[1]) or f.shape != p.shape:
            raise ValueError("positions and forces must both be (n_samples, dim)")
        if self.sample_rate <= 0.0:
            raise ValueError("sample_rate must be positive")

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def __len__(self) -> int:
        return len(self.times)


def resample(demo: Demonstration, target_rate: float) -> Demonstration:
    """Decimate by block averaging to an integer divisor of the rate.

    Each output sample is the arithmetic mean of its block (positions,
    forces, timestamps alike, so timestamps land on block centers). A
    trailing partial block is dropped.
    """
    ratio = demo.sample_rate / target_rate
    factor = int(round(ratio))
    if factor < 1 or abs(ratio - factor) > 1e-9:
        raise ValueError(
            f"target rate {target_rate} must divide sample rate {demo.sample_rate}"
        )
    if factor == 1:
        return demo
    n_blocks = len(demo) // factor
    if n_blocks < 2:
        raise ValueError("too few samples for the requested resampling")
    n = n_blocks * factor

    def block_mean(arr):
        shape = (n_blocks, factor) + arr.shape[1:]
        return arr[:n].reshape(shape).mean(axis=1)

    return Demonstration(
        times=block_mean(demo.times),
        positions=block_mean(demo.positions),
        forces=block_mean(demo.forces),
        sample_rate=target_rate,
        label=demo.label,
    )


def contact_onset_index(demo: Demonstration, threshold: float) -> int | None:
    """Index of the first sample where the force magnitude has exceeded
    ``threshold`` for CONTACT_DETECTION_RUN consecutive samples. None if
    contact is never detected."""
    if threshold <= 0.0:
        return 0
    above = np.linalg.norm(demo.forces, axis=1) >= threshold
    run = 0
    for i, flag in enumerate(above):
        run = run + 1 if flag else 0
        if run >= CONTACT_DETECTION_RUN:
            return i - CONTACT_DETECTION_RUN + 1
    return None


def _motion_directions(demo: Demonstration, min_motion: float):
    """Per-sample unit displacement directions and the mask of samples
    whose displacement magnitude qualifies."""
    disp = np.diff(demo.positions, axis=0)
    mag = np.linalg.norm(disp, axis=1)
    ok = mag >= min_motion
    dirs = np.zeros_like(disp)
    dirs[ok] = disp[ok] / mag[ok, None]
    return dirs, ok


def actual_directions(
    demo: Demonstration,
    min_motion: float,
    contact_threshold: float = 0.0,
):
    """Unit (motion, force) direction pairs for the qualifying samples.

    With a positive ``contact_threshold`` only samples from the moment of
    contact detection onward qualify, and each must itself carry a force
    above the threshold. With a zero threshold every moving sample
    qualifies; where the force is zero, the force direction falls back to
    the motion direction (no force constraint observed).

    Returns:
        (motion_dirs, force_dirs): arrays of shape (m, dim); m may be 0.
    """
    if min_motion <= 0.0:
        raise ValueError("min_motion must be positive")
    dirs, moving = _motion_directions(demo, min_motion)
    force = demo.forces[:-1]
    force_mag = np.linalg.norm(force, axis=1)

    if contact_threshold > 0.0:
        onset = contact_onset_index(demo, contact_threshold)
        if onset is None:
            return np.zeros((0, demo.dim)), np.zeros((0, demo.dim))
        in_contact = force_mag >= contact_threshold
        in_contact[:onset] = False
        keep = moving & in_contact
        motion_dirs = dirs[keep]
        force_dirs = force[keep] / force_mag[keep, None]
        return motion_dirs, force_dirs

    keep = moving
    motion_dirs = dirs[keep]
    kept_force = force[keep]
    kept_mag = force_mag[keep]
    force_dirs = motion_dirs.copy()
    has_force = kept_mag > 0.0
    force_dirs[has_force] = kept_force[has_force] / kept_mag[has_force, None]
    return motion_dirs, force_dirs


def mean_actual_direction(
    demo: Demonstration,
    min_motion: float,
    contact_threshold: float = 0.0,
) -> np.ndarray:
    """Normalized mean of the per-sample motion directions over the
    in-contact portion (over all motion when no contact was detected)."""
    motion_dirs, _ = actual_directions(demo, min_motion, contact_threshold)
    if len(motion_dirs) == 0 and contact_threshold > 0.0:
        motion_dirs, _ = actual_directions(demo, min_motion, 0.0)
    if len(motion_dirs) == 0:
        raise ValueError(f"demonstration {demo.label!r} contains no qualifying motion")
    mean = motion_dirs.mean(axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0.0:
        raise ValueError("motion directions cancel; no mean direction exists")
    return mean / norm
