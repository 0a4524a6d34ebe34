import numpy as np
import pytest

from contactlfd.learning import (
    Demonstration,
    actual_directions,
    contact_onset_index,
    mean_actual_direction,
    resample,
)
from conftest import record_slide


def make_demo(n=100, rate=500.0, dim=2, forces=None):
    t = np.arange(n) / rate
    pos = np.column_stack([np.linspace(0.0, 1.0, n)] + [np.zeros(n)] * (dim - 1))
    f = np.zeros((n, dim)) if forces is None else forces
    return Demonstration(t, pos, f, rate)


def test_validation():
    with pytest.raises(ValueError):
        Demonstration(np.array([0.0]), np.zeros((1, 2)), np.zeros((1, 2)), 500.0)
    with pytest.raises(ValueError):
        Demonstration(np.array([0.0, 0.0]), np.zeros((2, 2)), np.zeros((2, 2)), 500.0)
    with pytest.raises(ValueError):
        Demonstration(np.array([0.0, 0.1]), np.zeros((2, 2)), np.zeros((3, 2)), 500.0)


def test_resample_blocks_of_twenty():
    demo = make_demo(n=1000, rate=500.0)
    out = resample(demo, 25.0)
    assert out.sample_rate == 25.0
    assert len(out) == 50
    # Block means computed independently.
    expected_first = demo.positions[:20].mean(axis=0)
    assert np.allclose(out.positions[0], expected_first, rtol=0.0, atol=1e-15)
    # Timestamps are block centers.
    assert out.times[0] == pytest.approx(demo.times[:20].mean(), abs=1e-15)


def test_resample_constant_signal_unchanged():
    forces = np.full((1000, 2), 7.5)
    demo = make_demo(n=1000, forces=forces)
    out = resample(demo, 25.0)
    assert np.allclose(out.forces, 7.5, rtol=0.0, atol=1e-12)


def test_resample_alternating_blocks_average_to_zero():
    forces = np.zeros((1000, 2))
    forces[:, 0] = np.tile([1.0, -1.0], 500)
    demo = make_demo(n=1000, forces=forces)
    out = resample(demo, 25.0)
    assert np.allclose(out.forces[:, 0], 0.0, atol=1e-15)


def test_resample_mean_preserving_per_block():
    rng = np.random.default_rng(5)
    forces = rng.normal(0.0, 100.0, (1000, 2))
    demo = make_demo(n=1000, forces=forces)
    out = resample(demo, 25.0)
    blocks = forces.reshape(50, 20, 2).mean(axis=1)
    assert np.max(np.abs(out.forces - blocks)) < 1e-12


def test_resample_non_divisible_rate_rejected():
    demo = make_demo(n=1000, rate=500.0)
    with pytest.raises(ValueError):
        resample(demo, 30.0)


def test_straight_free_space_directions_identical():
    demo = make_demo(n=100)
    motion, force = actual_directions(demo, min_motion=1e-4, contact_threshold=0.0)
    assert len(motion) == 99
    assert np.allclose(motion, [1.0, 0.0])
    # No force observed: the force direction falls back to the motion.
    assert np.allclose(force, motion)


def test_stationary_samples_excluded():
    t = np.arange(10) / 500.0
    pos = np.zeros((10, 2))
    pos[5:, 0] = np.linspace(0.01, 0.05, 5)
    demo = Demonstration(t, pos, np.zeros((10, 2)), 500.0)
    motion, _ = actual_directions(demo, min_motion=1e-3)
    assert len(motion) == 5


def test_sliding_force_directions_from_simulator(clean_slides, noiseless_params):
    # Recorded while sliding +x on a horizontal surface with mu = 0.5: the
    # tool-on-environment force points into the surface tilted forward by
    # atan(mu) from straight down.
    demo = resample(clean_slides[0], 25.0)
    motion, force = actual_directions(
        demo, noiseless_params.min_motion, noiseless_params.contact_threshold
    )
    steady = slice(len(force) // 2, 3 * len(force) // 4)
    expected = np.array([np.sin(np.arctan(0.5)), -np.cos(np.arctan(0.5))])
    mean_force = force[steady].mean(axis=0)
    mean_force /= np.linalg.norm(mean_force)
    assert np.degrees(np.arccos(np.clip(np.dot(mean_force, expected), -1, 1))) < 2.0
    assert np.allclose(motion[steady][:, 0], 1.0, atol=0.05)


def test_contact_onset_requires_consecutive_run():
    forces = np.zeros((100, 2))
    forces[10, 0] = 10.0  # single blip, not contact
    forces[50:, 0] = 10.0
    demo = make_demo(n=100, forces=forces)
    assert contact_onset_index(demo, threshold=5.0) == 50
    assert contact_onset_index(demo, threshold=1e6) is None
    assert contact_onset_index(demo, threshold=0.0) == 0


def test_contact_threshold_filters_samples():
    forces = np.zeros((100, 2))
    forces[40:, 1] = -50.0
    demo = make_demo(n=100, forces=forces)
    motion, force = actual_directions(demo, 1e-4, contact_threshold=10.0)
    assert len(motion) == 59  # samples 40..98
    assert np.allclose(force, [0.0, -1.0])


def test_mean_direction_trivial():
    demo = make_demo(n=50)
    assert np.allclose(mean_actual_direction(demo, 1e-4), [1.0, 0.0])


def test_mean_direction_normalizes_mean():
    # Alternating steps +x, +y in equal measure.
    n = 41
    t = np.arange(n) / 500.0
    pos = np.zeros((n, 2))
    for i in range(1, n):
        step = np.array([0.01, 0.0]) if i % 2 else np.array([0.0, 0.01])
        pos[i] = pos[i - 1] + step
    demo = Demonstration(t, pos, np.zeros((n, 2)), 500.0)
    mean = mean_actual_direction(demo, 1e-4)
    assert np.allclose(mean, [np.sqrt(2) / 2, np.sqrt(2) / 2])


def test_mean_direction_no_motion_raises():
    t = np.arange(10) / 500.0
    demo = Demonstration(t, np.zeros((10, 2)), np.zeros((10, 2)), 500.0)
    with pytest.raises(ValueError):
        mean_actual_direction(demo, 1e-3)
