import numpy as np
import pytest

from contactlfd import (
    ArmSimulator,
    Environment,
    ManipulatorModel,
    Surface,
    WorkspaceError,
    contact_force,
)

FLOOR = Surface((0.5, 0.55), (3.0, 0.55), stiffness=2.0e6, damping=0.0, friction=0.3)
ENV = Environment((FLOOR,))


def test_surface_normal_is_unit_left_perpendicular():
    s = Surface((0.0, 0.0), (2.0, 0.0), stiffness=1.0)
    assert np.allclose(s.normal, [0.0, 1.0])
    tilted = Surface((0.0, 0.0), (1.0, 1.0), stiffness=1.0)
    assert np.isclose(np.linalg.norm(tilted.normal), 1.0)


def test_surface_validation():
    with pytest.raises(ValueError):
        Surface((0, 0), (1, 0), stiffness=0.0)
    with pytest.raises(ValueError):
        Surface((0, 0), (1, 0), stiffness=1.0, friction=1.6)
    with pytest.raises(ValueError):
        Surface((0, 0), (1, 0), stiffness=1.0, damping=-1.0)


def test_no_penetration_no_force():
    assert np.allclose(contact_force(ENV, (1.2, 0.56), (0.1, 0.0)), 0.0)


def test_penalty_normal_force():
    # 1 mm static penetration of a 2e6 N/m surface: 2000 N, no friction.
    force = contact_force(ENV, (1.2, 0.549), (0.0, 0.0))
    assert np.allclose(force, [0.0, -2000.0])


def test_coulomb_force_direction():
    # Sliding +x with mu=0.3: the tool feels 600 N opposing its motion, so
    # it exerts +600 N on the environment; total points into the surface
    # and forward.
    force = contact_force(ENV, (1.2, 0.549), (0.2, 0.0))
    assert np.allclose(force, [600.0, -2000.0])


def test_sliding_force_on_friction_cone():
    # While sliding, the reaction direction deviates from the surface
    # normal by exactly atan(mu).
    force = contact_force(ENV, (1.2, 0.549), (0.2, 0.0))
    reaction = -force
    cos_angle = np.dot(reaction, FLOOR.normal) / np.linalg.norm(reaction)
    assert np.isclose(np.arccos(cos_angle), np.arctan(FLOOR.friction), atol=1e-12)


def test_friction_regularized_at_low_speed():
    crawling = contact_force(ENV, (1.2, 0.549), (5e-4, 0.0))
    assert 0.0 < crawling[0] < 600.0


def test_outside_segment_extent_no_force():
    assert np.allclose(contact_force(ENV, (4.0, 0.5), (0.0, 0.0)), 0.0)


def test_never_adhesive():
    # Separating faster than the spring pushes: damping would make the
    # normal force negative, which must clamp to zero.
    env = Environment((Surface((0.5, 0.55), (3.0, 0.55), stiffness=1e4, damping=1e5),))
    force = contact_force(env, (1.2, 0.5495), (0.0, 1.0))
    assert np.allclose(force, 0.0)


def make_sim(env=ENV):
    return ArmSimulator(ManipulatorModel(), env)


def test_step_equilibrium():
    sim = make_sim()
    world = sim.initial_state((1.2, 0.8))
    stepped = sim.step(world, np.zeros(2), 0.002)
    assert np.allclose(stepped.tip_state.position, world.tip_state.position)
    assert np.allclose(stepped.tip_state.velocity, 0.0)
    assert stepped.time == pytest.approx(0.002)


def test_step_rejects_bad_dt():
    sim = make_sim()
    world = sim.initial_state((1.2, 0.8))
    for dt in (0.0, -0.001, 0.02):
        with pytest.raises(ValueError):
            sim.step(world, np.zeros(2), dt)


def test_first_order_lag_reaches_command():
    sim = make_sim(Environment())
    world = sim.initial_state((1.2, 0.8))
    cmd = np.array([0.1, 0.0])
    for _ in range(500):  # 1 s >> 0.05 s time constant
        world = sim.step(world, cmd, 0.002)
    assert np.linalg.norm(world.tip_state.velocity - cmd) < 0.01 * np.linalg.norm(cmd)


def test_steady_contact_force_balances_servo_admittance():
    model = ManipulatorModel()
    sim = ArmSimulator(model, ENV)
    world = sim.initial_state((1.2, 0.552))
    cmd = np.array([0.0, -0.05])  # press straight down
    for _ in range(2500):
        world = sim.step(world, cmd, 0.002)
    force = np.linalg.norm(world.tip_state.contact_force)
    assert force == pytest.approx(0.05 / model.servo_admittance, rel=0.05)


def test_energy_sanity_zero_command():
    sim = make_sim()
    world = sim.initial_state((1.2, 0.8))
    impulse = np.zeros(2)
    for _ in range(250):
        world = sim.step(world, np.zeros(2), 0.002)
        impulse += world.tip_state.contact_force * 0.002
    assert np.allclose(impulse, 0.0)


def test_friction_cone_invariant_during_slide():
    sim = make_sim()
    world = sim.initial_state((1.0, 0.553))
    for _ in range(2000):
        world = sim.step(world, np.array([0.15, -0.03]), 0.002)
        force = -world.tip_state.contact_force
        normal = float(np.dot(force, FLOOR.normal))
        tangential = abs(float(np.dot(force, [1.0, 0.0])))
        if normal > 0.0:
            assert tangential <= FLOOR.friction * normal + 1e-9


def test_determinism_bit_identical():
    def run():
        sim = make_sim()
        world = sim.initial_state((1.0, 0.6))
        out = []
        for k in range(400):
            world = sim.step(world, np.array([0.1, -0.02 * np.sin(k * 0.01)]), 0.002)
            out.append(world.tip_state.position.copy())
        return np.array(out)

    a, b = run(), run()
    assert np.array_equal(a, b)


def test_stiffness_ordering():
    def steady_penetration(stiffness):
        env = Environment((Surface((0.5, 0.55), (3.0, 0.55), stiffness=stiffness, damping=5e3),))
        sim = make_sim(env)
        world = sim.initial_state((1.2, 0.552))
        for _ in range(2500):
            world = sim.step(world, np.array([0.0, -0.05]), 0.002)
        return env.max_penetration(world.tip_state.position)

    soft = steady_penetration(2.0e5)
    stiff = steady_penetration(2.0e6)
    assert stiff < soft


def test_workspace_boundary_flagged_and_clamped():
    sim = ArmSimulator(ManipulatorModel(), Environment())
    world = sim.initial_state((3.1, 0.0))
    hit = False
    for _ in range(2000):
        world = sim.step(world, np.array([0.2, 0.0]), 0.002)
        hit = hit or world.workspace_limited
        assert np.linalg.norm(world.tip_state.position) < sim.model.reach
    assert hit


def test_world_state_consistency_invariant():
    sim = make_sim()
    world = sim.initial_state((1.1, 0.6))
    rng = np.random.default_rng(3)
    for _ in range(300):
        world = sim.step(world, rng.normal(0.0, 0.1, 2), 0.002)
        fk = sim.model.forward_kinematics(world.joint_angles)
        assert np.linalg.norm(fk - world.tip_state.position) < 1e-9


def test_initial_state_outside_workspace_raises():
    sim = make_sim()
    with pytest.raises(WorkspaceError):
        sim.initial_state((5.0, 0.0))
