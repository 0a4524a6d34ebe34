import numpy as np
import pytest

from contactlfd import Environment, ParseError, Surface
from contactlfd.learning import learn_controller
from contactlfd.persist import (
    config_from_dict,
    config_to_dict,
    load_controller,
    load_demonstration,
    load_environment,
    load_master_stream,
    load_session_config,
    load_session_log,
    save_controller,
    save_demonstration,
    save_environment,
    save_master_stream,
    save_plot_data,
    save_session_config,
    save_session_log,
)
from contactlfd.session import MasterStream, SessionConfig, run_demonstration
from conftest import horizontal_environment, slide_stream, sliding_session_config


def test_environment_round_trip(tmp_path):
    env = Environment((
        Surface((0.5, 0.55), (3.0, 0.55), stiffness=2.0e6, damping=5.0e3, friction=0.5),
        Surface((0.1, -0.2), (0.9, 0.4), stiffness=1.234e5, damping=0.0, friction=0.3),
    ))
    path = tmp_path / "env.txt"
    save_environment(env, path)
    loaded = load_environment(path)
    assert len(loaded.surfaces) == 2
    for a, b in zip(env.surfaces, loaded.surfaces):
        assert a == b


def test_environment_parse_error_reports_line(tmp_path):
    path = tmp_path / "env.txt"
    path.write_text("# header\n0 0 1 0 2e6 0 0.3\n0 0 1 0 2e6\n")
    with pytest.raises(ParseError) as err:
        load_environment(path)
    assert err.value.line_number == 3


def test_environment_bad_number_reports_line(tmp_path):
    path = tmp_path / "env.txt"
    path.write_text("0 0 1 0 2e6 zero 0.3\n")
    with pytest.raises(ParseError) as err:
        load_environment(path)
    assert err.value.line_number == 1


def test_demonstration_round_trip_bit_exact(tmp_path):
    log = run_demonstration(sliding_session_config().with_seed(1), slide_stream(0))
    demo = log.demonstration
    path = tmp_path / "demo.txt"
    save_demonstration(demo, path)
    loaded = load_demonstration(path)
    assert loaded.sample_rate == demo.sample_rate
    assert np.array_equal(loaded.times, demo.times)
    assert np.array_equal(loaded.positions, demo.positions)
    assert np.array_equal(loaded.forces, demo.forces)


def test_demonstration_parse_error(tmp_path):
    path = tmp_path / "demo.txt"
    path.write_text("# demonstration dim=2 rate=500.0 label=x\n0.0 1.0 2.0 3.0\n")
    with pytest.raises(ParseError) as err:
        load_demonstration(path)
    assert err.value.line_number == 2


def test_master_stream_round_trip(tmp_path):
    stream = MasterStream.from_waypoints([(0.0, 0.1, 0.2), (1.0, 0.3, 0.1)])
    path = tmp_path / "stream.txt"
    save_master_stream(stream, path)
    loaded = load_master_stream(path)
    assert np.array_equal(loaded.times, stream.times)
    assert np.array_equal(loaded.positions, stream.positions)


def test_controller_round_trip_bit_exact(tmp_path, clean_slides, noiseless_params):
    controller = learn_controller(clean_slides[:2], noiseless_params)
    path = tmp_path / "controller.json"
    save_controller(controller, path)
    loaded = load_controller(path)
    assert np.array_equal(loaded.desired_direction, controller.desired_direction)
    assert np.array_equal(loaded.stiffness, controller.stiffness)
    assert np.array_equal(loaded.gains.position_gain, controller.gains.position_gain)
    assert np.array_equal(loaded.gains.force_gain, controller.gains.force_gain)
    assert loaded.trajectory_length == controller.trajectory_length
    assert loaded.n_compliant == controller.n_compliant


def test_config_round_trip(tmp_path):
    cfg = sliding_session_config().with_seed(17)
    path = tmp_path / "session.json"
    save_session_config(cfg, path)
    loaded = load_session_config(path)
    assert config_to_dict(loaded) == config_to_dict(cfg)
    assert loaded.estimator.seed == 17
    assert loaded.environment == cfg.environment


def test_config_from_partial_dict_uses_defaults():
    cfg = config_from_dict({})
    assert cfg.sim_rate == 500.0
    assert cfg.manipulator.link_lengths == (1.6, 1.6)
    assert cfg.coupling.position_scale == 10.0


def test_session_log_replay_round_trip(tmp_path):
    cfg = sliding_session_config().with_seed(5)
    log = run_demonstration(cfg, slide_stream(1))
    path = tmp_path / "session_log.json"
    save_session_log(log, cfg, path)
    mode, seed, loaded_cfg, stream, demo, metrics = load_session_log(path)
    assert mode == "demonstrate"
    assert seed == 5
    assert np.array_equal(demo.forces, log.demonstration.forces)
    # Re-running from the loaded log reproduces the demonstration bit-exactly.
    replayed = run_demonstration(loaded_cfg, stream).demonstration
    assert np.array_equal(replayed.positions, log.demonstration.positions)
    assert np.array_equal(replayed.forces, log.demonstration.forces)


def test_plot_data_written(tmp_path):
    log = run_demonstration(sliding_session_config(), slide_stream(0))
    path = tmp_path / "plot.csv"
    save_plot_data(log.trace, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("t,x,y,fx,fy")
    assert len(lines) == len(log.trace) + 1


def test_malformed_config_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "sim_rate": 500.0,\n  broken\n}\n')
    with pytest.raises(ParseError) as err:
        load_session_config(path)
    assert err.value.line_number == 3
