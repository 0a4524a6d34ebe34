"""Reproducing a learned slide on a stiff and on a 10x softer surface.

The learned controller commands the same reference motion in both runs.
Compliance keeps the contact force profile nearly identical while the
softer surface simply yields more, so the tool rides deeper. This is the
behaviour that makes the learned motion transferable between environments
of different stiffness.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contactlfd import Environment, Surface
from contactlfd.learning import LearningParams, contact_onset_index, learn_controller
from contactlfd.session import MasterStream, SessionConfig, run_demonstration, run_reproduction

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def environment(stiffness):
    return Environment((
        Surface((0.5, 0.55), (3.0, 0.55), stiffness=stiffness,
                damping=5.0e3 * np.sqrt(stiffness / 2.0e6), friction=0.5),
    ))


cfg = SessionConfig(environment=environment(2.0e6), start_position=(1.2, 0.8))
strokes = [
    [(0.0, 0.12, 0.080), (1.0, 0.12, 0.060), (2.0, 0.12, 0.048), (7.0, 0.22, 0.044), (7.5, 0.22, 0.044)],
    [(0.0, 0.13, 0.080), (1.0, 0.13, 0.059), (2.0, 0.13, 0.047), (7.0, 0.21, 0.043), (7.5, 0.21, 0.043)],
]
demos = [
    run_demonstration(cfg.with_seed(i), MasterStream.from_waypoints(s)).demonstration
    for i, s in enumerate(strokes)
]

params = LearningParams()
controller = learn_controller(demos, params)
print(f"learned direction: {controller.desired_direction.round(4)}")
print(f"trajectory length: {controller.trajectory_length:.3f} m")

onset = contact_onset_index(demos[0], params.contact_threshold)
start = demos[0].positions[onset]
duration = float(demos[0].times[-1] - demos[0].times[onset])

runs = {}
for name, stiffness in (("stiff", 2.0e6), ("soft", 2.0e5)):
    runs[name] = run_reproduction(
        cfg.with_environment(environment(stiffness)), controller, start, duration=duration
    )
    m = runs[name].metrics
    print(f"{name:>6}: contact {m['contact_fraction']:6.1%}, "
          f"mean |F| {m['mean_force_magnitude']:7.1f} N, "
          f"max penetration {m['max_penetration'] * 1e3:5.2f} mm")

fig, axes = plt.subplots(3, 1, figsize=(8, 8))
for name, color in (("stiff", "black"), ("soft", "0.6")):
    trace = runs[name].trace
    axes[0].plot(trace.positions[:, 0], trace.positions[:, 1], color=color, label=name)
    axes[1].plot(trace.times, trace.estimated_forces[:, 0], color=color, label=name)
    axes[2].plot(trace.times, trace.estimated_forces[:, 1], color=color, label=name)
axes[0].plot(*start, "o", color="tab:green", label="start")
axes[0].axhline(0.55, color="tab:red", lw=0.8)
axes[0].set(xlabel="x [m]", ylabel="y [m]", title="tool path")
axes[1].set(ylabel="F_x [N]")
axes[2].set(xlabel="t [s]", ylabel="F_y [N]")
for ax in axes:
    ax.legend()
fig.tight_layout()
fig.savefig(OUT / "05_stiff_vs_soft.png", dpi=120)
print(f"wrote {OUT / '05_stiff_vs_soft.png'}")
