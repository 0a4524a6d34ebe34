"""Learning the desired direction and the compliant axes from recordings.

Two teleoperated slides are recorded with the noisy force estimator. Each
in-contact sample constrains the desired direction to the sector between
the observed motion direction and the observed force direction; the
intersection of all sectors, with a tolerated outlier fraction, is the
window of directions able to drive the whole motion. Deviations of the
per-demo mean motion from the chosen direction then decide how many axes
must be compliant.
"""

from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contactlfd import Environment, EstimatorConfig, Surface
from contactlfd.learning import (
    LearningParams,
    actual_directions,
    direction_sets_from_demo,
    learn_compliance,
    learn_desired_direction,
    resample,
)
from contactlfd.session import MasterStream, SessionConfig, run_demonstration

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

env = Environment((Surface((0.5, 0.55), (3.0, 0.55), stiffness=2.0e6, damping=5.0e3, friction=0.5),))
cfg = SessionConfig(
    environment=env,
    start_position=(1.2, 0.8),
    estimator=EstimatorConfig(noise_std=50.0, velocity_bias_gain=200.0, seed=7),
)

strokes = [
    [(0.0, 0.12, 0.080), (1.0, 0.12, 0.060), (2.0, 0.12, 0.048), (7.0, 0.22, 0.044), (7.5, 0.22, 0.044)],
    [(0.0, 0.13, 0.080), (1.0, 0.13, 0.059), (2.0, 0.13, 0.047), (7.0, 0.21, 0.043), (7.5, 0.21, 0.043)],
]
demos = [
    run_demonstration(replace(cfg, estimator=replace(cfg.estimator, seed=7 + i)),
                      MasterStream.from_waypoints(s)).demonstration
    for i, s in enumerate(strokes)
]

params = LearningParams.for_noise(cfg.estimator.noise_std)
desired = learn_desired_direction(demos, params)
model = learn_compliance(demos, desired, params)

angle = np.degrees(np.arctan2(desired[1], desired[0]))
print(f"desired direction: ({desired[0]:+.4f}, {desired[1]:+.4f}), {angle:.1f} deg")
print(f"compliant axes: {model.n_compliant}")
for d, score in sorted(model.bic_values.items()):
    print(f"  criterion for {d} axes: {score:8.2f}")

# Fan plot of per-sample motion and force directions plus the result.
fig, ax = plt.subplots(figsize=(6, 6))
colors = ["tab:red", "tab:purple"]
force_colors = ["tab:blue", "tab:cyan"]
for demo, c_m, c_f in zip(demos, colors, force_colors):
    motion, force = actual_directions(
        resample(demo, params.target_rate), params.min_motion, params.contact_threshold
    )
    for m in motion[::3]:
        ax.plot([0, m[0]], [0, m[1]], color=c_m, alpha=0.25, lw=0.8)
    for f in force[::3]:
        ax.plot([0, f[0]], [0, f[1]], color=c_f, alpha=0.25, lw=0.8)
ax.plot([0, desired[0]], [0, desired[1]], color="k", lw=3, label="learned direction")
(axis,) = model.compliant_directions
ax.plot([-axis[0], axis[0]], [-axis[1], axis[1]], "g--", lw=1.5, label="compliant axis")
ax.set_aspect("equal")
ax.set(xlim=(-1.1, 1.1), ylim=(-1.1, 1.1),
       title="motion directions (red/purple), force directions (blue/cyan)")
ax.legend(loc="upper left")
fig.savefig(OUT / "04_direction_learning.png", dpi=120)
print(f"wrote {OUT / '04_direction_learning.png'}")
