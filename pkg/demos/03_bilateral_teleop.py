"""Force-reflected bilateral coupling between a desk-scale master and the
3 m slave arm.

A scripted master stroke descends onto the surface and slides along it.
The slave follows the scaled master through the coupling; contact force
reflects back as a required-velocity bias on both sides, which is what a
haptic master would render to the operator's hand.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contactlfd import Environment, Surface
from contactlfd.session import MasterStream, SessionConfig, run_demonstration

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

env = Environment((Surface((0.5, 0.55), (3.0, 0.55), stiffness=2.0e6, damping=5.0e3, friction=0.5),))
cfg = SessionConfig(environment=env, start_position=(1.2, 0.8))

stream = MasterStream.from_waypoints([
    (0.0, 0.12, 0.080),
    (1.0, 0.12, 0.060),
    (2.0, 0.12, 0.048),
    (7.0, 0.22, 0.044),
    (7.5, 0.22, 0.044),
])
log = run_demonstration(cfg, stream)
trace = log.trace
kp = cfg.coupling.position_scale

print("metrics:")
for key, value in log.metrics.items():
    print(f"  {key}: {value:.6g}")

fig, axes = plt.subplots(3, 1, figsize=(8, 8), sharex=True)
axes[0].plot(trace.times, kp * trace.master_positions[:, 0], "k:", label="master x (scaled)")
axes[0].plot(trace.times, trace.positions[:, 0], label="slave x")
axes[0].set_ylabel("x [m]")
axes[0].legend()
axes[1].plot(trace.times, kp * trace.master_positions[:, 1], "k:", label="master y (scaled)")
axes[1].plot(trace.times, trace.positions[:, 1], label="slave y")
axes[1].axhline(0.55, color="tab:red", lw=0.8, label="surface")
axes[1].set_ylabel("y [m]")
axes[1].legend()
axes[2].plot(trace.times, trace.estimated_forces[:, 0], label="estimated F_x")
axes[2].plot(trace.times, trace.estimated_forces[:, 1], label="estimated F_y")
axes[2].set(xlabel="t [s]", ylabel="force [N]")
axes[2].legend()
axes[0].set_title("teleoperated slide: the slave presses where the master commands below the surface")
fig.tight_layout()
fig.savefig(OUT / "03_bilateral_teleop.png", dpi=120)
print(f"wrote {OUT / '03_bilateral_teleop.png'}")
