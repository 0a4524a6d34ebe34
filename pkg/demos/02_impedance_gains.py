"""From desired impedance to control gains, and why the two laws agree.

The controller tracks a required velocity: desired velocity plus position
and force error feedback. With the force gain set to the inverse damping
and the position gain to inverse-damping-times-stiffness, that velocity
law renders exactly the spring-damper target impedance. This script checks
the identity numerically and shows the quintic reference profile.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contactlfd import (
    ImpedanceSpec,
    QuinticTrajectory,
    gains_from_impedance,
    required_velocity,
    target_impedance_residual,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

damping = np.diag([2.0e3, 2.4e3])
stiffness = 4.0e4 * np.array([[0.75, 0.403], [0.403, 0.35]])
spec = ImpedanceSpec(damping=damping, stiffness=stiffness)
gains = gains_from_impedance(spec)

print("position gain ((m/s)/m):")
print(gains.position_gain.round(4))
print("force gain ((m/s)/N):")
print(gains.force_gain)
print("eigenvalues of stiffness / 4e4:", (np.linalg.eigvalsh(stiffness) / 4e4).round(4))

# Substitute the required velocity into the target impedance: residual ~ 0.
rng = np.random.default_rng(0)
residuals = []
for _ in range(200):
    dv, dp, p = (rng.normal(0, 1, 2) for _ in range(3))
    df, f = (rng.normal(0, 500, 2) for _ in range(2))
    v = required_velocity(dv, dp, p, df, f, gains)
    residuals.append(np.linalg.norm(target_impedance_residual(dv, v, dp, p, df, f, spec)))
print(f"\nmax |residual| over 200 random states: {max(residuals):.2e} N")

# Quintic reference: smooth in position, velocity and acceleration.
traj = QuinticTrajectory.from_direction([0.0, 0.0], [1.0, 0.0], length=1.0, duration=4.0)
ts = np.linspace(-0.5, 4.5, 500)
samples = [traj.sample(t) for t in ts]
fig, axes = plt.subplots(3, 1, figsize=(7, 6), sharex=True)
for ax, idx, label in zip(axes, range(3), ["position [m]", "velocity [m/s]", "accel [m/s^2]"]):
    ax.plot(ts, [s[idx][0] for s in samples])
    ax.set_ylabel(label)
axes[0].set_title("quintic reference along the motion direction")
axes[-1].set_xlabel("t [s]")
fig.tight_layout()
fig.savefig(OUT / "02_quintic_reference.png", dpi=120)
print(f"wrote {OUT / '02_quintic_reference.png'}")
