"""Tour of the simulated plant: kinematics, penalty contact, friction.

Run from the repository root:  python3 demos/01_plant_and_contact.py
Writes plots into demos/output/.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contactlfd import ArmSimulator, Environment, ManipulatorModel, Surface, contact_force

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# ---------------------------------------------------------------------------
# The arm: two 1.6 m links, 475 kg payload at the tip.

model = ManipulatorModel()
print(f"reach: {model.reach} m")
q = model.inverse_kinematics((1.6, 1.6))
print(f"joint angles for tip (1.6, 1.6): {np.degrees(q).round(2)} deg")
print(f"round trip: {model.forward_kinematics(q).round(6)}")

# ---------------------------------------------------------------------------
# Contact: a horizontal surface with stiffness 2e6 N/m and friction 0.5.
# Pressing 1 mm in produces 2 kN; sliding adds a friction component that
# tilts the tool-on-environment force forward by atan(mu).

floor = Surface((0.5, 0.55), (3.0, 0.55), stiffness=2.0e6, damping=5.0e3, friction=0.5)
env = Environment((floor,))

static = contact_force(env, (1.2, 0.549), (0.0, 0.0))
sliding = contact_force(env, (1.2, 0.549), (0.2, 0.0))
print(f"\nstatic press, 1 mm deep: F = {static.round(1)} N")
print(f"sliding at 0.2 m/s:      F = {sliding.round(1)} N")
tilt = np.degrees(np.arctan2(sliding[0], -sliding[1]))
print(f"force tilt from straight down: {tilt:.2f} deg = atan(mu) = "
      f"{np.degrees(np.arctan(floor.friction)):.2f} deg")

# ---------------------------------------------------------------------------
# Step response of the inner velocity servo, free space.

sim = ArmSimulator(model, Environment())
world = sim.initial_state((1.2, 0.8))
dt = 0.002
ts, vx = [], []
for k in range(400):
    world = sim.step(world, np.array([0.1, 0.0]), dt)
    ts.append(world.time)
    vx.append(world.tip_state.velocity[0])

fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
axes[0].plot(ts, vx)
axes[0].axhline(0.1, color="k", ls=":")
axes[0].set(xlabel="t [s]", ylabel="tip velocity x [m/s]", title="velocity servo step response")

# Press-and-slide: force builds until the servo admittance balances it.
sim = ArmSimulator(model, env)
world = sim.initial_state((1.0, 0.56))
ts, fy, depth = [], [], []
for k in range(2500):
    world = sim.step(world, np.array([0.12, -0.04]), dt)
    ts.append(world.time)
    fy.append(world.tip_state.contact_force[1])
    depth.append(env.max_penetration(world.tip_state.position) * 1e3)
axes[1].plot(ts, fy, label="F_y tool-on-env [N]")
axes[1].set(xlabel="t [s]", title="press and slide")
ax2 = axes[1].twinx()
ax2.plot(ts, depth, color="tab:orange", label="penetration [mm]")
ax2.set_ylabel("penetration [mm]")
axes[1].legend(loc="lower left")
fig.tight_layout()
fig.savefig(OUT / "01_plant_and_contact.png", dpi=120)
print(f"\nwrote {OUT / '01_plant_and_contact.png'}")
