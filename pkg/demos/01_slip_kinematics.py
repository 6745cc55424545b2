"""
Track slip and the robot's effective motion
===========================================

A command ``(V, omega)`` is turned into motor speeds assuming perfect
traction. When one track slips, the body moves differently from what was
commanded: a straight-line command picks up a turn rate.
"""

import numpy as np

from skidslip_ncs import (
    ControlInput,
    Pose,
    RobotGeometry,
    SlipState,
    effective_velocity,
    integrate_pose,
    nominal_motor_speeds,
)

geom = RobotGeometry(gear_radius=0.1, track_distance=0.5)
command = ControlInput(v=1.0, omega=0.0)

print("motor speeds for a 1 m/s straight command:", nominal_motor_speeds(command, geom))

# %%
# The right track delivers only 90% of its nominal speed.
slip = SlipState(mu_r=0.9, mu_l=1.0)
print("effective body velocity:", effective_velocity(command, slip, geom))

# %%
# Integrate for two seconds: the robot drifts off the straight line.
traj = integrate_pose(Pose(0.0, 0.0, 0.0), command, slip, geom, t_span=2.0, dt=1e-3)
for t, (x, y, th) in zip(traj.times[::500], traj.states[::500]):
    print(f"t={t:4.1f}s  x={x:7.4f}  y={y:7.4f}  theta={th:7.4f}")

# %%
# With equal slip on both tracks the path stays straight but is shorter.
even = integrate_pose(Pose(0, 0, 0), command, SlipState(0.8, 0.8), geom, 2.0, 1e-3).final
print("equal 20% slip, final pose:", even)
assert np.isclose(even.x, 1.6) and even.y == 0.0
