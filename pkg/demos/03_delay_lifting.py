"""
Exact discretization under a varying network delay
==================================================

The loop delay ``tau`` stays below the sampling period, so within each
period the actuator applies the previous command until ``t_k + tau_k`` and
the new one afterwards. Stacking the previous command into the state gives a
5-dimensional recursion whose matrices depend on ``h = Ts - tau_k``.
"""

import numpy as np
from scipy.integrate import solve_ivp

from skidslip_ncs import (
    DelayBounds,
    LiftedSystem,
    Pose,
    RobotGeometry,
    TrajectorySegment,
    build_linear_model,
    combine_delays,
    hold_interval,
    lifted_matrices,
    lifted_step,
)

np.set_printoptions(precision=5, suppress=True)

tau = combine_delays(tau_sc=0.015, tau_ca=0.02, tau_c=0.005)
bounds = DelayBounds(tau_min=0.02, tau_max=0.06, sample_time=0.1)
h = hold_interval(bounds, tau)
print(f"total delay {tau:.3f}s -> new command acts for h = {h:.3f}s")

model = build_linear_model(TrajectorySegment(Pose(0, 0, 0), 1.0), RobotGeometry(0.1, 0.5))
sys = LiftedSystem(model, bounds)
a_t, b_t, b_td = lifted_matrices(sys, h)
print("A_tilde =\n", a_t, "\nB_tilde =\n", b_t, "\nB_tilde_D =\n", b_td)

# %%
# Check one lifted step against a stiff-tolerance ODE solve with the switch.
xi = np.array([0.05, -0.02, 0.03, 0.1, -0.05])
du, d = np.array([-0.2, 0.1]), np.array([0.05, -0.03])


def rhs(u):
    return lambda t, e: model.A @ e + model.B @ u + model.B_D @ d


first = solve_ivp(rhs(xi[3:]), (0, tau), xi[:3], rtol=1e-12, atol=1e-14)
second = solve_ivp(rhs(du), (tau, 0.1), first.y[:, -1], rtol=1e-12, atol=1e-14)
lifted = lifted_step(sys, xi, du, d, h)
print("lifted step :", lifted.as_array())
print("ODE solution:", second.y[:, -1])
