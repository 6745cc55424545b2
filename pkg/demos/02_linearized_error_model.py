"""
Linearized tracking-error model
===============================

Around straight-line motion at speed ``V_D`` the tracking error obeys
``e' = A e + B du + B_D d``. The analytic matrices are compared with
finite-difference Jacobians of the nonlinear error dynamics, then the
linear and nonlinear rates are compared for growing perturbations.
"""

import numpy as np

from skidslip_ncs import (
    ControlInput,
    Pose,
    RobotGeometry,
    SlipState,
    TrackingError,
    TrajectorySegment,
    build_linear_model,
    error_derivative,
    linear_error_derivative,
    numeric_jacobians,
)

np.set_printoptions(precision=4, suppress=True)

seg = TrajectorySegment(origin=Pose(2.0, 1.0, 0.6), v_desired=1.0)
geom = RobotGeometry(0.1, 0.5)
model = build_linear_model(seg, geom)
print("A =\n", model.A, "\nB =\n", model.B, "\nB_D =\n", model.B_D)

a_num, b_num, bd_num = numeric_jacobians(seg, geom, step=1e-6)
print("largest Jacobian mismatch:", max(
    np.abs(a_num - model.A).max(), np.abs(b_num - model.B).max(), np.abs(bd_num - model.B_D).max()
))

# %%
# The residual between nonlinear and linear rates shrinks quadratically.
direction = (np.array([0.2, -0.1, 0.4]), np.array([0.3, 0.2]), np.array([0.1, -0.2]))
for s in (0.1, 0.01, 0.001):
    e, du, d = (s * x for x in direction)
    nonlinear = error_derivative(
        TrackingError.from_array(e),
        ControlInput.from_array(seg.nominal_input + du),
        SlipState(1 + d[0], 1 + d[1]),
        seg,
        geom,
    )
    linear = linear_error_derivative(model, e, du, d)
    print(f"scale {s:6.3f}: residual {np.linalg.norm(nonlinear - linear):.3e}")
