"""Linear time-invariant model of the tracking error around the nominal motion.

Around ``e = 0``, ``u_hat = (V_D, 0)`` and ``mu = (1, 1)``::

    e_dot = A e + B du + B_D d

    A   = [[0, 0, 0], [0, 0, V_D], [0, 0, 0]]
    B   = [[1, 0], [0, 0], [0, 1]]
    B_D = [[V_D/2, V_D/2], [0, 0], [V_D/D, -V_D/D]]

``du = u_hat - (V_D, 0)`` and ``d = mu - 1``.
"""

from dataclasses import dataclass

import numpy as np

from .frame import TrackingError, error_derivative
from .robot import ControlInput, SlipState


@dataclass(frozen=True)
class LinearErrorModel:
    A: np.ndarray
    B: np.ndarray
    B_D: np.ndarray
    v_desired: float
    track_distance: float

    @property
    def n_states(self):
        return self.A.shape[0]

    @property
    def n_inputs(self):
        return self.B.shape[1]


def build_linear_model(seg, geom):
    v = float(seg.v_desired)
    d = float(geom.track_distance)
    a = np.zeros((3, 3))
    a[1, 2] = v
    b = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    b_d = np.array([[v / 2, v / 2], [0.0, 0.0], [v / d, -v / d]])
    return LinearErrorModel(a, b, b_d, v, d)


def numeric_jacobians(seg, geom, step=1e-6):
    """Central-difference Jacobians of the nonlinear error rate at the nominal point.

    Returns ``(A_num, B_num, B_D_num)``, the derivatives with respect to the
    error, the commanded input and the slip coefficients.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    e0 = np.zeros(3)
    u0 = seg.nominal_input
    mu0 = np.ones(2)

    def rate(e, u, mu):
        return error_derivative(
            TrackingError.from_array(e),
            ControlInput.from_array(u),
            SlipState(float(mu[0]), float(mu[1])),
            seg,
            geom,
        )

    def jac(which, x0):
        cols = []
        for i in range(x0.size):
            dx = np.zeros_like(x0)
            dx[i] = step
            args_p = [e0, u0, mu0]
            args_m = [e0, u0, mu0]
            args_p[which] = x0 + dx
            args_m[which] = x0 - dx
            cols.append((rate(*args_p) - rate(*args_m)) / (2 * step))
        return np.column_stack(cols)

    return jac(0, e0), jac(1, u0), jac(2, mu0)


def linear_error_derivative(model, e, du, d):
    e = e.as_array() if isinstance(e, TrackingError) else np.asarray(e, dtype=float)
    d = d.as_array() if hasattr(d, "as_array") else np.asarray(d, dtype=float)
    return model.A @ e + model.B @ np.asarray(du, dtype=float) + model.B_D @ d
