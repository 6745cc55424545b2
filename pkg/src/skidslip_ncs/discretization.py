"""Exact sampled-data model of the tracking error with a varying network delay.

Sensors sample every ``Ts``. The total loop delay ``tau`` (sensor-to-controller
plus controller-to-actuator plus computation) varies within
``0 <= tau_min <= tau_max <= Ts``, so the actuator switches from the previous
command to the new one exactly once per period, at ``t_k + tau_k``. With
``h = Ts - tau_k`` the time the new command acts, stacking the previous
command into the state gives the 5-dimensional lifted recursion::

    xi_{k+1} = A_tilde(h) xi_k + B_tilde(h) du_k + B_tilde_D d_k

    A_tilde(h) = [[exp(A Ts), int_h^Ts exp(A s) ds B],
                  [0,         0                     ]]
    B_tilde(h) = [[int_0^h exp(A s) ds B], [I]]
    B_tilde_D  = [[int_0^Ts exp(A s) ds B_D], [0]]

``A`` is nilpotent (``A @ A == 0``) so every integral has a closed form.
"""

from dataclasses import dataclass
from math import isfinite

import numpy as np

from .frame import TrackingError
from .linalg import expm_nilpotent


@dataclass(frozen=True)
class DelayBounds:
    tau_min: float
    tau_max: float
    sample_time: float

    def __post_init__(self):
        vals = (self.tau_min, self.tau_max, self.sample_time)
        if not all(isfinite(v) for v in vals):
            raise ValueError("delay bounds must be finite")
        if self.sample_time <= 0:
            raise ValueError("sample_time must be positive")
        if not 0 <= self.tau_min <= self.tau_max <= self.sample_time:
            raise ValueError(
                "delay bounds must satisfy 0 <= tau_min <= tau_max <= sample_time, "
                f"got {self.tau_min}, {self.tau_max}, {self.sample_time}"
            )

    @property
    def h_min(self):
        return self.sample_time - self.tau_max

    @property
    def h_max(self):
        return self.sample_time - self.tau_min


@dataclass(frozen=True)
class LiftedState:
    """Tracking error plus the command still being applied from the last period."""

    e: TrackingError
    du_prev: np.ndarray

    def as_array(self):
        return np.concatenate([self.e.as_array(), np.asarray(self.du_prev, dtype=float)])

    @classmethod
    def from_array(cls, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (5,):
            raise ValueError(f"lifted state must have 5 entries, got shape {v.shape}")
        return cls(TrackingError.from_array(v[:3]), v[3:].copy())

    @classmethod
    def zero(cls):
        return cls(TrackingError(), np.zeros(2))


@dataclass(frozen=True)
class LiftedSystem:
    model: object  # LinearErrorModel
    bounds: DelayBounds

    @property
    def n_lifted(self):
        return self.model.n_states + self.model.n_inputs


def combine_delays(tau_sc, tau_ca, tau_c):
    """Total loop delay from its sensor, actuator and computation parts."""
    parts = (tau_sc, tau_ca, tau_c)
    if any(p < 0 for p in parts):
        raise ValueError(f"delay components must be non-negative, got {parts}")
    return tau_sc + tau_ca + tau_c


def _tol(bounds):
    return 1e-12 * bounds.sample_time


def hold_interval(bounds, tau_k):
    """Portion of the period during which the newest command acts."""
    tol = _tol(bounds)
    if not bounds.tau_min - tol <= tau_k <= bounds.tau_max + tol:
        raise ValueError(
            f"delay {tau_k!r} outside [{bounds.tau_min!r}, {bounds.tau_max!r}]"
        )
    return bounds.sample_time - tau_k


def zoh_interval(model, lo, hi, input_matrix):
    """``int_lo^hi exp(A s) ds @ input_matrix`` using ``exp(A s) = I + A s``."""
    n = model.n_states
    kernel = (hi - lo) * np.eye(n) + (0.5 * (hi * hi - lo * lo)) * model.A
    return kernel @ np.asarray(input_matrix, dtype=float)


def zoh_integral(model, h, input_matrix):
    if h < 0:
        raise ValueError("h must be non-negative")
    return zoh_interval(model, 0.0, h, input_matrix)


def check_hold(sys, h):
    b = sys.bounds
    tol = _tol(b)
    if not b.h_min - tol <= h <= b.h_max + tol:
        raise ValueError(f"h={h!r} outside admissible interval [{b.h_min!r}, {b.h_max!r}]")


def lifted_matrices(sys, h):
    """``(A_tilde, B_tilde, B_tilde_D)`` for hold interval ``h``."""
    check_hold(sys, h)
    m = sys.model
    ts = sys.bounds.sample_time
    n, nu = m.n_states, m.n_inputs
    a_t = np.zeros((n + nu, n + nu))
    a_t[:n, :n] = expm_nilpotent(m.A, ts, 2)
    a_t[:n, n:] = zoh_interval(m, h, ts, m.B)
    b_t = np.zeros((n + nu, nu))
    b_t[:n] = zoh_interval(m, 0.0, h, m.B)
    b_t[n:] = np.eye(nu)
    b_td = np.zeros((n + nu, m.B_D.shape[1]))
    b_td[:n] = zoh_interval(m, 0.0, ts, m.B_D)
    return a_t, b_t, b_td


def _vec(x):
    return x.as_array() if hasattr(x, "as_array") else np.asarray(x, dtype=float)


def lifted_step(sys, xi, du_k, d_k, h):
    a_t, b_t, b_td = lifted_matrices(sys, h)
    nxt = a_t @ _vec(xi) + b_t @ _vec(du_k) + b_td @ _vec(d_k)
    return LiftedState.from_array(nxt)
