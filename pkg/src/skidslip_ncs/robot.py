"""Kinematics of a tracked robot whose tracks slip against the ground.

The commanded body velocities ``u_hat = (V, omega)`` are converted to motor
speeds assuming no slip, ``rho_hat = J^-1 u_hat``. Each track then delivers
only a fraction ``mu`` of its nominal speed, so the body actually moves with
``u = J H J^-1 u_hat`` where ``H = diag(mu_r, mu_l)``::

    J = [[R/2,  R/2],
         [R/D, -R/D]]

with ``R`` the drive gear radius and ``D`` the distance between the tracks.
"""

from bisect import bisect_right
from dataclasses import dataclass
from math import cos, isfinite, sin

import numpy as np

from .linalg import inverse2


def _check_finite(obj, *names):
    for name in names:
        if not isfinite(getattr(obj, name)):
            raise ValueError(f"{type(obj).__name__}.{name} must be finite")


@dataclass(frozen=True)
class Pose:
    """Planar pose. ``theta`` is never wrapped."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        _check_finite(self, "x", "y", "theta")

    def as_array(self):
        return np.array([self.x, self.y, self.theta])

    @classmethod
    def from_array(cls, v):
        return cls(float(v[0]), float(v[1]), float(v[2]))


@dataclass(frozen=True)
class ControlInput:
    """Forward speed ``v`` [m/s] and turn rate ``omega`` [rad/s]."""

    v: float
    omega: float

    def __post_init__(self):
        _check_finite(self, "v", "omega")

    def as_array(self):
        return np.array([self.v, self.omega])

    @classmethod
    def from_array(cls, v):
        return cls(float(v[0]), float(v[1]))


@dataclass(frozen=True)
class MotorSpeeds:
    rho_r: float
    rho_l: float

    def __post_init__(self):
        _check_finite(self, "rho_r", "rho_l")

    def as_array(self):
        return np.array([self.rho_r, self.rho_l])


@dataclass(frozen=True)
class RobotGeometry:
    gear_radius: float
    track_distance: float

    def __post_init__(self):
        _check_finite(self, "gear_radius", "track_distance")
        if self.gear_radius <= 0 or self.track_distance <= 0:
            raise ValueError("gear radius and track distance must be positive")


@dataclass(frozen=True)
class SlipState:
    """Per-track sliding coefficients, nominally 1."""

    mu_r: float = 1.0
    mu_l: float = 1.0

    def __post_init__(self):
        _check_finite(self, "mu_r", "mu_l")
        if self.mu_r <= 0 or self.mu_l <= 0:
            raise ValueError("sliding coefficients must be strictly positive")

    def as_array(self):
        return np.array([self.mu_r, self.mu_l])

    def deviation(self):
        return SlipDeviation(self.mu_r - 1.0, self.mu_l - 1.0)


@dataclass(frozen=True)
class SlipDeviation:
    """``mu - 1`` for each track."""

    d_mu_r: float = 0.0
    d_mu_l: float = 0.0

    def __post_init__(self):
        _check_finite(self, "d_mu_r", "d_mu_l")

    def as_array(self):
        return np.array([self.d_mu_r, self.d_mu_l])

    @classmethod
    def from_array(cls, v):
        return cls(float(v[0]), float(v[1]))

    def slip(self):
        return SlipState(1.0 + self.d_mu_r, 1.0 + self.d_mu_l)


def heading_matrix(theta):
    return np.array([[cos(theta), 0.0], [sin(theta), 0.0], [0.0, 1.0]])


def coupling_matrix(geom):
    r, d = geom.gear_radius, geom.track_distance
    return np.array([[r / 2, r / 2], [r / d, -r / d]])


def nominal_motor_speeds(u_hat, geom):
    rho = inverse2(coupling_matrix(geom)) @ u_hat.as_array()
    return MotorSpeeds(float(rho[0]), float(rho[1]))


def _effective(u_hat, mu, j, j_inv):
    if mu[0] == mu[1]:
        # H = mu I commutes with J
        return mu[0] * u_hat
    return j @ (mu * (j_inv @ u_hat))


def effective_velocity(u_hat, slip, geom):
    """Body velocity actually produced by ``u_hat`` under track slip."""
    j = coupling_matrix(geom)
    u = _effective(u_hat.as_array(), slip.as_array(), j, inverse2(j))
    return ControlInput(float(u[0]), float(u[1]))


def pose_derivative(q, u_hat, slip, geom):
    """Pose rate ``G(theta) J H J^-1 u_hat`` as a 3-vector."""
    return heading_matrix(q.theta) @ effective_velocity(u_hat, slip, geom).as_array()


@dataclass(frozen=True)
class PiecewiseConstant:
    """Signal holding ``values[i]`` on ``[breakpoints[i-1], breakpoints[i])``.

    ``values`` has one more entry than ``breakpoints``.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        if any(b1 <= b0 for b0, b1 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    def __call__(self, t):
        return self.values[bisect_right(self.breakpoints, t)]


@dataclass(frozen=True)
class PoseTrajectory:
    times: np.ndarray
    states: np.ndarray  # (n + 1, 3) rows of x, y, theta

    @property
    def final(self):
        return Pose.from_array(self.states[-1])

    def __len__(self):
        return len(self.times)


def _grid_index(t, t0, dt, what):
    n = (t - t0) / dt
    k = round(n)
    if abs(n - k) > 1e-9 * max(1.0, abs(n)):
        raise ValueError(
            f"{what} at t={t!r} does not fall on the integration grid "
            f"(t0={t0!r}, dt={dt!r})"
        )
    return k


def _sampler(signal, to_array):
    # returns f(t_step_start, stage_time) -> array
    if isinstance(signal, PiecewiseConstant):
        cache = {}

        def f(t_mid, _t):
            v = signal(t_mid)
            key = id(v)
            if key not in cache:
                cache[key] = to_array(v)
            return cache[key]

        return f, True
    if callable(signal):
        return (lambda _t_mid, t: to_array(signal(t))), False
    const = to_array(signal)
    return (lambda _t_mid, _t: const), True


def integrate_pose(q0, u_hat, slip, geom, t_span, dt, t0=0.0):
    """Fixed-step RK4 integration of the slipping-robot kinematics.

    ``u_hat`` and ``slip`` may each be a constant (``ControlInput`` /
    ``SlipState``), a :class:`PiecewiseConstant` signal, or any callable of
    time. Piecewise-constant signals take the value of the step interval they
    cover, so every breakpoint inside ``(t0, t0 + t_span)`` must land exactly
    on the step grid; otherwise ``ValueError`` is raised. General callables
    are evaluated at the RK4 stage times.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_span < 0:
        raise ValueError("t_span must be non-negative")
    n = _grid_index(t0 + t_span, t0, dt, "end of span")
    for signal in (u_hat, slip):
        if isinstance(signal, PiecewiseConstant):
            for b in signal.breakpoints:
                if t0 < b < t0 + t_span:
                    _grid_index(b, t0, dt, "switching instant")

    j = coupling_matrix(geom)
    j_inv = inverse2(j)
    u_at, u_step_const = _sampler(u_hat, lambda u: u.as_array())
    mu_at, mu_step_const = _sampler(slip, lambda s: s.as_array())

    states = np.empty((n + 1, 3))
    states[0] = q0.as_array()
    times = t0 + dt * np.arange(n + 1)
    x = states[0].copy()
    comp = np.zeros(3)
    half = 0.5 * dt
    for i in range(n):
        t = times[i]
        tm = t + half
        if u_step_const and mu_step_const:
            w = _effective(u_at(tm, t), mu_at(tm, t), j, j_inv)
            w1 = w2 = w4 = w
        else:
            w1 = _effective(u_at(tm, t), mu_at(tm, t), j, j_inv)
            w2 = _effective(u_at(tm, tm), mu_at(tm, tm), j, j_inv)
            w4 = _effective(u_at(tm, t + dt), mu_at(tm, t + dt), j, j_inv)
        k1 = heading_matrix(x[2]) @ w1
        k2 = heading_matrix(x[2] + half * k1[2]) @ w2
        k3 = heading_matrix(x[2] + half * k2[2]) @ w2
        k4 = heading_matrix(x[2] + dt * k3[2]) @ w4
        # compensated sum: thousands of tiny increments onto O(1) coordinates
        y = (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4) - comp
        total = x + y
        comp = (total - x) - y
        x = total
        states[i + 1] = x
    return PoseTrajectory(times, states)
