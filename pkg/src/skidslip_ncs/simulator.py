"""Co-simulation of the slipping robot against its lifted and norm-bounded models.

Each sampling period ``k``:

1. the error ``e_k`` of the nonlinear plant is measured at ``t_k = k Ts``;
2. the controller turns ``[e_k, du_{k-1}]`` into ``du_k``;
3. the plant keeps applying ``du_{k-1}`` until ``t_k + tau_k`` and ``du_k``
   afterwards, integrated with RK4 on a substep grid that contains the switch;
4. the lifted linear model and the norm-bounded model advance one step with
   the same ``tau_k``, ``d_k`` and ``du_k``.
"""

from dataclasses import dataclass, field, replace
from math import ceil, floor, pi, sin

import numpy as np

from .discretization import DelayBounds, LiftedState, LiftedSystem, lifted_matrices, lifted_step
from .embedding import build_embedding, uncertain_step, uncertainty_at
from .frame import TrackingError, TrajectorySegment, from_segment_frame, tracking_error
from .linalg import inverse2
from .linearization import build_linear_model
from .robot import ControlInput, PiecewiseConstant, Pose, RobotGeometry, SlipState, integrate_pose


@dataclass(frozen=True)
class ConstantSlip:
    d_mu_r: float = 0.0
    d_mu_l: float = 0.0
    kind = "constant"


@dataclass(frozen=True)
class SinusoidSlip:
    """``d_r = a sin(2 pi t / period)``, ``d_l = -d_r``, varying inside each period."""

    amplitude: float
    period: float
    kind = "sinusoid"


@dataclass(frozen=True)
class RandomWalkSlip:
    """Gaussian random walk sampled once per period, starting at zero."""

    step_size: float
    kind = "random_walk"


@dataclass(frozen=True)
class ConstantDelay:
    tau: float
    kind = "constant"


@dataclass(frozen=True)
class UniformRandomDelay:
    kind = "uniform_random"


@dataclass(frozen=True)
class TriangleWaveDelay:
    """Sweeps ``tau_min -> tau_max -> tau_min`` once per ``period`` seconds."""

    period: float
    kind = "triangle_wave"


@dataclass(frozen=True)
class OpenLoop:
    kind = "open_loop"


@dataclass(frozen=True)
class StaticGain:
    """``du_k = -K xi_k``; ``K=None`` means :func:`default_gain`."""

    K: np.ndarray = None
    kind = "static_gain"


@dataclass(frozen=True)
class Scenario:
    geometry: RobotGeometry = field(default_factory=lambda: RobotGeometry(0.1, 0.5))
    segment: TrajectorySegment = field(
        default_factory=lambda: TrajectorySegment(Pose(0.0, 0.0, 0.0), 1.0)
    )
    bounds: DelayBounds = field(default_factory=lambda: DelayBounds(0.02, 0.06, 0.1))
    initial_error: TrackingError = field(default_factory=lambda: TrackingError(0.1, 0.1, 0.1))
    delta_mu_max: float = 0.2
    horizon_steps: int = 10
    seed: int = 0
    slip_profile: object = field(default_factory=ConstantSlip)
    delay_profile: object = field(default_factory=UniformRandomDelay)
    controller: object = field(default_factory=OpenLoop)
    sim_substeps: int = 1000
    margin: float = 1e-6

    def __post_init__(self):
        if not 0 <= self.delta_mu_max < 1:
            raise ValueError("delta_mu_max must lie in [0, 1) so that mu stays positive")
        if self.horizon_steps < 0:
            raise ValueError("horizon_steps must be non-negative")
        if self.sim_substeps < 1:
            raise ValueError("sim_substeps must be positive")
        if self.margin < 0:
            raise ValueError("margin must be non-negative")

    def lifted_system(self):
        return LiftedSystem(build_linear_model(self.segment, self.geometry), self.bounds)


TRACE_COLUMNS = (
    "k", "t", "tau_k", "d_mu_r", "d_mu_l", "delta_v", "omega",
    "ex_nl", "ey_nl", "eth_nl", "ex_lin", "ey_lin", "eth_lin",
    "ex_nb", "ey_nb", "eth_nb", "div_lin", "div_nb",
)


@dataclass(frozen=True)
class SimTrace:
    t: np.ndarray
    tau: np.ndarray
    d: np.ndarray  # (N+1, 2)
    du: np.ndarray  # (N+1, 2)
    e_nl: np.ndarray  # (N+1, 3)
    e_lin: np.ndarray
    e_nb: np.ndarray

    @property
    def div_lin(self):
        return np.linalg.norm(self.e_nl - self.e_lin, axis=1)

    @property
    def div_nb(self):
        return np.linalg.norm(self.e_nl - self.e_nb, axis=1)

    def rows(self):
        """Table rows in :data:`TRACE_COLUMNS` order."""
        k = np.arange(len(self.t), dtype=float)
        return np.column_stack([
            k, self.t, self.tau, self.d, self.du,
            self.e_nl, self.e_lin, self.e_nb, self.div_lin, self.div_nb,
        ])


def _clip_slip(d, limit):
    return np.clip(d, -limit, limit)


def _delay_samples(sc, rng, n):
    b = sc.bounds
    prof = sc.delay_profile
    if isinstance(prof, ConstantDelay):
        raw = np.full(n, float(prof.tau))
    elif isinstance(prof, UniformRandomDelay):
        raw = rng.uniform(b.tau_min, b.tau_max, size=n)
    elif isinstance(prof, TriangleWaveDelay):
        phase = (np.arange(n) * b.sample_time / prof.period) % 1.0
        tri = 1.0 - np.abs(2.0 * phase - 1.0)
        raw = b.tau_min + (b.tau_max - b.tau_min) * tri
    else:
        raise TypeError(f"unknown delay profile {prof!r}")
    return np.clip(raw, b.tau_min, b.tau_max)


def quantize_delays(delays, bounds, substeps):
    """Snap delays to the substep grid, staying inside the bounds.

    Returns ``(tau, m)`` with ``tau = m * Ts / substeps``. Raises ``ValueError``
    if no grid point lies in ``[tau_min, tau_max]``.
    """
    dt = bounds.sample_time / substeps
    eps = 1e-9
    lo = ceil(bounds.tau_min / dt - eps)
    hi = floor(bounds.tau_max / dt + eps)
    if lo > hi:
        raise ValueError(
            f"no multiple of the substep {dt!r} lies in "
            f"[{bounds.tau_min!r}, {bounds.tau_max!r}]; increase sim_substeps"
        )
    m = np.clip(np.rint(np.asarray(delays) / dt).astype(int), lo, hi)
    tau = np.clip(m * dt, bounds.tau_min, bounds.tau_max)
    return tau, m


def _slip_signal(sc, rng, n):
    """Per-period samples ``d_k`` and the signal the nonlinear plant sees."""
    prof = sc.slip_profile
    ts = sc.bounds.sample_time
    lim = sc.delta_mu_max
    if isinstance(prof, ConstantSlip):
        d = _clip_slip(np.array([prof.d_mu_r, prof.d_mu_l], dtype=float), lim)
        samples = np.tile(d, (n, 1))
        return samples, SlipState(1.0 + d[0], 1.0 + d[1])
    if isinstance(prof, SinusoidSlip):
        w = 2.0 * pi / prof.period

        def dev(t):
            s = prof.amplitude * sin(w * t)
            return _clip_slip(np.array([s, -s]), lim)

        samples = np.array([dev(k * ts) for k in range(n)])
        return samples, lambda t: SlipState(*(1.0 + dev(t)))
    if isinstance(prof, RandomWalkSlip):
        samples = np.zeros((n, 2))
        for k in range(1, n):
            step = prof.step_size * rng.standard_normal(2)
            samples[k] = _clip_slip(samples[k - 1] + step, lim)
        breaks = tuple(k * ts for k in range(1, n))
        values = tuple(SlipState(1.0 + a, 1.0 + b) for a, b in samples)
        return samples, PiecewiseConstant(breaks, values)
    raise TypeError(f"unknown slip profile {prof!r}")


def sequence_generators(sc):
    """Delay and slip-deviation sequences of length ``horizon_steps + 1``.

    Deterministic in ``sc.seed``. Delays are already snapped to the substep
    grid; slip samples are the values at the sampling instants.
    """
    n = sc.horizon_steps + 1
    delay_seq, slip_seq = np.random.SeedSequence(sc.seed).spawn(2)
    tau, _ = quantize_delays(
        _delay_samples(sc, np.random.default_rng(delay_seq), n), sc.bounds, sc.sim_substeps
    )
    slips, _ = _slip_signal(sc, np.random.default_rng(slip_seq), n)
    return tau, slips


def _controllability_rank(a, b):
    n = a.shape[0]
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    return np.linalg.matrix_rank(np.hstack(blocks))


def default_gain(sys, tol=1e-10, max_iter=10_000):
    """LQR gain for the lifted model at the nominal hold interval.

    Iterates the discrete Riccati recursion with identity state and input
    weights from ``P = I`` until successive iterates differ by less than
    ``tol`` (max-abs). Raises ``ValueError`` when the lifted pair is not
    controllable (standstill, ``V_D = 0``) and ``RuntimeError`` when the
    iteration does not settle within ``max_iter`` steps.
    """
    b = sys.bounds
    h_nom = b.sample_time - 0.5 * (b.tau_min + b.tau_max)
    a, bm, _ = lifted_matrices(sys, h_nom)
    n = a.shape[0]
    if _controllability_rank(a, bm) < n:
        raise ValueError(
            "lifted model is not controllable (lateral error cannot be steered "
            f"at v_desired={sys.model.v_desired!r}); no stabilizing gain exists"
        )
    q = np.eye(n)
    r = np.eye(bm.shape[1])
    p = q.copy()
    for _ in range(max_iter):
        gain = inverse2(r + bm.T @ p @ bm) @ (bm.T @ p @ a)
        p_next = q + a.T @ p @ (a - bm @ gain)
        p_next = 0.5 * (p_next + p_next.T)
        if np.max(np.abs(p_next - p)) < tol:
            p = p_next
            return inverse2(r + bm.T @ p @ bm) @ (bm.T @ p @ a)
        p = p_next
    raise RuntimeError(f"Riccati iteration did not converge in {max_iter} steps")


def _gain(sc, sys):
    ctrl = sc.controller
    if isinstance(ctrl, OpenLoop):
        return None
    if isinstance(ctrl, StaticGain):
        if ctrl.K is None:
            return default_gain(sys)
        k = np.asarray(ctrl.K, dtype=float)
        if k.shape != (2, sys.n_lifted):
            raise ValueError(f"gain must be 2x{sys.n_lifted}, got {k.shape}")
        return k
    raise TypeError(f"unknown controller {ctrl!r}")


def run_scenario(sc):
    sys = sc.lifted_system()
    nb = build_embedding(sys, sc.margin)
    gain = _gain(sc, sys)
    n = sc.horizon_steps + 1
    ts = sc.bounds.sample_time
    dt = ts / sc.sim_substeps

    delay_seq, slip_seq = np.random.SeedSequence(sc.seed).spawn(2)
    tau, m_switch = quantize_delays(
        _delay_samples(sc, np.random.default_rng(delay_seq), n), sc.bounds, sc.sim_substeps
    )
    d_seq, plant_slip = _slip_signal(sc, np.random.default_rng(slip_seq), n)

    seg = sc.segment
    u_nom = seg.nominal_input
    q = from_segment_frame(Pose.from_array(sc.initial_error.as_array()), seg)
    xi_lin = LiftedState(sc.initial_error, np.zeros(2))
    xi_nb = xi_lin

    t = ts * np.arange(n)
    du = np.zeros((n, 2))
    e_nl = np.zeros((n, 3))
    e_lin = np.zeros((n, 3))
    e_nb = np.zeros((n, 3))
    du_prev = np.zeros(2)
    for k in range(n):
        e_k = tracking_error(q, seg, t[k]).as_array()
        e_nl[k] = e_k
        e_lin[k] = xi_lin.e.as_array()
        e_nb[k] = xi_nb.e.as_array()
        if gain is not None:
            du[k] = -gain @ np.concatenate([e_k, du_prev])
        if k == n - 1:
            break
        h = ts - tau[k]
        xi_lin = lifted_step(sys, xi_lin, du[k], d_seq[k], h)
        xi_nb = uncertain_step(nb, xi_nb, du[k], d_seq[k], uncertainty_at(nb, h))
        control = PiecewiseConstant(
            (t[k] + m_switch[k] * dt,),
            (
                ControlInput.from_array(u_nom + du_prev),
                ControlInput.from_array(u_nom + du[k]),
            ),
        )
        q = integrate_pose(q, control, plant_slip, sc.geometry, ts, dt, t0=t[k]).final
        du_prev = du[k]
    return SimTrace(t, tau, d_seq, du, e_nl, e_lin, e_nb)


def with_initial_error(sc, e):
    return replace(sc, initial_error=TrackingError.from_array(e))
