"""Norm-bounded uncertain model covering every admissible hold interval.

The lifted matrices depend on ``h`` only through ``h`` and ``h**2`` (the
exponential of the nilpotent ``A`` is affine in time), so relative to a
nominal ``h_nom``::

    [A_tilde(h) - A_tilde(h_nom) | B_tilde(h) - B_tilde(h_nom)]
        = (h - h_nom) M1 + (h**2 - h_nom**2) M2

Factoring ``r_i M_i = U_i S_i V_i^T`` with ``r_i`` the largest admissible
``|h - h_nom|`` (resp. ``|h**2 - h_nom**2|``) gives::

    xi+ = A_nom xi + B_nom du + B_D d + B_p p
    p   = Delta q,  q = C_q xi + D_q du

with ``Delta(h) = blkdiag(a1(h) I, a2(h) I)`` and ``|a_i(h)| <= 1/(1+margin)``.
"""

from dataclasses import dataclass

import numpy as np

from .discretization import LiftedState, _vec, check_hold, lifted_matrices
from .linalg import spectral_norm, thin_svd


@dataclass(frozen=True)
class NormBoundedModel:
    A_nom: np.ndarray
    B_nom: np.ndarray
    B_D: np.ndarray
    B_p: np.ndarray
    C_q: np.ndarray
    D_q: np.ndarray
    h_nom: float
    radii: tuple  # (r1, r2), already without the margin
    ranks: tuple  # channel count contributed by each generator
    margin: float

    @property
    def n_channels(self):
        return self.B_p.shape[1]


@dataclass(frozen=True)
class CertificationReport:
    residual: float
    max_delta_norm: float
    grid_points: int
    n_channels: int
    passed: bool


def deviation_generators(sys):
    """``(M1, M2, h_nom, r1, r2)`` for the polynomial deviation in ``h``."""
    b = sys.bounds
    m = sys.model
    n, nu = m.n_states, m.n_inputs
    h_nom = b.sample_time - 0.5 * (b.tau_min + b.tau_max)
    ab = m.A @ m.B
    m1 = np.zeros((n + nu, n + nu + nu))
    m2 = np.zeros_like(m1)
    # A_tilde top-right is int_h^Ts, B_tilde top is int_0^h: equal and opposite
    m1[:n, n : n + nu] = -m.B
    m1[:n, n + nu :] = m.B
    m2[:n, n : n + nu] = -0.5 * ab
    m2[:n, n + nu :] = 0.5 * ab
    r1 = max(abs(b.h_min - h_nom), abs(b.h_max - h_nom))
    r2 = max(abs(b.h_min**2 - h_nom**2), abs(b.h_max**2 - h_nom**2))
    return m1, m2, h_nom, r1, r2


def build_embedding(sys, margin=1e-6):
    if margin < 0:
        raise ValueError("margin must be non-negative")
    n_x = sys.n_lifted
    m1, m2, h_nom, r1, r2 = deviation_generators(sys)
    a_nom, b_nom, b_d = lifted_matrices(sys, h_nom)
    left, right, ranks = [], [], []
    for r, gen in ((r1, m1), (r2, m2)):
        if r == 0.0 or not np.any(gen):
            ranks.append(0)
            continue
        u, s, v = thin_svd(r * gen)
        ranks.append(s.size)
        left.append(u * s)
        right.append(v.T)
    if left:
        b_p = (1.0 + margin) * np.hstack(left)
        cd = np.vstack(right)
    else:
        b_p = np.zeros((n_x, 0))
        cd = np.zeros((0, m1.shape[1]))
    return NormBoundedModel(
        A_nom=a_nom,
        B_nom=b_nom,
        B_D=b_d,
        B_p=b_p,
        C_q=cd[:, :n_x],
        D_q=cd[:, n_x:],
        h_nom=h_nom,
        radii=(r1, r2),
        ranks=tuple(ranks),
        margin=margin,
    )


def uncertainty_at(nb, h):
    """Structured ``Delta(h)`` reproducing the lifted matrices at ``h``."""
    r1, r2 = nb.radii
    scale = 1.0 + nb.margin
    diag = []
    if nb.ranks[0]:
        diag += [(h - nb.h_nom) / (r1 * scale)] * nb.ranks[0]
    if nb.ranks[1]:
        diag += [(h * h - nb.h_nom * nb.h_nom) / (r2 * scale)] * nb.ranks[1]
    return np.diag(np.array(diag, dtype=float)).reshape(len(diag), len(diag))


def reconstruct(nb, delta):
    """``(A_nom + B_p Delta C_q, B_nom + B_p Delta D_q)``."""
    bpd = nb.B_p @ delta
    return nb.A_nom + bpd @ nb.C_q, nb.B_nom + bpd @ nb.D_q


def certify_embedding(nb, sys, grid_points=1000):
    """Check coverage of the lifted family on a uniform ``h`` grid.

    Passes when every grid point is reproduced to 1e-10 with
    ``||Delta(h)||_2 < 1``.
    """
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    b = sys.bounds
    residual = 0.0
    worst = 0.0
    for h in np.linspace(b.h_min, b.h_max, grid_points):
        a_t, b_t, _ = lifted_matrices(sys, h)
        delta = uncertainty_at(nb, h)
        a_r, b_r = reconstruct(nb, delta)
        residual = max(
            residual,
            float(np.max(np.abs(a_t - a_r))),
            float(np.max(np.abs(b_t - b_r))),
        )
        worst = max(worst, spectral_norm(delta))
    passed = residual < 1e-10 and worst < 1.0
    return CertificationReport(residual, worst, int(grid_points), nb.n_channels, passed)


def uncertain_step(nb, xi, du, d, delta):
    delta = np.asarray(delta, dtype=float).reshape(nb.n_channels, nb.n_channels)
    if spectral_norm(delta) > 1.0 + 1e-12:
        raise ValueError(f"||Delta||_2 = {spectral_norm(delta):.6g} exceeds 1")
    xi = _vec(xi)
    du = _vec(du)
    q = nb.C_q @ xi + nb.D_q @ du
    p = delta @ q
    nxt = nb.A_nom @ xi + nb.B_nom @ du + nb.B_D @ _vec(d) + nb.B_p @ p
    return LiftedState.from_array(nxt)


def uncertain_step_at(nb, sys, xi, du, d, h):
    """:func:`uncertain_step` with the ``Delta`` belonging to hold interval ``h``."""
    check_hold(sys, h)
    return uncertain_step(nb, xi, du, d, uncertainty_at(nb, h))
