from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skidslip_ncs.robot import (
    ControlInput,
    PiecewiseConstant,
    Pose,
    RobotGeometry,
    SlipDeviation,
    SlipState,
    coupling_matrix,
    effective_velocity,
    heading_matrix,
    integrate_pose,
    nominal_motor_speeds,
    pose_derivative,
)

GEOM = RobotGeometry(0.1, 0.5)
finite = st.floats(-5, 5, allow_nan=False)
positive = st.floats(0.05, 3.0)


def test_types_validate():
    with pytest.raises(ValueError):
        RobotGeometry(0.0, 1.0)
    with pytest.raises(ValueError):
        SlipState(0.0, 1.0)
    with pytest.raises(ValueError):
        Pose(float("inf"), 0, 0)
    assert SlipDeviation(0.1, -0.2).slip() == SlipState(1.1, 0.8)


def test_heading_matrix():
    np.testing.assert_array_equal(heading_matrix(0.0), [[1, 0], [0, 0], [0, 1]])
    np.testing.assert_allclose(heading_matrix(pi / 2), [[0, 0], [1, 0], [0, 1]], atol=1e-16)


@given(st.floats(-50, 50))
def test_heading_column_unit(theta):
    assert np.linalg.norm(heading_matrix(theta)[:, 0]) == pytest.approx(1.0, abs=1e-15)


def test_coupling_matrix():
    np.testing.assert_allclose(coupling_matrix(GEOM), [[0.05, 0.05], [0.2, -0.2]], rtol=1e-15)
    np.testing.assert_array_equal(coupling_matrix(RobotGeometry(2, 2)), [[1, 1], [1, -1]])


@given(positive, positive)
def test_coupling_determinant(r, d):
    j = coupling_matrix(RobotGeometry(r, d))
    assert np.linalg.det(j) == pytest.approx(-r * r / d, rel=1e-12)


def test_nominal_motor_speeds():
    np.testing.assert_allclose(nominal_motor_speeds(ControlInput(1, 0), GEOM).as_array(), [10, 10])
    np.testing.assert_array_equal(nominal_motor_speeds(ControlInput(0, 0), GEOM).as_array(), [0, 0])
    np.testing.assert_allclose(
        nominal_motor_speeds(ControlInput(0, 1), GEOM).as_array(), [2.5, -2.5], rtol=1e-14
    )


def test_effective_velocity_example():
    u = effective_velocity(ControlInput(1, 0), SlipState(0.9, 1.0), GEOM)
    np.testing.assert_allclose(u.as_array(), [0.95, -0.2], atol=1e-15)


@given(finite, finite)
def test_effective_velocity_identity_slip(v, w):
    u_hat = ControlInput(v, w)
    np.testing.assert_array_equal(effective_velocity(u_hat, SlipState(), GEOM).as_array(), u_hat.as_array())


@given(finite, finite, st.floats(0.1, 2.0))
def test_effective_velocity_uniform_slip(v, w, c):
    u = effective_velocity(ControlInput(v, w), SlipState(c, c), GEOM)
    np.testing.assert_allclose(u.as_array(), [c * v, c * w], rtol=1e-12, atol=1e-12)


@given(finite, finite, st.floats(-3, 3), positive, positive)
def test_effective_velocity_linear_in_input(v, w, alpha, mr, ml):
    slip = SlipState(mr, ml)
    base = effective_velocity(ControlInput(v, w), slip, GEOM).as_array()
    scaled = effective_velocity(ControlInput(alpha * v, alpha * w), slip, GEOM).as_array()
    np.testing.assert_allclose(scaled, alpha * base, rtol=1e-12, atol=1e-12)


def test_pose_derivative_examples():
    np.testing.assert_array_equal(
        pose_derivative(Pose(0, 0, 0), ControlInput(1, 0), SlipState(), GEOM), [1, 0, 0]
    )
    got = pose_derivative(Pose(0, 0, pi / 2), ControlInput(1, 0), SlipState(0.9, 1.0), GEOM)
    np.testing.assert_allclose(got, [0, 0.95, -0.2], atol=1e-15)


@given(finite, finite, finite, finite, finite, positive, positive)
def test_pose_derivative_properties(x, y, th, v, w, mr, ml):
    slip = SlipState(mr, ml)
    rate = pose_derivative(Pose(x, y, th), ControlInput(v, w), slip, GEOM)
    moved = pose_derivative(Pose(x + 3.0, y - 7.0, th), ControlInput(v, w), slip, GEOM)
    np.testing.assert_array_equal(rate, moved)
    v_eff = effective_velocity(ControlInput(v, w), slip, GEOM).v
    assert np.hypot(rate[0], rate[1]) == pytest.approx(abs(v_eff), rel=1e-12, abs=1e-12)


def test_integrate_straight_line():
    traj = integrate_pose(Pose(0, 0, 0), ControlInput(1, 0), SlipState(), GEOM, 1.0, 1e-2)
    np.testing.assert_allclose(traj.final.as_array(), [1, 0, 0], atol=1e-12)
    assert len(traj) == 101


def test_integrate_pure_rotation():
    traj = integrate_pose(Pose(0.3, -0.2, 0), ControlInput(0, 0.7), SlipState(), GEOM, 1.0, 1e-2)
    np.testing.assert_allclose(traj.final.as_array(), [0.3, -0.2, 0.7], atol=1e-12)


def arc_error(dt):
    t = pi / 2
    final = integrate_pose(Pose(0, 0, 0), ControlInput(1, 1), SlipState(), GEOM, t, dt).final
    return np.hypot(final.x - np.sin(t), final.y - (1 - np.cos(t)))


def test_integrate_circular_arc():
    assert arc_error(pi / 2 / 1571) < 1e-8


def test_integration_is_fourth_order():
    # dt spans one decade; each halving should cut the error ~16x
    dts = [pi / 2 / n for n in (10, 20, 40, 80, 100)]
    errs = [arc_error(dt) for dt in dts]
    for e_coarse, e_fine in zip(errs[:3], errs[1:4]):
        assert 13 < e_coarse / e_fine < 19
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert slope == pytest.approx(4.0, abs=0.15)


def test_piecewise_constant_switch_is_exact():
    sig = PiecewiseConstant((0.3,), (ControlInput(1, 0), ControlInput(0, 0)))
    final = integrate_pose(Pose(0, 0, 0), sig, SlipState(), GEOM, 1.0, 0.01).final
    assert final.x == pytest.approx(0.3, abs=1e-12)


def test_misaligned_switch_rejected():
    sig = PiecewiseConstant((0.305,), (ControlInput(1, 0), ControlInput(0, 0)))
    with pytest.raises(ValueError, match="grid"):
        integrate_pose(Pose(0, 0, 0), sig, SlipState(), GEOM, 1.0, 0.01)
    with pytest.raises(ValueError):
        integrate_pose(Pose(0, 0, 0), ControlInput(1, 0), SlipState(), GEOM, 1.0, 0.3)


def test_time_varying_slip_callable():
    # mu_r = mu_l = 1 + 0.5 t on a straight line: x(t) = t + t^2/4
    slip = lambda t: SlipState(1 + 0.5 * t, 1 + 0.5 * t)
    final = integrate_pose(Pose(0, 0, 0), ControlInput(1, 0), slip, GEOM, 1.0, 0.1).final
    assert final.x == pytest.approx(1.25, abs=1e-13)
