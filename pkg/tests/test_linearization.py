import numpy as np
import pytest

from oracles import loglog_slope
from skidslip_ncs.frame import TrackingError, TrajectorySegment, error_derivative
from skidslip_ncs.linearization import build_linear_model, linear_error_derivative, numeric_jacobians
from skidslip_ncs.robot import ControlInput, Pose, RobotGeometry, SlipDeviation, SlipState


def model(v, d, theta0=0.0):
    seg = TrajectorySegment(Pose(0, 0, theta0), v)
    geom = RobotGeometry(0.1, d)
    return seg, geom, build_linear_model(seg, geom)


def test_printed_matrices():
    _, _, m = model(1.0, 0.5)
    np.testing.assert_array_equal(m.A, [[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    np.testing.assert_array_equal(m.B, [[1, 0], [0, 0], [0, 1]])
    np.testing.assert_array_equal(m.B_D, [[0.5, 0.5], [0, 0], [2, -2]])


def test_standstill_model():
    _, _, m = model(0.0, 0.5)
    assert not m.A.any() and not m.B_D.any()
    np.testing.assert_array_equal(m.B, [[1, 0], [0, 0], [0, 1]])


def test_other_substitution():
    _, _, m = model(2.0, 1.0)
    np.testing.assert_array_equal(m.B_D, [[1, 1], [0, 0], [2, -2]])


@pytest.mark.parametrize("v", [-1.0, 0.3, 2.0])
def test_model_structure(v):
    _, _, m = model(v, 0.7)
    np.testing.assert_array_equal(m.A @ m.A, np.zeros((3, 3)))
    assert np.count_nonzero(m.A) == 1 and m.A[1, 2] == v
    assert not m.B_D[1].any()


def test_numeric_jacobians_example():
    seg, geom, m = model(1.0, 0.5)
    a, b, bd = numeric_jacobians(seg, geom, 1e-6)
    for num, exact in ((a, m.A), (b, m.B), (bd, m.B_D)):
        assert np.max(np.abs(num - exact)) < 1e-6
    assert np.max(np.abs(a[:, :2])) < 1e-9
    assert np.max(np.abs(b[1])) < 1e-9


@pytest.mark.parametrize("theta0", [0.0, 1.1, -2.5])
def test_numeric_jacobians_grid(theta0):
    for v in np.linspace(0.1, 2.0, 5):
        for d in np.linspace(0.2, 1.0, 5):
            seg, geom, m = model(v, d, theta0)
            a, b, bd = numeric_jacobians(seg, geom, 1e-6)
            worst = max(np.max(np.abs(a - m.A)), np.max(np.abs(b - m.B)), np.max(np.abs(bd - m.B_D)))
            assert worst < 1e-5


def test_linear_error_derivative_examples():
    _, _, m = model(1.0, 0.5)
    zero = linear_error_derivative(m, TrackingError(), np.zeros(2), SlipDeviation())
    np.testing.assert_array_equal(zero, 0)
    got = linear_error_derivative(m, TrackingError(0, 0, 0.1), np.zeros(2), SlipDeviation())
    np.testing.assert_allclose(got, [0, 0.1, 0], atol=1e-16)
    got = linear_error_derivative(m, TrackingError(), np.zeros(2), SlipDeviation(0.1, -0.1))
    np.testing.assert_allclose(got, [0, 0, 0.4], atol=1e-15)


def test_linearization_residual_is_second_order():
    seg, geom, m = model(1.0, 0.5, theta0=0.4)
    e0 = np.array([0.3, -0.2, 0.5])
    du0 = np.array([0.4, -0.3])
    d0 = np.array([0.2, -0.1])
    scales = np.logspace(-1, -3, 5)
    residuals = []
    for s in scales:
        e, du, d = s * e0, s * du0, s * d0
        nonlinear = error_derivative(
            TrackingError.from_array(e),
            ControlInput.from_array(seg.nominal_input + du),
            SlipState(1 + d[0], 1 + d[1]),
            seg,
            geom,
        )
        linear = linear_error_derivative(m, e, du, d)
        residuals.append(np.linalg.norm(nonlinear - linear))
    assert loglog_slope(scales, residuals) == pytest.approx(2.0, abs=0.1)
