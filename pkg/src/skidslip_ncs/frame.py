"""Segment-aligned frame, desired motion and tracking error.

A straight trajectory segment starts at ``origin = (x0, y0, theta0)`` in the
world frame and is travelled at constant speed ``v_desired`` with zero turn
rate. Poses are compared in the segment frame, whose x-axis points along the
segment.
"""

from dataclasses import dataclass
from math import cos, isfinite, sin

import numpy as np

from .linalg import inverse2
from .robot import Pose, _effective, coupling_matrix, heading_matrix


@dataclass(frozen=True)
class TrajectorySegment:
    origin: Pose
    v_desired: float

    def __post_init__(self):
        if not isfinite(self.v_desired):
            raise ValueError("v_desired must be finite")

    @property
    def nominal_input(self):
        return np.array([self.v_desired, 0.0])


@dataclass(frozen=True)
class TrackingError:
    e_x: float = 0.0
    e_y: float = 0.0
    e_theta: float = 0.0

    def __post_init__(self):
        for name in ("e_x", "e_y", "e_theta"):
            if not isfinite(getattr(self, name)):
                raise ValueError(f"TrackingError.{name} must be finite")

    def as_array(self):
        return np.array([self.e_x, self.e_y, self.e_theta])

    @classmethod
    def from_array(cls, v):
        return cls(float(v[0]), float(v[1]), float(v[2]))


def world_to_segment_rotation(theta0):
    c, s = cos(theta0), sin(theta0)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def to_segment_frame(q, seg):
    rot = world_to_segment_rotation(seg.origin.theta)
    return Pose.from_array(rot @ (q.as_array() - seg.origin.as_array()))


def from_segment_frame(q_seg, seg):
    """Inverse of :func:`to_segment_frame`."""
    rot = world_to_segment_rotation(seg.origin.theta)
    return Pose.from_array(seg.origin.as_array() + rot.T @ q_seg.as_array())


def desired_pose(seg, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    return Pose(seg.v_desired * t, 0.0, 0.0)


def tracking_error(q, seg, t):
    e = to_segment_frame(q, seg).as_array() - desired_pose(seg, t).as_array()
    return TrackingError.from_array(e)


def error_derivative(e, u_hat, slip, seg, geom):
    """Nonlinear tracking-error rate.

    The world heading is recovered as ``theta0 + e_theta``; the frame rotation
    is constant so this is exact.
    """
    theta = seg.origin.theta + e.e_theta
    j = coupling_matrix(geom)
    body = _effective(u_hat.as_array(), slip.as_array(), j, inverse2(j))
    rate = world_to_segment_rotation(seg.origin.theta) @ (heading_matrix(theta) @ body)
    rate[0] -= seg.v_desired
    return rate
