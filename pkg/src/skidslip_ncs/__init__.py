"""Uncertain sampled-data model of a slipping tracked robot under network delay."""

from .discretization import (
    DelayBounds,
    LiftedState,
    LiftedSystem,
    combine_delays,
    hold_interval,
    lifted_matrices,
    lifted_step,
    zoh_integral,
)
from .embedding import (
    CertificationReport,
    NormBoundedModel,
    build_embedding,
    certify_embedding,
    deviation_generators,
    uncertain_step,
    uncertainty_at,
)
from .frame import (
    TrackingError,
    TrajectorySegment,
    desired_pose,
    error_derivative,
    from_segment_frame,
    to_segment_frame,
    tracking_error,
)
from .linearization import (
    LinearErrorModel,
    build_linear_model,
    linear_error_derivative,
    numeric_jacobians,
)
from .robot import (
    ControlInput,
    MotorSpeeds,
    PiecewiseConstant,
    Pose,
    RobotGeometry,
    SlipDeviation,
    SlipState,
    effective_velocity,
    integrate_pose,
    nominal_motor_speeds,
    pose_derivative,
)
from .simulator import Scenario, SimTrace, default_gain, run_scenario, sequence_generators

__version__ = "0.1.0"
