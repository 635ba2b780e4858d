"""Clarke-coordinate planning, trajectory generation and control for
displacement-actuated continuum robots."""

from .clarke import (
    ArcParameters,
    RobotGeometry,
    arc_to_clarke,
    clarke_modulus_argument,
    clarke_to_arc,
    clarke_to_joints,
    interop_transfer,
    joints_to_clarke,
    make_clarke_matrix,
)
from .config import FrameworkConfig, load_config, parse_config
from .control import ClarkeController, ControllerGains, decode_command, p_precomp_step, pd_step
from .errors import (
    ClarkeFrameError,
    ConfigError,
    ConstraintError,
    DimensionError,
    GeometryError,
    RegularityError,
)
from .geometry import Pose, cc_forward_kinematics, chain_segments, parallel_curve_displacement
from .orchestrator import ExperimentLog, SegmentLog, external_injection, run_episode
from .plant import Plant, PlantConfig, PlantState, measure, plant_step
from .sampler import SampleBounds, sample_clarke
from .trajectory import (
    KinematicLimits,
    TrajectoryPlan,
    TrajectorySample,
    compute_duration,
    map_limits_to_manifold,
    path_primitive,
    plan_clarke_trajectory,
    plan_joint_trajectory,
)

__version__ = "0.1.0"
