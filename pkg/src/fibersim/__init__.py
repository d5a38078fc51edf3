"""fibersim: reaction mechanisms on the two-disk configuration bundle.

Simulates infinitesimal lifting functions (reaction mechanisms) on the
bundle of safe two-vehicle configurations over the obstacle plane: the four
concrete mechanisms, their algebra, the RK4 path lift with collision
stopping, fiber motion planners and their compositions, the closed-form
collision calculus for constant-coefficient mechanisms, and a scenario
runner with a realtime adversary sandbox.
"""

from .errors import (
    BasePointMismatch,
    DegenerateGeometry,
    FiberMismatch,
    FibersimError,
    InadmissibleConfig,
    InvalidParameters,
    NonFiniteState,
    ScenarioError,
    SingularMatrix,
)
from .geometry import Mat2, ConformalMat2, Vec2, conformal, identity, inverse, operator_norm, rot90
from .bundle import (
    ADMISSIBILITY_TOL,
    SAFE_DISTANCE,
    BaseTangent,
    BundleModel,
    Config,
    TotalTangent,
    TwoDiskBundle,
    TWO_DISK,
    boundary_distance,
    differential_project,
    inward_normal_field,
    is_admissible,
    is_admissible_velocity,
    project,
)
from .lifting import (
    ActuationFunction,
    LiftOutcome,
    ReactionForm,
    ReactionMechanism,
    SampledPath,
    add_form,
    affine_combine,
    integrate_lift,
    mech_copy,
    mech_damped,
    mech_linear_const,
    mech_orbit,
    mech_radial,
    pushing_form,
    smoothstep_actuation,
    verify_linearity,
)
from .planner import (
    FiberPlan,
    Piece,
    Reparam,
    continuity_pieces,
    extended_plan,
    fiber_plan,
    moving_target_plan,
)
from .analysis import (
    Classification,
    CollisionGeometry,
    adversary_path,
    classify_obstacle_position,
    closed_form_cM,
    collinearity_check,
    collision_geometry,
    exact_collision,
)
from .scenario import (
    Scenario,
    TrajectoryRecord,
    arclength_spline_path,
    load_scenario,
    parse_scenario,
    spline_base_path,
)

__version__ = "0.1.0"
