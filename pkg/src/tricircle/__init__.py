"""Curvature-bounded trajectories of prescribed length built from three tangent arcs."""
from .ccc import (
    CccTrajectory,
    Family,
    Hyperbola,
    build_hyperbola,
    build_trajectory,
    changeover_points,
    csc_limit,
    discontinuities,
    length_fn,
    middle_center,
    middle_radius,
)
from .dubins import DubinsSolution, PairClass, all_word_solutions, classify_pair, shortest
from .errors import (
    BelowMinimumError,
    DegeneratePairError,
    DegenerateTangencyError,
    GapInversionError,
    GeometryError,
    InvalidRadiusError,
    NoGuaranteeError,
    NoHyperbolaError,
    NonexistentLimitError,
    PlanningError,
    PoleError,
    UnreachableLengthError,
)
from .geometry import (
    Arc,
    OrientedPoint,
    SignedCircle,
    TangencyKind,
    arc_between,
    sample,
    tangency,
    terminal_circle,
)
from .oracle import ValidationReport, gap_scan, grid_min_length, jump_probe, validate
from .solver import (
    LengthSet,
    RadiiPlanClass,
    classify_radii,
    enumerate_plans,
    minimal_trajectory,
    plan,
    plan_detailed,
    plan_with_radii,
    reachable_lengths,
)

__version__ = "0.1.0"
