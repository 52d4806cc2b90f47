"""Round-based energy simulator for cluster routing in wireless sensor networks.

Three protocols run on a shared engine: a segment-based scheme with
density-controlled deployment, rank-rotation head election, and inward
relay routing, plus probabilistic and centralized clustering baselines.
"""

from .analysis import (
    AnalyticParams,
    CrosscheckReport,
    inner_square_tx_energy,
    middle_ring_ch_energy,
    outer_ring_ch_energy,
    ring_member_tx_energy,
    run_crosscheck,
)
from .baselines import LeachCPlanner, LeachParams, LeachPlanner, leach_threshold
from .config import load_config, load_sweep
from .ddr import DdrPlanner, assign_members, elect_chs, route_next_hop
from .deployment import (
    NodeState,
    place_density_controlled,
    place_uniform_random,
    segment_quotas,
)
from .engine import (
    PROTOCOLS,
    RoundRecord,
    SimConfig,
    SimSummary,
    build_simulation,
    compute_summary,
    run_round,
    run_sim,
)
from .errors import (
    ConfigError,
    ConfigMismatchError,
    DdrsimError,
    EmptyTraceError,
    InvalidPopulationError,
    OutOfFieldError,
    PlanStateMismatchError,
)
from .geometry import Point, Rect, Segment, SegmentLayout, build_layout, square_corners
from .plan import BS, RoundPlan
from .radio import RadioParams, agg_energy, crossover_distance, rx_energy, tx_energy

__version__ = "0.1.0"

__all__ = [
    "AnalyticParams",
    "BS",
    "ConfigError",
    "ConfigMismatchError",
    "CrosscheckReport",
    "DdrPlanner",
    "DdrsimError",
    "EmptyTraceError",
    "InvalidPopulationError",
    "LeachCPlanner",
    "LeachParams",
    "LeachPlanner",
    "NodeState",
    "OutOfFieldError",
    "PlanStateMismatchError",
    "PROTOCOLS",
    "Point",
    "Rect",
    "RadioParams",
    "RoundPlan",
    "RoundRecord",
    "Segment",
    "SegmentLayout",
    "SimConfig",
    "SimSummary",
    "agg_energy",
    "assign_members",
    "build_layout",
    "build_simulation",
    "compute_summary",
    "crossover_distance",
    "elect_chs",
    "inner_square_tx_energy",
    "leach_threshold",
    "load_config",
    "load_sweep",
    "middle_ring_ch_energy",
    "outer_ring_ch_energy",
    "place_density_controlled",
    "place_uniform_random",
    "ring_member_tx_energy",
    "route_next_hop",
    "run_crosscheck",
    "run_round",
    "run_sim",
    "rx_energy",
    "segment_quotas",
    "square_corners",
    "tx_energy",
    "__version__",
]
