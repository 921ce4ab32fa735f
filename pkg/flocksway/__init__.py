from .commands import CommandResult, create_commander, keyword, var  # noqa: F401
from .config import format_config, parse_config  # noqa: F401
from .detection import RunClass, RunRecord, classify_run  # noqa: F401
from .error import FlockswayError  # noqa: F401
from .harness import SweepSpec, SweepVariable, run_single, run_sweep  # noqa: F401
from .model import (  # noqa: F401
    FlockState,
    InfluencerPlacement,
    Placement,
    Role,
    SimConfig,
    Topology,
    UpdateRule,
    init_state,
    make_rng,
)

__version__ = "0.1.1"
