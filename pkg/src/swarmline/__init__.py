"""swarmline: deterministic simulation and certification toolkit for robot
swarm line formation, gathering, and chain straightening under limited
visibility.

The package models classic look-compute-move robots on the plane with square
or circular viewing ranges, implements four line-formation rules (an
oblivious averaging rule and three luminous wave-based rules), a collinear
gathering rule, and the go-to-the-middle chain straightener, and ships the
measurement machinery (potential functions, per-round and per-epoch drop
certificates, epoch accounting, byte-replayable run traces) used to check
their convergence guarantees empirically.
"""

from .geometry import TAU_GEO, Point2, RangeModel, is_connected
from .world import (
    GlobalConfiguration,
    Lights,
    LocalSnapshot,
    Move,
    RobotState,
    apply_moves,
    config_from_dict,
    config_from_json,
    config_to_dict,
    config_to_json,
    take_snapshot,
)
from .schedulers import (
    ActivationRecord,
    EpochLedger,
    Scheduler,
    SchedulerSpec,
    next_activation,
    parse_scheduler,
)
from .analysis import (
    GapVector,
    epoch_bound_checks,
    epsilon_approx,
    exact_line_solved,
    gaps_from_config,
    line_metrics,
    ln_epoch_budget,
    phi,
    phi_drop_bound_check,
    relative_drop_bound,
    sorted_difference_bound,
    w_update_oracle,
)
from .maxline import (
    lumi_fsync_compute,
    lumi_fsync_stationary_compute,
    lumi_ssync_compute,
    oblot_compute,
)
from .gathering import gathered, gathering_compute
from .chain import (
    ChainConfiguration,
    ChainFrame,
    chain_drop_bound,
    eps_reached,
    gtm_compute,
    gtm_target,
    phi2,
    random_chain,
)
from .fixtures import (
    diagonal_span_config,
    make_fixture,
    random_connected,
    stuck_check,
    vertical_line,
)
from .traces import Trace
from .runner import (
    ALGORITHMS,
    RunConfig,
    RunResult,
    SourceSpec,
    resolve_initial,
    simulate,
    sweep,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "TAU_GEO", "Point2", "RangeModel", "is_connected",
    "GlobalConfiguration", "Lights", "LocalSnapshot", "Move", "RobotState",
    "apply_moves", "take_snapshot",
    "config_from_dict", "config_from_json", "config_to_dict", "config_to_json",
    "ActivationRecord", "EpochLedger", "Scheduler", "SchedulerSpec",
    "next_activation", "parse_scheduler",
    "GapVector", "phi", "w_update_oracle", "phi_drop_bound_check",
    "sorted_difference_bound", "relative_drop_bound", "epoch_bound_checks",
    "gaps_from_config", "line_metrics", "epsilon_approx", "exact_line_solved",
    "ln_epoch_budget",
    "oblot_compute", "lumi_fsync_compute", "lumi_fsync_stationary_compute",
    "lumi_ssync_compute",
    "gathering_compute", "gathered",
    "ChainConfiguration", "ChainFrame", "gtm_compute", "gtm_target",
    "phi2", "eps_reached", "chain_drop_bound", "random_chain",
    "make_fixture", "random_connected", "diagonal_span_config",
    "vertical_line", "stuck_check",
    "Trace",
    "ALGORITHMS", "RunConfig", "RunResult", "SourceSpec", "resolve_initial",
    "simulate", "sweep", "verify",
    "__version__",
]
