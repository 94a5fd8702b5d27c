"""Energy-efficiency / spectral-efficiency tradeoff for full-duplex small cells."""

from .channel import (
    PathLossModel,
    Scenario,
    UserDrop,
    build_scenario,
    generate_drop,
    noise_power_w,
    normalized_cnr,
    path_loss_db,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    FdTradeoffError,
    PreconditionViolated,
    SolverError,
)
from .multi_user import (
    Allocation,
    DualVars,
    LinkAllocation,
    MinPowerSolution,
    SolverConfig,
    ee_at,
    energy_efficiency,
    hd_baseline_min_power,
    pair_subproblem,
    perspective_cost,
    solve_min_total_power,
    valid_pair_mask,
)
from .single_pair import (
    CaseLabel,
    GainTriple,
    PowerSplit,
    case_boundary_rate,
    compare_ee,
    fd_necessary_condition,
    fd_sum_rate,
    hd_min_power,
    min_power,
    recover_split,
    select_case,
)
from .tradeoff import TradeoffCurve, max_ee, trace_curve, unimodality_report

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "CaseLabel",
    "ConfigurationError",
    "ConvergenceError",
    "DualVars",
    "FdTradeoffError",
    "GainTriple",
    "LinkAllocation",
    "MinPowerSolution",
    "PathLossModel",
    "PowerSplit",
    "PreconditionViolated",
    "Scenario",
    "SolverConfig",
    "SolverError",
    "TradeoffCurve",
    "UserDrop",
    "build_scenario",
    "case_boundary_rate",
    "compare_ee",
    "ee_at",
    "energy_efficiency",
    "fd_necessary_condition",
    "fd_sum_rate",
    "generate_drop",
    "hd_baseline_min_power",
    "hd_min_power",
    "max_ee",
    "min_power",
    "noise_power_w",
    "normalized_cnr",
    "pair_subproblem",
    "path_loss_db",
    "perspective_cost",
    "recover_split",
    "select_case",
    "solve_min_total_power",
    "trace_curve",
    "unimodality_report",
    "valid_pair_mask",
]
