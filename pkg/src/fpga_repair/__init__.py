"""Repair planning for FPGA logic-block matrices with multiple faults."""

__version__ = "0.1.0"

from .exact import (
    Axis,
    CapacityError,
    Clause,
    CoverageTable,
    LineId,
    RepairPlan,
    brute_force_min_cover,
    build_coverage_table,
    estimate_complexity,
    expand_to_dnf,
    minimal_covers,
    select_repair_plan,
    synthesize_cnf,
)
from .experiment import ExperimentConfig, TrialRecord, export_report, run_batch, run_trial
from .model import (
    FaultCoord,
    FaultMatrix,
    ParseError,
    SpareBudget,
    TileConfig,
    fault_coords,
    inject_faults,
    parse_fault_matrix,
    render_ascii,
)
from .tiles import (
    BandAxis,
    CompressedMatrix,
    TileRepairResult,
    brute_force_band_cover,
    choose_strategy,
    compress,
    coverage_quality,
    greedy_cover,
    solve_tiles,
    structurization,
)
