"""Deterministic width planning for convolutional networks.

Models an architecture as an ordered unit list, computes its analytic costs
(FLOPs in MAC convention, parameters, memory), and reshapes its filter
widths with five piecewise-linear templates while holding FLOPs constant.
"""

from .cost import (
    BYTES_PER_SCALAR,
    CostReport,
    UnitCost,
    compute_cost,
    compute_flops,
    compute_params,
    cost_breakdown,
    total_memory_bytes,
)
from .model import (
    ArchitectureSpec,
    BottleneckUnit,
    ConvUnit,
    GlobalPoolUnit,
    PoolUnit,
    SchemaError,
    Unit,
    ValidationError,
    WidthVector,
    extract_widths,
    final_feature_width,
    load_spec,
    save_spec,
    validate,
)
from .planner import (
    DEFAULT_EPS,
    TEMPLATE_IDS,
    PlanOutcome,
    PlanResult,
    ToleranceError,
    plan_all,
    replace_widths,
    solve_width,
    template_widths,
)
from .presets import PRESET_NAMES, preset
from .report import ReportRow, build_rows, render_csv, render_text

__version__ = "0.1.0"

__all__ = [
    "ArchitectureSpec",
    "BYTES_PER_SCALAR",
    "BottleneckUnit",
    "ConvUnit",
    "CostReport",
    "DEFAULT_EPS",
    "GlobalPoolUnit",
    "PRESET_NAMES",
    "PlanOutcome",
    "PlanResult",
    "PoolUnit",
    "ReportRow",
    "SchemaError",
    "TEMPLATE_IDS",
    "ToleranceError",
    "Unit",
    "UnitCost",
    "ValidationError",
    "WidthVector",
    "build_rows",
    "compute_cost",
    "compute_flops",
    "compute_params",
    "cost_breakdown",
    "extract_widths",
    "final_feature_width",
    "load_spec",
    "plan_all",
    "preset",
    "render_csv",
    "render_text",
    "replace_widths",
    "save_spec",
    "solve_width",
    "template_widths",
    "total_memory_bytes",
    "validate",
]
