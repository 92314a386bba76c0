"""Width-distribution templates and the FLOPs-matching width solver.

A template is a parametric, piecewise-linear shape imposed on the ordered
filter widths of a network. Four of the five shapes pin their minimum to the
base distribution's minimum and expose the maximum ``n`` as the free
parameter; the uniform shape ``b`` uses the constant width itself. The solver
picks the integer ``n`` whose resulting architecture matches the base FLOPs
as closely as possible, and fails when the best match is outside tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .cost import CostReport, compute_cost, total_memory_bytes
from .model import (
    ArchitectureSpec,
    BottleneckUnit,
    ConvUnit,
    Unit,
    WidthVector,
    extract_widths,
    is_width_bearing,
    projection_required,
)

TEMPLATE_IDS = ("a", "b", "c", "d", "e")

TEMPLATE_SHAPES = {
    "a": "ascending ramp",
    "b": "uniform",
    "c": "descending ramp",
    "d": "centre-heavy",
    "e": "centre-light",
}

DEFAULT_EPS = 0.01


class ToleranceError(RuntimeError):
    """No integer width parameter meets the FLOPs tolerance.

    Carries the best plan found so its widths and error stay inspectable.
    """

    def __init__(self, result: "PlanResult"):
        best = result.solved_n
        err = result.flops_rel_error
        super().__init__(
            f"template '{result.template_id}': best n={best} misses FLOPs "
            f"tolerance (relative error {err:.4f})"
        )
        self.result = result


@dataclass(frozen=True)
class PlanResult:
    template_id: str
    solved_n: int
    widths: WidthVector
    cost: CostReport
    base_cost: CostReport
    flops_rel_error: float
    param_reduction_pct: float
    mem_reduction_pct: float
    tolerance_met: bool


@dataclass(frozen=True)
class PlanOutcome:
    """One template's planning result; ``error`` is set when planning failed
    outright (no result) or missed tolerance (best-effort result kept)."""

    template_id: str
    result: PlanResult | None
    error: str | None

    @property
    def ok(self) -> bool:
        return self.result is not None and self.result.tolerance_met


def template_widths(template_id: str, w_min: int, n: int, depth: int) -> WidthVector:
    """Widths of a template instantiated over ``depth`` positions.

    Positions are normalised to t = (l-1)/(depth-1). Shape ``b`` is the
    constant ``n``; the others interpolate between ``w_min`` and ``n``:
    ``a`` rises, ``c`` falls, ``d`` peaks at the centre, ``e`` dips there.
    Values are rounded half-up and clamped to at least 1. All arithmetic is
    exact (integer), so mirror symmetries hold bit-for-bit at any depth.
    """
    if template_id not in TEMPLATE_IDS:
        raise ValueError(f"unknown template id '{template_id}'")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if template_id == "b":
        if n < 1:
            raise ValueError("template 'b' needs n >= 1")
        return (n,) * depth
    if depth < 2:
        raise ValueError(f"template '{template_id}' needs depth >= 2")
    if n < w_min:
        raise ValueError(f"template '{template_id}' needs n >= w_min")
    if w_min < 1:
        raise ValueError("w_min must be >= 1")
    span = n - w_min
    denom = depth - 1
    widths = []
    for layer in range(depth):
        # ramp numerator over the common denominator (depth - 1)
        if template_id == "a":
            num = layer
        elif template_id == "c":
            num = denom - layer
        elif template_id == "d":
            num = denom - abs(2 * layer - denom)
        else:  # "e"
            num = abs(2 * layer - denom)
        # round-half-up of w_min + span * num / denom
        value = (2 * (w_min * denom + span * num) + denom) // (2 * denom)
        widths.append(max(1, value))
    return tuple(widths)


def replace_widths(spec: ArchitectureSpec, widths: WidthVector) -> ArchitectureSpec:
    """Reassign the width-bearing units in order, keeping everything else.

    Depth, unit kinds, kernels, strides, pool positions and num_classes are
    untouched; bottleneck projection flags are recomputed from the new
    channel wiring, and the classifier follows the final feature width by
    construction (it is never stored).
    """
    expected = sum(1 for u in spec.units if is_width_bearing(u))
    if len(widths) != expected:
        raise ValueError(
            f"width vector has {len(widths)} entries, spec has {expected} "
            "width-bearing units"
        )
    new_units: list[Unit] = []
    it = iter(widths)
    c = spec.input[2]
    for unit in spec.units:
        if isinstance(unit, ConvUnit):
            unit = ConvUnit(
                width=next(it), kernel=unit.kernel, stride=unit.stride, has_bn=unit.has_bn
            )
        elif isinstance(unit, BottleneckUnit):
            base = next(it)
            resized = BottleneckUnit(
                base_width=base, stride=unit.stride, expansion=unit.expansion
            )
            unit = BottleneckUnit(
                base_width=base,
                stride=unit.stride,
                has_projection=projection_required(resized, c),
                expansion=unit.expansion,
            )
        new_units.append(unit)
        if is_width_bearing(unit):
            c = unit.width if isinstance(unit, ConvUnit) else unit.expansion * unit.base_width
    return ArchitectureSpec(
        name=spec.name, input=spec.input, units=tuple(new_units), num_classes=spec.num_classes
    )


def _leftmost_at_value(f: Callable[[int], int], lo: int, hi: int, target: int) -> int:
    """Smallest n in [lo, hi] with f(n) == target, given f nondecreasing and
    f(hi) == target."""
    while hi - lo > 0:
        mid = (lo + hi) // 2
        if f(mid) >= target:
            hi = mid
        else:
            lo = mid + 1
    return hi


def solve_width(
    spec: ArchitectureSpec,
    template_id: str,
    eps: float = DEFAULT_EPS,
    batch: int = 1,
) -> PlanResult:
    """Solve for the integer width parameter matching the base FLOPs.

    Exponential bracketing from the base minimum width doubles ``n`` until
    the FLOPs overshoot, then bisects the monotone FLOPs curve and compares
    the two straddling integers; ties (including rounding plateaus) resolve
    to the smallest n. Raises ToleranceError when the closest achievable
    FLOPs are more than ``eps`` away in relative terms.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    base_widths = extract_widths(spec)
    depth = len(base_widths)
    if depth < 2 and template_id != "b":
        raise ValueError(f"template '{template_id}' needs at least 2 width-bearing units")
    w_min = min(base_widths)
    base_cost = compute_cost(spec)
    base_flops = base_cost.flops

    cache: dict[int, int] = {}

    def flops_at(n: int) -> int:
        if n not in cache:
            widths = template_widths(template_id, w_min, n, depth)
            cache[n] = compute_cost(replace_widths(spec, widths)).flops
        return cache[n]

    degenerate = template_id != "b" and template_widths(
        template_id, w_min, w_min + (1 << 20), depth
    ) == template_widths(template_id, w_min, w_min, depth)

    if degenerate or flops_at(w_min) >= base_flops:
        # Width curve is n-independent (centre-peak at depth 2), or the
        # smallest admissible n already meets/overshoots the base.
        best_n = w_min
    else:
        lo, hi = w_min, 2 * w_min
        while flops_at(hi) < base_flops:
            lo, hi = hi, 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if flops_at(mid) >= base_flops:
                hi = mid
            else:
                lo = mid
        err_lo = base_flops - flops_at(lo)
        err_hi = flops_at(hi) - base_flops
        best_n = lo if err_lo <= err_hi else hi
        # Rounding can flatten the curve; slide to the first n on the plateau
        # so the result matches an exhaustive first-argmin scan.
        best_n = _leftmost_at_value(flops_at, w_min, best_n, flops_at(best_n))

    widths = template_widths(template_id, w_min, best_n, depth)
    cost = compute_cost(replace_widths(spec, widths))
    rel_error = abs(cost.flops - base_flops) / base_flops
    result = PlanResult(
        template_id=template_id,
        solved_n=best_n,
        widths=widths,
        cost=cost,
        base_cost=base_cost,
        flops_rel_error=rel_error,
        param_reduction_pct=100.0 * (1.0 - cost.params / base_cost.params),
        mem_reduction_pct=100.0
        * (1.0 - total_memory_bytes(cost, batch) / total_memory_bytes(base_cost, batch)),
        tolerance_met=rel_error <= eps,
    )
    if not result.tolerance_met:
        raise ToleranceError(result)
    return result


def plan_all(
    spec: ArchitectureSpec, eps: float = DEFAULT_EPS, batch: int = 1
) -> list[PlanOutcome]:
    """Solve every template in id order; failures never abort the rest."""
    outcomes = []
    for template_id in TEMPLATE_IDS:
        try:
            result = solve_width(spec, template_id, eps=eps, batch=batch)
            outcomes.append(PlanOutcome(template_id, result, None))
        except ToleranceError as exc:
            outcomes.append(PlanOutcome(template_id, exc.result, str(exc)))
        except ValueError as exc:
            outcomes.append(PlanOutcome(template_id, None, str(exc)))
    return outcomes


def plan_result_to_json_dict(result: PlanResult) -> dict:
    from .cost import report_to_json_dict

    return {
        "template": result.template_id,
        "n": result.solved_n,
        "widths": list(result.widths),
        "cost": report_to_json_dict(result.cost),
        "base_cost": report_to_json_dict(result.base_cost),
        "flops_rel_error": result.flops_rel_error,
        "param_reduction_pct": result.param_reduction_pct,
        "mem_reduction_pct": result.mem_reduction_pct,
        "tolerance_met": result.tolerance_met,
    }
