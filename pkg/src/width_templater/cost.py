"""Analytic resource accounting: FLOPs (MAC convention), parameters, memory.

FLOPs count one multiply-accumulate per multiply, with no doubling for the
adds; batch norm, activations and pooling contribute zero. Parameters follow
the usual conv/BN bookkeeping: a conv followed by BN carries no bias and two
affine scalars per output channel. All scalars are 32-bit (4 bytes).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ArchitectureSpec,
    BottleneckUnit,
    ConvUnit,
    GlobalPoolUnit,
    PoolUnit,
    unit_shapes,
)

BYTES_PER_SCALAR = 4


@dataclass(frozen=True)
class CostReport:
    flops: int
    params: int
    weight_bytes: int
    activation_bytes_per_sample: int


@dataclass(frozen=True)
class UnitCost:
    """Per-unit slice of the totals; the classifier appears as a final row."""

    label: str
    flops: int
    params: int
    activation_elems: int
    out_shape: tuple[int, int, int]  # (channels, height, width)


def _conv_flops(k: int, c_in: int, c_out: int, h_out: int, w_out: int) -> int:
    return k * k * c_in * c_out * h_out * w_out


def _conv_params(k: int, c_in: int, c_out: int, has_bn: bool) -> int:
    weights = k * k * c_in * c_out
    return weights + (2 * c_out if has_bn else c_out)


def cost_breakdown(spec: ArchitectureSpec) -> list[UnitCost]:
    """Per-unit costs in unit order, plus one trailing classifier row.

    Activation elements are each unit's output tensor size; the classifier
    row contributes parameters and FLOPs but no activation storage.
    """
    rows: list[UnitCost] = []
    for i, (unit, (c_in, h_in, w_in), out) in enumerate(unit_shapes(spec)):
        c_out, h_out, w_out = out
        if isinstance(unit, ConvUnit):
            flops = _conv_flops(unit.kernel, c_in, unit.width, h_out, w_out)
            params = _conv_params(unit.kernel, c_in, unit.width, unit.has_bn)
            label = f"conv{i}"
        elif isinstance(unit, BottleneckUnit):
            b = unit.base_width
            e = unit.expansion
            hw = h_out * w_out
            # 1x1 reduce at input resolution, 3x3 (strided) and 1x1 expand at
            # output resolution; projection follows the 3x3's stride.
            flops = c_in * b * h_in * w_in + 9 * b * b * hw + b * e * b * hw
            params = (
                _conv_params(1, c_in, b, True)
                + _conv_params(3, b, b, True)
                + _conv_params(1, b, e * b, True)
            )
            if unit.has_projection:
                flops += c_in * e * b * hw
                params += _conv_params(1, c_in, e * b, True)
            label = f"bottleneck{i}"
        elif isinstance(unit, PoolUnit):
            flops, params, label = 0, 0, f"pool{i}"
        elif isinstance(unit, GlobalPoolUnit):
            flops, params, label = 0, 0, f"gap{i}"
        else:  # pragma: no cover - closed variant set
            raise TypeError(f"unknown unit kind: {unit!r}")
        rows.append(UnitCost(label, flops, params, c_out * h_out * w_out, out))

    c_final = rows[-1].out_shape[0] if rows else spec.input[2]
    rows.append(
        UnitCost(
            "classifier",
            flops=c_final * spec.num_classes,
            params=c_final * spec.num_classes + spec.num_classes,
            activation_elems=0,
            out_shape=(spec.num_classes, 1, 1),
        )
    )
    return rows


def compute_cost(spec: ArchitectureSpec) -> CostReport:
    rows = cost_breakdown(spec)
    flops = sum(r.flops for r in rows)
    params = sum(r.params for r in rows)
    activations = sum(r.activation_elems for r in rows)
    return CostReport(
        flops=flops,
        params=params,
        weight_bytes=BYTES_PER_SCALAR * params,
        activation_bytes_per_sample=BYTES_PER_SCALAR * activations,
    )


def compute_flops(spec: ArchitectureSpec) -> int:
    return compute_cost(spec).flops


def compute_params(spec: ArchitectureSpec) -> int:
    return compute_cost(spec).params


def total_memory_bytes(report: CostReport, batch: int = 1) -> int:
    """Weights plus batch-scaled activation storage.

    A plain inference/training footprint estimate; callers wanting framework
    or optimizer overheads apply their own multiplier on top.
    """
    if batch < 1:
        raise ValueError("batch must be >= 1")
    return report.weight_bytes + batch * report.activation_bytes_per_sample


def report_to_json_dict(report: CostReport) -> dict:
    return {
        "flops": report.flops,
        "params": report.params,
        "weight_bytes": report.weight_bytes,
        "activation_bytes_per_sample": report.activation_bytes_per_sample,
    }
