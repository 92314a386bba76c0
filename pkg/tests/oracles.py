"""Brute-force counting oracles, independent of the analytic formulas.

Parameters are counted by materialising every weight tensor and summing
element counts; FLOPs by literally iterating the multiply loops of a naive
same-padded convolution. Both stay deliberately dumb so they can disagree
with the production code if it ever goes wrong.
"""

from __future__ import annotations

import numpy as np

from width_templater import (
    ArchitectureSpec,
    BottleneckUnit,
    ConvUnit,
    GlobalPoolUnit,
    PoolUnit,
    compute_flops,
    extract_widths,
    replace_widths,
    template_widths,
)
from width_templater.model import unit_shapes


def weight_tensor_shapes(spec: ArchitectureSpec) -> list[tuple[int, ...]]:
    shapes: list[tuple[int, ...]] = []

    def conv(k, c_in, c_out, bn):
        shapes.append((k, k, c_in, c_out))
        if bn:
            shapes.append((c_out,))  # gamma
            shapes.append((c_out,))  # beta
        else:
            shapes.append((c_out,))  # bias

    c = spec.input[2]
    for unit in spec.units:
        if isinstance(unit, ConvUnit):
            conv(unit.kernel, c, unit.width, unit.has_bn)
            c = unit.width
        elif isinstance(unit, BottleneckUnit):
            b, e = unit.base_width, unit.expansion
            conv(1, c, b, True)
            conv(3, b, b, True)
            conv(1, b, e * b, True)
            if unit.has_projection:
                conv(1, c, e * b, True)
            c = e * b
        elif isinstance(unit, (PoolUnit, GlobalPoolUnit)):
            pass
    shapes.append((c, spec.num_classes))
    shapes.append((spec.num_classes,))
    return shapes


def brute_force_params(spec: ArchitectureSpec) -> int:
    return sum(int(np.zeros(shape).size) for shape in weight_tensor_shapes(spec))


def _naive_conv_multiplies(c_in: int, c_out: int, kernel: int, h_out: int, w_out: int) -> int:
    count = 0
    for _ in range(h_out):
        for _ in range(w_out):
            for _ in range(c_out):
                for _ in range(kernel):
                    for _ in range(kernel):
                        count += c_in
    return count


def brute_force_flops(spec: ArchitectureSpec) -> int:
    count = 0
    for unit, (c_in, h_in, w_in), (c_out, h_out, w_out) in unit_shapes(spec):
        if isinstance(unit, ConvUnit):
            count += _naive_conv_multiplies(c_in, unit.width, unit.kernel, h_out, w_out)
        elif isinstance(unit, BottleneckUnit):
            b, e = unit.base_width, unit.expansion
            count += _naive_conv_multiplies(c_in, b, 1, h_in, w_in)
            count += _naive_conv_multiplies(b, b, 3, h_out, w_out)
            count += _naive_conv_multiplies(b, e * b, 1, h_out, w_out)
            if unit.has_projection:
                count += _naive_conv_multiplies(c_in, e * b, 1, h_out, w_out)
    c_final = spec.input[2]
    for unit in spec.units:
        if isinstance(unit, ConvUnit):
            c_final = unit.width
        elif isinstance(unit, BottleneckUnit):
            c_final = unit.expansion * unit.base_width
    for _ in range(spec.num_classes):
        for _ in range(c_final):
            count += 1
    return count


def exhaustive_scan_n(spec: ArchitectureSpec, template_id: str, cap: int = 8192) -> int:
    """Linear scan of n from the base minimum upward, keeping the first
    argmin of |flops(n) - base_flops|. Stops once the monotone FLOPs curve
    has crossed the base value (nothing later can do better)."""
    base = compute_flops(spec)
    widths0 = extract_widths(spec)
    depth, w_min = len(widths0), min(widths0)
    best_n, best_err = None, None
    for n in range(w_min, w_min + cap + 1):
        flops = compute_flops(
            replace_widths(spec, template_widths(template_id, w_min, n, depth))
        )
        err = abs(flops - base)
        if best_err is None or err < best_err:
            best_n, best_err = n, err
        if flops >= base:
            break
    assert best_n is not None
    return best_n
