"""Architecture data model: unit types, validation, width extraction, JSON I/O.

A network is an ordered list of units (conv / pool / bottleneck / global-pool)
plus a single fully-connected classifier whose input size is always derived
from the final feature width, never stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class SchemaError(ValueError):
    """A JSON document does not match the architecture schema."""


class ValidationError(ValueError):
    """A structurally well-formed spec violates model invariants."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class ConvUnit:
    width: int
    kernel: int = 3
    stride: int = 1
    has_bn: bool = True


@dataclass(frozen=True)
class PoolUnit:
    factor: int = 2


@dataclass(frozen=True)
class BottleneckUnit:
    base_width: int
    stride: int = 1
    has_projection: bool = False
    expansion: int = 4


@dataclass(frozen=True)
class GlobalPoolUnit:
    pass


Unit = ConvUnit | PoolUnit | BottleneckUnit | GlobalPoolUnit

# Ordered output-channel counts of the width-bearing units, one entry per
# ConvUnit.width / BottleneckUnit.base_width.
WidthVector = tuple[int, ...]


@dataclass(frozen=True)
class ArchitectureSpec:
    name: str
    input: tuple[int, int, int]  # (height, width, channels)
    units: tuple[Unit, ...]
    num_classes: int


def is_width_bearing(unit: Unit) -> bool:
    return isinstance(unit, (ConvUnit, BottleneckUnit))


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def unit_output_shape(unit: Unit, c: int, h: int, w: int) -> tuple[int, int, int]:
    """Output (channels, height, width) of a unit given its input shape.

    Strided units use same-padding semantics (ceil division); pooling floors,
    so it is the only unit kind that can collapse a spatial dimension to 0.
    """
    if isinstance(unit, ConvUnit):
        return unit.width, _ceil_div(h, unit.stride), _ceil_div(w, unit.stride)
    if isinstance(unit, PoolUnit):
        return c, h // unit.factor, w // unit.factor
    if isinstance(unit, BottleneckUnit):
        out_c = unit.expansion * unit.base_width
        return out_c, _ceil_div(h, unit.stride), _ceil_div(w, unit.stride)
    return c, 1, 1  # GlobalPoolUnit


def unit_shapes(
    spec: ArchitectureSpec,
) -> list[tuple[Unit, tuple[int, int, int], tuple[int, int, int]]]:
    """Propagate the input geometry through every unit.

    Returns one (unit, in_shape, out_shape) triple per unit, shapes as
    (channels, height, width).
    """
    h, w, c = spec.input
    shapes = []
    for unit in spec.units:
        out = unit_output_shape(unit, c, h, w)
        shapes.append((unit, (c, h, w), out))
        c, h, w = out
    return shapes


def final_feature_width(spec: ArchitectureSpec) -> int:
    """Channel count feeding the classifier (the final feature width)."""
    c = spec.input[2]
    for unit in spec.units:
        if isinstance(unit, ConvUnit):
            c = unit.width
        elif isinstance(unit, BottleneckUnit):
            c = unit.expansion * unit.base_width
    return c


def projection_required(unit: BottleneckUnit, in_channels: int) -> bool:
    """A residual shortcut needs a projection conv when the identity path
    cannot carry the input to the block output (stride or channel change)."""
    return unit.stride != 1 or in_channels != unit.expansion * unit.base_width


def validation_errors(spec: ArchitectureSpec) -> list[str]:
    """Every violated invariant, each tagged with the offending unit index."""
    errors: list[str] = []
    h, w, c = spec.input
    if h < 1 or w < 1 or c < 1:
        errors.append("input dimensions must be >= 1")
    if spec.num_classes < 2:
        errors.append("num_classes must be >= 2")
    if not spec.units:
        errors.append("units list is empty")
        return errors
    if not any(is_width_bearing(u) for u in spec.units):
        errors.append("spec has no width-bearing units")

    for i, unit in enumerate(spec.units):
        if isinstance(unit, ConvUnit):
            if unit.width < 1:
                errors.append(f"unit {i}: width must be >= 1")
            if unit.kernel < 1 or unit.kernel % 2 == 0:
                errors.append(f"unit {i}: kernel must be odd and >= 1")
            if unit.stride < 1:
                errors.append(f"unit {i}: stride must be >= 1")
        elif isinstance(unit, PoolUnit):
            if unit.factor < 1:
                errors.append(f"unit {i}: pool factor must be >= 1")
        elif isinstance(unit, BottleneckUnit):
            if unit.base_width < 1:
                errors.append(f"unit {i}: base_width must be >= 1")
            if unit.stride < 1:
                errors.append(f"unit {i}: stride must be >= 1")
            if unit.expansion != 4:
                errors.append(f"unit {i}: expansion must be 4")

    # Geometry and residual wiring need well-formed per-unit fields; a bad
    # field would make the walk meaningless, so only walk when clean so far.
    if errors:
        return errors
    for i, unit in enumerate(spec.units):
        if isinstance(unit, BottleneckUnit):
            required = projection_required(unit, c)
            if required and not unit.has_projection:
                errors.append(
                    f"unit {i}: projection required (channel or stride mismatch)"
                    " but has_projection is false"
                )
            elif unit.has_projection and not required:
                errors.append(
                    f"unit {i}: has_projection set but identity shortcut already fits"
                )
        c, h, w = unit_output_shape(unit, c, h, w)
        if h < 1 or w < 1:
            errors.append(f"unit {i}: spatial size collapses below 1x1")
            break
    return errors


def validate(spec: ArchitectureSpec) -> ArchitectureSpec:
    """Return the spec unchanged if all invariants hold, else raise
    ValidationError carrying every violation."""
    errors = validation_errors(spec)
    if errors:
        raise ValidationError(errors)
    return spec


def extract_widths(spec: ArchitectureSpec) -> WidthVector:
    """Widths of the width-bearing units in order; the classifier is excluded."""
    return tuple(
        u.width if isinstance(u, ConvUnit) else u.base_width
        for u in spec.units
        if is_width_bearing(u)
    )


# --- JSON round-trip -------------------------------------------------------
#
# Schema: {"name", "input": {"h", "w", "c"}, "num_classes", "units": [...]}
# with unit kinds "conv" | "pool" | "bottleneck" | "gap". Unknown fields are
# rejected. has_projection may be omitted, in which case it is derived from
# the channel/stride wiring.

_UNIT_FIELDS = {
    "conv": ({"width"}, {"kernel", "stride", "has_bn"}),
    "pool": (set(), {"factor"}),
    "bottleneck": ({"base_width"}, {"expansion", "stride", "has_projection"}),
    "gap": (set(), set()),
}


def _check_int(value, field: str, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"field '{field}' in {where} must be an integer")
    return value


def _check_bool(value, field: str, where: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"field '{field}' in {where} must be a boolean")
    return value


def to_json_dict(spec: ArchitectureSpec) -> dict:
    units = []
    for unit in spec.units:
        if isinstance(unit, ConvUnit):
            units.append(
                {
                    "kind": "conv",
                    "width": unit.width,
                    "kernel": unit.kernel,
                    "stride": unit.stride,
                    "has_bn": unit.has_bn,
                }
            )
        elif isinstance(unit, PoolUnit):
            units.append({"kind": "pool", "factor": unit.factor})
        elif isinstance(unit, BottleneckUnit):
            units.append(
                {
                    "kind": "bottleneck",
                    "base_width": unit.base_width,
                    "expansion": unit.expansion,
                    "stride": unit.stride,
                    "has_projection": unit.has_projection,
                }
            )
        else:
            units.append({"kind": "gap"})
    h, w, c = spec.input
    return {
        "name": spec.name,
        "input": {"h": h, "w": w, "c": c},
        "num_classes": spec.num_classes,
        "units": units,
    }


def from_json_dict(doc: dict) -> ArchitectureSpec:
    if not isinstance(doc, dict):
        raise SchemaError("document root must be an object")
    unknown = set(doc) - {"name", "input", "num_classes", "units"}
    if unknown:
        raise SchemaError(f"unknown field '{sorted(unknown)[0]}' at top level")
    for field in ("name", "input", "num_classes", "units"):
        if field not in doc:
            raise SchemaError(f"missing field '{field}' at top level")
    if not isinstance(doc["name"], str):
        raise SchemaError("field 'name' must be a string")

    inp = doc["input"]
    if not isinstance(inp, dict):
        raise SchemaError("field 'input' must be an object")
    if set(inp) != {"h", "w", "c"}:
        bad = sorted(set(inp) ^ {"h", "w", "c"})[0]
        raise SchemaError(f"field 'input' must have exactly h, w, c (check '{bad}')")
    h = _check_int(inp["h"], "h", "input")
    w = _check_int(inp["w"], "w", "input")
    c = _check_int(inp["c"], "c", "input")
    num_classes = _check_int(doc["num_classes"], "num_classes", "top level")

    if not isinstance(doc["units"], list):
        raise SchemaError("field 'units' must be an array")
    units: list[Unit] = []
    pending_projection: list[int] = []  # unit indices with has_projection omitted
    for i, item in enumerate(doc["units"]):
        where = f"unit {i}"
        if not isinstance(item, dict):
            raise SchemaError(f"{where} must be an object")
        kind = item.get("kind")
        if kind not in _UNIT_FIELDS:
            raise SchemaError(f"field 'kind' in {where} must be one of {sorted(_UNIT_FIELDS)}")
        required, optional = _UNIT_FIELDS[kind]
        fields = set(item) - {"kind"}
        unknown = fields - required - optional
        if unknown:
            raise SchemaError(f"unknown field '{sorted(unknown)[0]}' in {where}")
        missing = required - fields
        if missing:
            raise SchemaError(f"missing field '{sorted(missing)[0]}' in {where}")

        if kind == "conv":
            units.append(
                ConvUnit(
                    width=_check_int(item["width"], "width", where),
                    kernel=_check_int(item.get("kernel", 3), "kernel", where),
                    stride=_check_int(item.get("stride", 1), "stride", where),
                    has_bn=_check_bool(item.get("has_bn", True), "has_bn", where),
                )
            )
        elif kind == "pool":
            units.append(PoolUnit(factor=_check_int(item.get("factor", 2), "factor", where)))
        elif kind == "bottleneck":
            if "has_projection" in item:
                proj = _check_bool(item["has_projection"], "has_projection", where)
            else:
                proj = False
                pending_projection.append(i)
            units.append(
                BottleneckUnit(
                    base_width=_check_int(item["base_width"], "base_width", where),
                    stride=_check_int(item.get("stride", 1), "stride", where),
                    has_projection=proj,
                    expansion=_check_int(item.get("expansion", 4), "expansion", where),
                )
            )
        else:
            units.append(GlobalPoolUnit())

    if pending_projection:
        cc = c
        for i, unit in enumerate(units):
            if i in pending_projection:
                assert isinstance(unit, BottleneckUnit)
                units[i] = BottleneckUnit(
                    base_width=unit.base_width,
                    stride=unit.stride,
                    has_projection=projection_required(unit, cc),
                    expansion=unit.expansion,
                )
            cc = unit_output_shape(units[i], cc, 1, 1)[0]

    return ArchitectureSpec(
        name=doc["name"], input=(h, w, c), units=tuple(units), num_classes=num_classes
    )


def dumps(spec: ArchitectureSpec) -> str:
    return json.dumps(to_json_dict(spec), indent=2) + "\n"


def loads(text: str) -> ArchitectureSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return from_json_dict(doc)


def save_spec(spec: ArchitectureSpec, path: str | Path) -> None:
    Path(path).write_text(dumps(spec), encoding="utf-8")


def load_spec(path: str | Path) -> ArchitectureSpec:
    return loads(Path(path).read_text(encoding="utf-8"))
