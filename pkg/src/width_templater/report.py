"""Resource comparison tables (text and CSV) for base vs planned specs."""

from __future__ import annotations

from dataclasses import dataclass

from .cost import compute_cost, total_memory_bytes
from .model import ArchitectureSpec

CSV_HEADER = "template,params,param_pct_down,mem,mem_pct_down,flops"


@dataclass(frozen=True)
class ReportRow:
    label: str  # "base" or a template id
    params: int
    param_pct_down: float
    mem: int  # weight + batch-scaled activation bytes
    mem_pct_down: float
    flops: int


def build_rows(
    base_spec: ArchitectureSpec,
    planned: list[tuple[str, ArchitectureSpec]],
    batch: int = 1,
) -> list[ReportRow]:
    """One row per architecture, base first then the given (label, spec)
    pairs in order. Reduction percentages are relative to the base row."""
    base_cost = compute_cost(base_spec)
    base_mem = total_memory_bytes(base_cost, batch)
    rows = [
        ReportRow(
            label="base",
            params=base_cost.params,
            param_pct_down=0.0,
            mem=base_mem,
            mem_pct_down=0.0,
            flops=base_cost.flops,
        )
    ]
    for label, spec in planned:
        cost = compute_cost(spec)
        mem = total_memory_bytes(cost, batch)
        rows.append(
            ReportRow(
                label=label,
                params=cost.params,
                param_pct_down=100.0 * (1.0 - cost.params / base_cost.params),
                mem=mem,
                mem_pct_down=100.0 * (1.0 - mem / base_mem),
                flops=cost.flops,
            )
        )
    return rows


def render_csv(rows: list[ReportRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.label},{r.params},{r.param_pct_down:.1f},{r.mem},{r.mem_pct_down:.1f},{r.flops}"
        )
    return "\n".join(lines) + "\n"


def render_text(rows: list[ReportRow]) -> str:
    header = ("template", "params", "param %down", "mem (bytes)", "mem %down", "flops")
    table = [header]
    for r in rows:
        table.append(
            (
                r.label,
                f"{r.params}",
                f"{r.param_pct_down:.1f}",
                f"{r.mem}",
                f"{r.mem_pct_down:.1f}",
                f"{r.flops}",
            )
        )
    widths = [max(len(row[col]) for row in table) for col in range(len(header))]
    lines = []
    for i, row in enumerate(table):
        cells = [c.ljust(w) if j == 0 else c.rjust(w) for j, (c, w) in enumerate(zip(row, widths))]
        lines.append("  ".join(cells).rstrip())
        if i == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def row_to_json_dict(row: ReportRow) -> dict:
    return {
        "template": row.label,
        "params": row.params,
        "param_pct_down": round(row.param_pct_down, 1),
        "mem": row.mem,
        "mem_pct_down": round(row.mem_pct_down, 1),
        "flops": row.flops,
    }
