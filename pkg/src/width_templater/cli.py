"""Command-line front end.

Subcommands: cost (resource report for one spec), plan (apply templates under
the FLOPs constraint and emit transformed specs), report (base-vs-planned
comparison table), preset (write a built-in baseline spec to disk).

Exit codes: 0 success, 1 parse/schema error, 2 validation error, 3 tolerance
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cost import compute_cost, report_to_json_dict, total_memory_bytes
from .model import (
    ArchitectureSpec,
    SchemaError,
    ValidationError,
    load_spec,
    save_spec,
    validate,
)
from .planner import (
    DEFAULT_EPS,
    TEMPLATE_IDS,
    PlanOutcome,
    plan_all,
    plan_result_to_json_dict,
    replace_widths,
    solve_width,
    ToleranceError,
)
from .presets import PRESET_NAMES, preset
from .report import build_rows, render_csv, render_text, row_to_json_dict

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_VALIDATION = 2
EXIT_TOLERANCE = 3


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_validated(path: str, missing_code: int = EXIT_SCHEMA) -> ArchitectureSpec:
    try:
        spec = load_spec(path)
    except FileNotFoundError:
        raise _CliError(missing_code, f"cannot read spec file '{path}'")
    except SchemaError as exc:
        raise _CliError(EXIT_SCHEMA, f"{path}: {exc}")
    try:
        return validate(spec)
    except ValidationError as exc:
        details = "\n  ".join(exc.errors)
        raise _CliError(EXIT_VALIDATION, f"{path} failed validation:\n  {details}")


def cmd_cost(args: argparse.Namespace) -> int:
    spec = _load_validated(args.spec)
    cost = compute_cost(spec)
    if args.json:
        print(json.dumps(report_to_json_dict(cost), indent=2))
        return EXIT_OK
    mem = total_memory_bytes(cost, args.batch)
    print(f"name:        {spec.name}")
    print(f"params:      {cost.params}  ({cost.params / 1e6:.2f} M)")
    print(f"flops:       {cost.flops}  ({cost.flops / 1e6:.1f} MFLOPs, MAC)")
    print(f"weights:     {cost.weight_bytes} bytes")
    print(f"activations: {cost.activation_bytes_per_sample} bytes/sample")
    print(f"memory:      {mem} bytes (batch {args.batch})")
    return EXIT_OK


def _outcome_summary(outcome: PlanOutcome) -> str:
    if outcome.result is None:
        return f"{outcome.template_id}: failed ({outcome.error})"
    r = outcome.result
    status = "ok" if r.tolerance_met else "TOLERANCE NOT MET"
    return (
        f"{r.template_id}: n={r.solved_n} flops_err={r.flops_rel_error:.4f} "
        f"params={r.cost.params} (-{r.param_reduction_pct:.1f}%) [{status}]"
    )


def cmd_plan(args: argparse.Namespace) -> int:
    spec = _load_validated(args.spec)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.template == "all":
        outcomes = plan_all(spec, eps=args.eps, batch=args.batch)
    else:
        try:
            result = solve_width(spec, args.template, eps=args.eps, batch=args.batch)
            outcomes = [PlanOutcome(args.template, result, None)]
        except ToleranceError as exc:
            outcomes = [PlanOutcome(args.template, exc.result, str(exc))]
        except ValueError as exc:
            outcomes = [PlanOutcome(args.template, None, str(exc))]

    summaries = []
    for outcome in outcomes:
        if outcome.result is not None:
            planned = replace_widths(spec, outcome.result.widths)
            planned = ArchitectureSpec(
                name=f"{spec.name}.{outcome.template_id}",
                input=planned.input,
                units=planned.units,
                num_classes=planned.num_classes,
            )
            save_spec(planned, out_dir / f"{spec.name}.{outcome.template_id}.json")
            plan_doc = plan_result_to_json_dict(outcome.result)
            plan_path = out_dir / f"{spec.name}.{outcome.template_id}.plan.json"
            plan_path.write_text(json.dumps(plan_doc, indent=2) + "\n", encoding="utf-8")
        summaries.append(outcome)

    if args.json:
        docs = [
            plan_result_to_json_dict(o.result) if o.result is not None
            else {"template": o.template_id, "error": o.error}
            for o in summaries
        ]
        print(json.dumps(docs, indent=2))
    else:
        for outcome in summaries:
            print(_outcome_summary(outcome))

    return EXIT_OK if all(o.ok for o in summaries) else EXIT_TOLERANCE


def cmd_report(args: argparse.Namespace) -> int:
    base = _load_validated(args.base_spec, missing_code=EXIT_VALIDATION)
    planned_dir = Path(args.planned_dir)
    planned = []
    for template_id in TEMPLATE_IDS:
        path = planned_dir / f"{base.name}.{template_id}.json"
        if path.exists():
            planned.append((template_id, _load_validated(str(path))))
    rows = build_rows(base, planned, batch=args.batch)

    if args.json:
        print(json.dumps([row_to_json_dict(r) for r in rows], indent=2))
    else:
        print(render_text(rows), end="")
    csv_path = Path(args.out) if args.out else planned_dir / "report.csv"
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(render_csv(rows), encoding="utf-8")
    return EXIT_OK


def cmd_preset(args: argparse.Namespace) -> int:
    try:
        spec = preset(args.name, num_classes=args.classes)
    except KeyError as exc:
        raise _CliError(EXIT_SCHEMA, str(exc.args[0]))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{spec.name}.json"
    save_spec(spec, path)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="width-templater",
        description="Analytic cost model and FLOPs-matched filter-width replanning "
        "for CNN architectures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cost = sub.add_parser("cost", help="print the resource report for a spec")
    p_cost.add_argument("spec", help="architecture spec JSON file")
    p_cost.add_argument("--json", action="store_true", help="machine-readable output")
    p_cost.add_argument("--batch", type=int, default=1, help="batch size for the memory estimate")
    p_cost.set_defaults(func=cmd_cost)

    p_plan = sub.add_parser("plan", help="apply templates under the FLOPs constraint")
    p_plan.add_argument("spec", help="base architecture spec JSON file")
    p_plan.add_argument("template", choices=[*TEMPLATE_IDS, "all"], help="template id or 'all'")
    p_plan.add_argument("--eps", type=float, default=DEFAULT_EPS, help="relative FLOPs tolerance")
    p_plan.add_argument("--out", default="planned", help="output directory for emitted specs")
    p_plan.add_argument("--json", action="store_true", help="machine-readable output")
    p_plan.add_argument("--batch", type=int, default=1, help="batch size for memory deltas")
    p_plan.set_defaults(func=cmd_plan)

    p_report = sub.add_parser("report", help="compare a base spec against planned specs")
    p_report.add_argument("base_spec", help="base architecture spec JSON file")
    p_report.add_argument("planned_dir", help="directory holding <name>.<template>.json files")
    p_report.add_argument("--out", default=None, help="CSV output path (default: <dir>/report.csv)")
    p_report.add_argument("--json", action="store_true", help="machine-readable output")
    p_report.add_argument("--batch", type=int, default=1, help="batch size for memory estimates")
    p_report.set_defaults(func=cmd_report)

    p_preset = sub.add_parser("preset", help="write a built-in baseline spec to disk")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--classes", type=int, default=10, help="classifier output size")
    p_preset.add_argument("--out", default=".", help="output directory")
    p_preset.set_defaults(func=cmd_preset)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
