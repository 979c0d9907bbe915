"""Command-line front end.

Subcommands: ``rate`` (one-shot evaluation), ``optimize`` (optimum report),
``sweep`` (CSV/JSON curve), ``tables`` (reference-table reproduction) and
``presets`` (bundled scenario list).  Exit codes: 0 success, 1 rejected
input with a diagnostic on stderr, 2 usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import asdict

from .optimize import optimize_fixed_theta, optimize_proportional
from .rate import DegenerateConfigWarning, FixedCount, Fraction, rate_total
from .reports import reproduce_table1, reproduce_table2
from .scenario import (
    ScenarioError,
    preset_scenarios,
    resolve_scenario,
    run_sweep,
    sweep_to_csv,
)

__all__ = ["main"]


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_table(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    return "" if value is None else str(value)


def _absorbing_override(args, scenario):
    if getattr(args, "theta", None) is not None:
        if args.theta < 0:
            raise ScenarioError(f"--theta must be >= 0, got {args.theta}")
        return FixedCount(args.theta)
    if getattr(args, "absorbing_fraction", None) is not None:
        return Fraction(args.absorbing_fraction)
    return scenario.absorbing


def cmd_rate(args) -> int:
    scenario = resolve_scenario(args.scenario)
    red = scenario.reduced_params()
    absorbing = _absorbing_override(args, scenario)
    n = float(args.n)
    theta = min(absorbing.theta_at(n), n)
    zeta = n - theta
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateConfigWarning)
        rate = rate_total(red, n, absorbing)
    payload = {
        "scenario": scenario.name,
        "n": n,
        "theta": float(theta),
        "zeta": float(zeta),
        "rate_bps": rate,
        "degenerate": zeta <= 0.0,
        "alpha": red.alpha,
        "psi": red.psi,
        "xi": red.xi,
    }
    if args.format == "json":
        _emit(_json_dump(payload), args.out)
    else:
        header = list(payload)
        _emit(_csv_table(header, [[_fmt(payload[key]) for key in header]]), args.out)
    return 0


def cmd_optimize(args) -> int:
    scenario = resolve_scenario(args.scenario)
    red = scenario.reduced_params()
    if isinstance(scenario.absorbing, Fraction):
        report = optimize_proportional(red, 1.0 - scenario.absorbing.q)
    else:
        report = optimize_fixed_theta(red, float(scenario.absorbing.count))
    payload = {"scenario": scenario.name, **asdict(report)}
    if args.format == "json":
        _emit(_json_dump(payload), args.out)
    else:
        header = list(payload)
        _emit(_csv_table(header, [[_fmt(payload[key]) for key in header]]), args.out)
    return 0


def cmd_sweep(args) -> int:
    scenario = resolve_scenario(args.scenario)
    rows = run_sweep(scenario)
    if args.format == "json":
        payload = [
            {
                "n": row.n,
                "theta": row.theta,
                "zeta": row.zeta,
                "rate_bps": row.rate_bps,
                "pow2": row.is_power_of_two,
                "selected": row.is_selected,
            }
            for row in rows
        ]
        _emit(_json_dump(payload), args.out)
    else:
        _emit(sweep_to_csv(rows), args.out)
    return 0


def _selection_report_rows(report):
    header = [
        "row",
        "active_fraction",
        "noise_psd",
        "n_star",
        "pow2_lower",
        "rate_lower_bps",
        "pow2_upper",
        "rate_upper_bps",
        "selected_n",
        "selected_rate_bps",
        "published_selected_n",
        "pattern_ok",
    ]
    rows = [
        [
            row.label,
            _fmt(row.active_fraction),
            _fmt(row.noise_psd),
            _fmt(row.n_star),
            row.pow2_lower,
            _fmt(row.rate_lower_bps),
            row.pow2_upper,
            _fmt(row.rate_upper_bps),
            row.selected_n,
            _fmt(row.selected_rate_bps),
            row.published_selected_n,
            _fmt(row.pattern_ok),
        ]
        for row in report.rows
    ]
    return header, rows


def _normalized_report_rows(report):
    header = [
        "scenario",
        "meas_n",
        "meas_f",
        "calc_n",
        "calc_f",
        "published_meas_n",
        "published_meas_f",
        "published_calc_n",
        "published_calc_f",
        "meas_n_ok",
        "meas_f_ok",
        "calc_n_status",
        "calc_f_ok",
    ]
    rows = [
        [
            row.scenario,
            _fmt(row.meas_n),
            _fmt(row.meas_f),
            _fmt(row.calc_n),
            _fmt(row.calc_f),
            _fmt(row.published_meas_n),
            _fmt(row.published_meas_f),
            _fmt(row.published_calc_n),
            _fmt(row.published_calc_f),
            _fmt(row.meas_n_ok),
            _fmt(row.meas_f_ok),
            row.calc_n_status,
            _fmt(row.calc_f_ok),
        ]
        for row in report.rows
    ]
    return header, rows


def cmd_tables(args) -> int:
    chunks_csv = []
    payload = {}
    if args.which in ("both", "normalized"):
        normalized = reproduce_table2()
        payload["normalized"] = {
            "rows": [asdict(row) for row in normalized.rows],
            "scale_invariance_ok": normalized.scale_invariance_ok,
            "all_ok": normalized.all_ok(),
        }
        header, rows = _normalized_report_rows(normalized)
        chunks_csv.append(_csv_table(header, rows))
    if args.which in ("both", "selection"):
        selection = reproduce_table1()
        payload["selection"] = {
            "rows": [asdict(row) for row in selection.rows],
            "ratio_3n4": selection.ratio_3n4,
            "ratio_n2": selection.ratio_n2,
            "ratios_ok": selection.ratios_ok,
            "all_ok": selection.all_ok(),
            "note": selection.note,
        }
        header, rows = _selection_report_rows(selection)
        chunks_csv.append(_csv_table(header, rows))
    if args.format == "json":
        _emit(_json_dump(payload), args.out)
    else:
        _emit("\n".join(chunks_csv), args.out)
    return 0


def cmd_presets(args) -> int:
    presets = preset_scenarios()
    if args.format == "json":
        payload = [
            {"name": name, "description": presets[name].description}
            for name in sorted(presets)
        ]
        _emit(_json_dump(payload), args.out)
    else:
        rows = [[name, presets[name].description] for name in sorted(presets)]
        _emit(_csv_table(["name", "description"], rows), args.out)
    return 0


def _add_common(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument(
        "--format", choices=("csv", "json"), default=default_format, help="output format"
    )
    parser.add_argument("--out", metavar="PATH", default=None, help="write output to a file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omnidris",
        description="Achievable-rate evaluation and element-count optimization "
        "for panel-assisted indoor optical wireless links.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", help="evaluate the aggregate rate at one element count")
    p_rate.add_argument("--scenario", required=True, help="preset name or scenario file path")
    p_rate.add_argument("--n", type=float, required=True, help="element count (may be fractional)")
    p_rate.add_argument("--theta", type=int, default=None, help="override: fixed absorbing count")
    p_rate.add_argument(
        "--absorbing-fraction", type=float, default=None, help="override: absorbing fraction"
    )
    _add_common(p_rate, "json")
    p_rate.set_defaults(func=cmd_rate)

    p_opt = sub.add_parser("optimize", help="find the rate-maximizing element count")
    p_opt.add_argument("--scenario", required=True, help="preset name or scenario file path")
    _add_common(p_opt, "json")
    p_opt.set_defaults(func=cmd_optimize)

    p_sweep = sub.add_parser("sweep", help="rate over the scenario's element-count grid")
    p_sweep.add_argument("--scenario", required=True, help="preset name or scenario file path")
    _add_common(p_sweep, "csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_tables = sub.add_parser("tables", help="reproduce the published reference tables")
    p_tables.add_argument(
        "--which", choices=("both", "selection", "normalized"), default="both"
    )
    _add_common(p_tables, "csv")
    p_tables.set_defaults(func=cmd_tables)

    p_presets = sub.add_parser("presets", help="list bundled scenario presets")
    _add_common(p_presets, "csv")
    p_presets.set_defaults(func=cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
