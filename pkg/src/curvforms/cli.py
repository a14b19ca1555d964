"""Batch front end: validate sample files, run every analysis, and report.

Commands
--------
validate         container invariants of every sample in a file
einstein-check   star-commuting test against g, h, or the derived Lorentz star
normal-form      normal-form values, rescaled values when the frame is g-orthogonal
petrov           complex normal-form case histogram
integrate        weighted Euler/signature totals and the identity residual
sums             connected-sum bookkeeping and the obstruction verdict

Reports are deterministic: the same input file and flags produce
byte-identical output, whatever ``--threads`` is (point analyses run
concurrently, the reduction is a single pass in index order).  Exit codes:
0 analysis complete, 1 analysis-level failure, 2 usage or format error.
Non-finite report values serialize as ``null`` in JSON and ``-`` in text.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .complex_forms import classify_complex
from .exceptions import (
    FrameReconstructionError,
    GeometryError,
    NotCommutingError,
    SampleFormatError,
    TensorValidationError,
)
from .normal_forms import is_star_h_einstein, normal_form_4, orthogonal_normal_form_4
from .topology import connected_sum, integrate_samples, weyl_split_check
from .zoo import read_samples, validate_sample

__all__ = ["build_parser", "main"]


# ---- shared plumbing ----


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _map_indexed(fn, samples, threads):
    # index order in, index order out: reports never depend on thread count
    if threads <= 1:
        return [fn(i, s) for i, s in enumerate(samples)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(len(samples)), samples))


def _base_report(args, **extra) -> dict:
    report = {
        "command": args.command,
        "version": __version__,
        "tolerances": {"tol": args.tol},
    }
    report.update(extra)
    return report


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values).ravel()]


# ---- commands ----


def _cmd_validate(args):
    samples = read_samples(args.file)

    def check(index, sample):
        try:
            validate_sample(sample, tol=args.tol)
        except TensorValidationError as err:
            return {
                "index": index,
                "ok": False,
                "error": str(err),
                "identity": err.identity,
                "indices": list(err.indices),
                "residual": err.residual,
            }
        except (GeometryError, ValueError) as err:
            return {"index": index, "ok": False, "error": str(err)}
        return {"index": index, "ok": True}

    points = _map_indexed(check, samples, args.resolved_threads)
    failures = sum(1 for p in points if not p["ok"])
    report = _base_report(
        args,
        file=str(args.file),
        points=points,
        aggregate={"points": len(points), "failures": failures},
    )
    return (0 if failures == 0 else 1), report, ["index", "ok", "error"]


def _cmd_einstein_check(args):
    samples = read_samples(args.file)
    metric = args.metric

    def check(index, sample):
        try:
            g = np.asarray(sample.g, dtype=float)
            if metric == "lorentz":
                if sample.t is None:
                    raise GeometryError("sample has no T vector")
                rep = weyl_split_check(
                    sample.rm, g, np.asarray(sample.t, dtype=float), tol=args.tol
                )
                return {
                    "index": index,
                    "einstein": bool(rep.commutes),
                    "residual": rep.commutator_residual,
                    "scal": rep.scal,
                    "f": rep.f_fitted,
                    "trace_residual": rep.lorentz_trace_residual,
                }
            if metric == "h":
                if sample.h is None:
                    raise GeometryError("sample has no h metric")
                hm = np.asarray(sample.h, dtype=float)
            else:
                hm = g
            rep = is_star_h_einstein(sample.rm, hm, tol=args.tol)
            return {
                "index": index,
                "einstein": bool(rep.is_einstein),
                "residual": rep.commutator_residual / max(rep.operator_norm, 1e-300),
                "f": rep.f_fitted,
                "trace_residual": rep.trace_residual,
            }
        except (GeometryError, ValueError) as err:
            return {"index": index, "error": str(err)}

    points = _map_indexed(check, samples, args.resolved_threads)
    histogram = {"true": 0, "false": 0, "error": 0}
    for p in points:
        histogram["error" if "error" in p else str(p["einstein"]).lower()] += 1
    report = _base_report(
        args,
        file=str(args.file),
        flags={"metric": metric},
        points=points,
        aggregate={"points": len(points), "histogram": histogram},
    )
    code = 0 if histogram["error"] == 0 else 1
    columns = ["index", "einstein", "residual", "f", "trace_residual", "scal", "error"]
    return code, report, columns


def _cmd_normal_form(args):
    samples = read_samples(args.file)

    def run(index, sample):
        g = np.asarray(sample.g, dtype=float)
        hm = g if sample.h is None else np.asarray(sample.h, dtype=float)
        try:
            try:
                nf = orthogonal_normal_form_4(sample.rm, hm, g, tol=args.tol)
            except FrameReconstructionError:
                nf = normal_form_4(sample.rm, hm, tol=args.tol)
        except NotCommutingError as err:
            return {"index": index, "available": False, "note": f"no normal form: {err}"}
        except (GeometryError, ValueError) as err:
            return {"index": index, "available": False, "note": str(err)}
        entry = {
            "index": index,
            "available": True,
            "lambdas": _floats(nf.lambdas),
            "mus": _floats(nf.mus),
        }
        if nf.scaled is not None:
            entry["lambdas_scaled"] = _floats(nf.scaled.lambdas_scaled)
            entry["kappas_scaled"] = _floats(nf.scaled.kappas_scaled)
            entry["mus_scaled"] = _floats(nf.scaled.mus_scaled)
        return entry

    points = _map_indexed(run, samples, args.resolved_threads)
    available = sum(1 for p in points if p["available"])
    report = _base_report(
        args,
        file=str(args.file),
        points=points,
        aggregate={"points": len(points), "available": available},
    )
    columns = [
        "index", "available", "lambdas", "mus",
        "lambdas_scaled", "kappas_scaled", "mus_scaled", "note",
    ]
    return 0, report, columns


def _cmd_petrov(args):
    samples = read_samples(args.file)

    def run(index, sample):
        try:
            if sample.t is None:
                raise GeometryError("sample has no T vector")
            form = classify_complex(
                sample.rm,
                np.asarray(sample.g, dtype=float),
                np.asarray(sample.t, dtype=float),
                tol=args.tol,
            )
            return {"index": index, "case": form.case_id}
        except (GeometryError, ValueError) as err:
            return {"index": index, "error": str(err)}

    points = _map_indexed(run, samples, args.resolved_threads)
    histogram = {}
    for p in points:
        key = "error" if "error" in p else f"case {p['case']}"
        histogram[key] = histogram.get(key, 0) + 1
    report = _base_report(
        args,
        file=str(args.file),
        points=points,
        aggregate={"points": len(points), "histogram": histogram},
    )
    code = 0 if histogram.get("error", 0) == 0 else 1
    return code, report, ["index", "case", "error"]


def _cmd_integrate(args):
    samples = read_samples(args.file)
    result = integrate_samples(samples, tol=args.tol)
    aggregate = {
        "points": result.points,
        "skipped_points": result.skipped_points,
        "general_frame_points": result.general_frame_points,
        "total_weight": result.total_weight,
    }
    if args.quantity in ("chi", "ht"):
        aggregate["chi"] = result.chi_estimate
    if args.quantity in ("tau", "ht"):
        aggregate["tau"] = result.tau_estimate
    if args.quantity == "ht":
        aggregate["correction"] = result.correction_estimate
        aggregate["ht_identity_residual"] = result.ht_identity_residual
    report = _base_report(
        args,
        file=str(args.file),
        flags={"quantity": args.quantity},
        aggregate=aggregate,
    )
    return 0, report, []


def _cmd_sums(args):
    try:
        result = connected_sum(args.expression)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2, None, None
    aggregate = {
        "chi": result.chi,
        "tau": result.tau,
        "blocks": [
            {"name": b.name, "chi": b.chi, "tau": b.tau} for b in result.blocks
        ],
        "verdict": result.verdict,
    }
    report = _base_report(args, expression=args.expression, aggregate=aggregate)
    return 0, report, []


# ---- rendering ----


def _jsonable(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render_json(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _text_value(value) -> str:
    value = _jsonable(value)
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, list):
        sep = "; " if any(isinstance(v, dict) for v in value) else ", "
        return "[" + sep.join(_text_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return ", ".join(f"{k}: {_text_value(value[k])}" for k in sorted(value))
    return str(value)


def render_text(report: dict, columns) -> str:
    lines = [f"curvforms {report['command']} (version {report['version']})"]
    for key in ("file", "expression"):
        if key in report:
            lines.append(f"{key}: {report[key]}")
    settings = dict(report.get("tolerances", {}))
    settings.update(report.get("flags", {}))
    for key in sorted(settings):
        lines.append(f"{key} = {_text_value(settings[key])}")

    points = report.get("points")
    if points:
        present = [c for c in columns if any(c in p for p in points)]
        rows = [[_text_value(p.get(c)) for c in present] for p in points]
        widths = [
            max(len(header), *(len(row[i]) for row in rows))
            for i, header in enumerate(present)
        ]
        lines.append("")
        lines.append("  ".join(h.ljust(w) for h, w in zip(present, widths)).rstrip())
        for row in rows:
            cells = [row[0].rjust(widths[0])]  # index column right-aligned
            cells += [cell.ljust(w) for cell, w in zip(row[1:], widths[1:])]
            lines.append("  ".join(cells).rstrip())

    lines.append("")
    lines.append("aggregate:")
    for key in sorted(report.get("aggregate", {})):
        lines.append(f"  {key} = {_text_value(report['aggregate'][key])}")
    return "\n".join(lines) + "\n"


# ---- entry point ----


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvforms",
        description="Batch analyses of curvature point-sample files.",
    )
    parser.add_argument(
        "--version", action="version", version=f"curvforms {__version__}"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="analysis tolerance")
    common.add_argument(
        "--format", choices=("json", "text"), default="text", help="report format"
    )
    common.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help="worker threads (default: logical cores)",
    )
    common.add_argument(
        "-o", "--output", metavar="FILE", default=None, help="write the report to FILE"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check sample invariants")
    p.add_argument("file", help="sample file (.jsonl or .jsonl.gz)")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser(
        "einstein-check", parents=[common], help="star-commuting Einstein test"
    )
    p.add_argument("file")
    p.add_argument(
        "--metric",
        choices=("g", "h", "lorentz"),
        default="g",
        help="metric whose star must commute with the operator",
    )
    p.set_defaults(func=_cmd_einstein_check)

    p = sub.add_parser("normal-form", parents=[common], help="normal-form values")
    p.add_argument("file")
    p.set_defaults(func=_cmd_normal_form)

    p = sub.add_parser("petrov", parents=[common], help="complex case histogram")
    p.add_argument("file")
    p.set_defaults(func=_cmd_petrov)

    p = sub.add_parser(
        "integrate", parents=[common], help="Euler/signature quadrature totals"
    )
    p.add_argument("file")
    p.add_argument(
        "--quantity",
        choices=("chi", "tau", "ht"),
        default="ht",
        help="totals to report (ht adds the identity residual)",
    )
    p.set_defaults(func=_cmd_integrate)

    p = sub.add_parser(
        "sums", parents=[common], help="connected-sum invariants and verdict"
    )
    p.add_argument("expression", help="'#'-separated building blocks, e.g. 'K3 # CP2'")
    p.set_defaults(func=_cmd_sums)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.resolved_threads = args.threads or os.cpu_count() or 1
    try:
        code, report, columns = args.func(args)
    except SampleFormatError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (GeometryError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if report is None:
        return code
    text = render_json(report) if args.format == "json" else render_text(report, columns)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
