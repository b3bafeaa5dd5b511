"""Command-line front end: curve files in, JSON or CSV reports out.

All output is deterministic: keys are sorted, rationals are serialized as
"num/den" strings, and repeated invocations produce byte-identical bytes.
Exit codes: 0 success, 1 validation failure, 2 usage or parse error,
3 resource cap exceeded.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from fractions import Fraction

import click

from .curve import FractalCurve, classify, corner_moments, validate
from .dilation import (
    DEFAULT_MAX_NODES,
    DilationEstimate,
    dilation,
    dilation_via_junctions,
    junction_classes,
)
from .errors import InvalidCurveError, ResourceCapError
from .evaluate import blob_metrics, evaluate, evaluate_exact, scan_order
from .oracle import DEFAULT_MAX_POINTS, brute_force_lower_bound
from .search import EnumerationSpec, enumerate_curves, find_min_dilation, five_necessary_conditions

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_CAPPED = 3


def _rat(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"expected a rational like 3/4, got {text!r}")


def _load_curve(path: str) -> FractalCurve:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise click.UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    try:
        return FractalCurve.from_dict(data)
    except ValueError as exc:
        raise click.UsageError(f"{path}: {exc}")


def _emit_json(doc) -> None:
    click.echo(json.dumps(doc, sort_keys=True, separators=(", ", ": ")))


def _emit_csv(rows: list[dict]) -> None:
    if not rows:
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    click.echo(buf.getvalue(), nl=False)


def _estimate_doc(est: DilationEstimate) -> dict:
    return {
        "lower": _rat(est.lower),
        "upper": _rat(est.upper),
        "witness": [_rat(est.witness[0]), _rat(est.witness[1])],
        "nodes": est.nodes,
        "capped": est.capped,
        "cap_reason": est.cap_reason,
    }


def _report_doc(report) -> dict:
    return {
        v.lemma: {
            "holds": v.holds,
            "applicable": v.applicable,
            "evidence": v.evidence,
        }
        for v in report.verdicts
    }


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
)
jobs_option = click.option("--jobs", type=int, default=1, show_default=True,
                           help="Worker processes; the output never depends on it.")


@click.group()
def main() -> None:
    """Fractal Peano curves and their square-to-linear ratio."""
    limit = os.environ.get("PEANO_MAX_MEM")
    if limit:
        try:
            import resource

            value = int(limit)
            resource.setrlimit(resource.RLIMIT_AS, (value, value))
        except (ValueError, OSError) as exc:
            raise click.UsageError(f"PEANO_MAX_MEM: {exc}")


@main.command("validate")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@format_option
def validate_cmd(curve_file: str, fmt: str) -> None:
    """Check the regular-Peano invariants of a curve description."""
    curve = _load_curve(curve_file)
    report = validate(curve)
    doc = {
        "valid": report.ok,
        "issues": list(report.issues),
        "junction_contacts": list(report.junction_contacts),
    }
    if fmt == "json":
        _emit_json(doc)
    else:
        rows = [{"field": "valid", "value": report.ok}]
        rows += [{"field": "issue", "value": i} for i in report.issues]
        rows += [{"field": "junction_contact", "value": c} for c in report.junction_contacts]
        _emit_csv(rows)
    if not report.ok:
        sys.exit(EXIT_INVALID)


@main.command("eval")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--t", "time_str", required=True, help="Time as num/den in [0, 1].")
@click.option("--depth", type=int, default=None, help="Return a depth-n enclosure instead of the exact point.")
@format_option
def eval_cmd(curve_file: str, time_str: str, depth: int | None, fmt: str) -> None:
    """Evaluate the curve at a rational time."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    t = _parse_rational(time_str)
    if not 0 <= t <= 1:
        raise click.UsageError(f"time {time_str} outside [0, 1]")
    if depth is None:
        p = evaluate_exact(curve, t)
        doc = {"t": _rat(t), "point": [_rat(p.x), _rat(p.y)]}
        rows = [{"t": _rat(t), "x": _rat(p.x), "y": _rat(p.y)}]
    else:
        enc = evaluate(curve, t, depth)
        doc = {
            "t": _rat(t),
            "depth": enc.depth,
            "cell": list(enc.cell),
            "side": _rat(enc.side),
        }
        rows = [{"t": _rat(t), "depth": enc.depth, "col": enc.cell[0], "row": enc.cell[1], "side": _rat(enc.side)}]
    _emit_json(doc) if fmt == "json" else _emit_csv(rows)


@main.command("dilation")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", "tol_str", required=True, help="Tolerance as num/den.")
@click.option("--via-junctions", is_flag=True, help="Use the junction decomposition path.")
@click.option("--max-nodes", type=int, default=DEFAULT_MAX_NODES, show_default=True)
@jobs_option
@format_option
def dilation_cmd(curve_file, tol_str, via_junctions, max_nodes, jobs, fmt) -> None:
    """Certified bounds on the maximum square-to-linear ratio."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    tol = _parse_rational(tol_str)
    if tol <= 0:
        raise click.UsageError("tolerance must be positive")
    fn = dilation_via_junctions if via_junctions else dilation
    est = fn(curve, tol, max_nodes=max_nodes, jobs=jobs)
    doc = _estimate_doc(est)
    doc["method"] = "junctions" if via_junctions else "pairs"
    doc["max_nodes"] = max_nodes
    if fmt == "json":
        _emit_json(doc)
    else:
        _emit_csv([{k: doc[k] for k in ("lower", "upper", "nodes", "capped", "method")}])
    if est.capped:
        sys.exit(EXIT_CAPPED)


@main.command("junctions")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@format_option
def junctions_cmd(curve_file: str, fmt: str) -> None:
    """List the curve's junction classes."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    classes = junction_classes(curve)
    rows = [
        {
            "iso_a": c.iso_a.code,
            "rev_a": c.rev_a,
            "iso_b": c.iso_b.code,
            "rev_b": c.rev_b,
            "offset": f"{c.offset[0]},{c.offset[1]}",
            "placement": c.placement,
            "multiplicity": c.multiplicity,
        }
        for c in classes
    ]
    if fmt == "json":
        _emit_json({"count": len(classes), "classes": rows})
    else:
        _emit_csv(rows)


@main.command("oracle")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", type=int, required=True)
@click.option("--max-points", type=int, default=DEFAULT_MAX_POINTS, show_default=True)
@jobs_option
@format_option
def oracle_cmd(curve_file: str, depth: int, max_points: int, jobs: int, fmt: str) -> None:
    """Brute-force lower bound from structured sample pairs."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    res = brute_force_lower_bound(curve, depth, max_points=max_points)
    doc = {
        "depth": res.depth,
        "lower_bound": _rat(res.lower_bound),
        "witness": [_rat(res.witness[0]), _rat(res.witness[1])],
        "max_points": max_points,
    }
    if fmt == "json":
        _emit_json(doc)
    else:
        _emit_csv([
            {
                "depth": res.depth,
                "lower_bound": _rat(res.lower_bound),
                "witness_t": _rat(res.witness[0]),
                "witness_u": _rat(res.witness[1]),
            }
        ])


@main.command("enumerate")
@click.option("--k", type=int, required=True)
@click.option("--dedup/--no-dedup", default=True, show_default=True,
              help="One curve per symmetry class.")
@click.option("--side-adjacent", is_flag=True, help="Require side-adjacent consecutive cells.")
@click.option("--max-curves", type=int, default=None, help="Stop after this many curves (exit 3).")
@format_option
def enumerate_cmd(k: int, dedup: bool, side_adjacent: bool, max_curves: int | None, fmt: str) -> None:
    """Stream all valid curves of a base divisor, one per line."""
    spec = EnumerationSpec(k, require_side_adjacency=side_adjacent, dedup_by_symmetry=dedup)
    count = 0
    truncated = False
    writer = None
    for curve in enumerate_curves(spec):
        if fmt == "json":
            click.echo(json.dumps(curve.to_dict(), sort_keys=True, separators=(", ", ": ")))
        else:
            if writer is None:
                writer = csv.writer(sys.stdout, lineterminator="\n")
                writer.writerow(["index", "k", "fractions"])
            writer.writerow([count, curve.k, _fractions_csv(curve)])
        count += 1
        if max_curves is not None and count >= max_curves:
            truncated = True
            break
    if truncated:
        sys.exit(EXIT_CAPPED)


def _fractions_csv(curve: FractalCurve) -> str:
    return ";".join(
        f"{f.cell.col},{f.cell.row},{f.iso.code},{int(f.rev)}" for f in curve.fractions
    )


@main.command("search")
@click.option("--k", type=int, required=True)
@click.option("--tol", "tol_str", required=True, help="Tolerance as num/den.")
@click.option("--side-adjacent", is_flag=True)
@click.option("--max-nodes", type=int, default=DEFAULT_MAX_NODES, show_default=True)
@click.option("--max-curves", type=int, default=None, help="Truncate the enumeration (exit 3).")
@click.option("--prune/--no-prune", default=True, show_default=True)
@click.option("--records", is_flag=True, help="Emit one JSON line per screened curve.")
@click.option("--progress", is_flag=True, help="Progress lines on stderr.")
@jobs_option
@format_option
def search_cmd(k, tol_str, side_adjacent, max_nodes, max_curves, prune, records, progress, jobs, fmt) -> None:
    """Exhaustive minimum-dilation search over curves of one base divisor."""
    tol = _parse_rational(tol_str)
    if tol <= 0:
        raise click.UsageError("tolerance must be positive")
    spec = EnumerationSpec(k, require_side_adjacency=side_adjacent)
    progress_fn = None
    if progress:
        progress_fn = lambda info: click.echo(
            f"enumerated={info['enumerated']} pruned={info['pruned']}"
            f" evaluated={info['evaluated']} incumbent={float(info['incumbent_upper']):.6f}",
            err=True,
        )
    result = find_min_dilation(
        spec,
        tol,
        max_nodes=max_nodes,
        jobs=jobs,
        prune=prune,
        max_curves=max_curves,
        collect_records=records,
        with_reports=records,
        progress=progress_fn,
    )
    if records and fmt == "json":
        for rec in result.records:
            doc = {
                "curve": rec.curve.to_dict(),
                "disposition": rec.disposition,
                "quick_lower": _rat(rec.quick_lower),
                "floor": _rat(rec.floor),
                "estimate": _estimate_doc(rec.estimate) if rec.estimate else None,
                "lemmas": _report_doc(rec.report) if rec.report else None,
            }
            click.echo(json.dumps(doc, sort_keys=True, separators=(", ", ": ")))
    stats = result.statistics
    summary = {
        "minimum": _estimate_doc(result.estimate),
        "curve": result.curve.to_dict(),
        "statistics": {
            "enumerated": stats.enumerated,
            "pruned_by_lower_bound": stats.pruned_by_lower_bound,
            "pruned_by_certificate": stats.pruned_by_certificate,
            "early_stopped": stats.early_stopped,
            "fully_evaluated": stats.fully_evaluated,
            "certified_over_five": stats.certified_over_five,
            "min_lower": _rat(stats.min_lower),
            "truncated": stats.truncated,
        },
        "max_nodes": max_nodes,
    }
    if fmt == "json":
        _emit_json(summary)
    else:
        _emit_csv([
            {
                "lower": _rat(result.estimate.lower),
                "upper": _rat(result.estimate.upper),
                "enumerated": stats.enumerated,
                "fully_evaluated": stats.fully_evaluated,
                "min_lower": _rat(stats.min_lower),
            }
        ])
    if stats.truncated or result.estimate.capped:
        sys.exit(EXIT_CAPPED)


@main.command("lemmas")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@format_option
def lemmas_cmd(curve_file: str, fmt: str) -> None:
    """Evaluate the necessary conditions for ratio below five."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    report = five_necessary_conditions(curve)
    if fmt == "json":
        _emit_json(
            {
                "lemmas": _report_doc(report),
                "certifies_ratio_at_least_five": report.certifies_ratio_at_least_five,
            }
        )
    else:
        _emit_csv([
            {
                "lemma": v.lemma,
                "holds": v.holds,
                "applicable": v.applicable,
                "evidence": v.evidence or "",
            }
            for v in report.verdicts
        ])


@main.command("scan")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", type=int, required=True)
@click.option("--max-points", "max_cells", type=int, default=1 << 20, show_default=True)
@format_option
def scan_cmd(curve_file: str, depth: int, max_cells: int, fmt: str) -> None:
    """Emit the depth-n traversal order of grid cells."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    order = scan_order(curve, depth, max_cells=max_cells)
    if fmt == "json":
        _emit_json({"k": order.k, "depth": order.depth, "cells": [list(c) for c in order.cells]})
    else:
        _emit_csv([
            {"index": i, "col": c[0], "row": c[1]} for i, c in enumerate(order.cells)
        ])


@main.command("blob")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", type=int, required=True)
@click.option("--from", "start", type=int, required=True)
@click.option("--to", "end", type=int, required=True)
@format_option
def blob_cmd(curve_file: str, depth: int, start: int, end: int, fmt: str) -> None:
    """Area, squared diameter and elongation of one scan interval."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    order = scan_order(curve, depth)
    if not 0 <= start <= end < len(order.cells):
        raise click.UsageError(
            f"interval [{start}, {end}] outside [0, {len(order.cells)})"
        )
    blob = blob_metrics(order, start, end)
    doc = {
        "area": blob.area,
        "diameter_sq": blob.diameter_sq,
        "elongation": _rat(blob.elongation),
    }
    _emit_json(doc) if fmt == "json" else _emit_csv([doc])


@main.command("moments")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@format_option
def moments_cmd(curve_file: str, fmt: str) -> None:
    """Corner moments: the vertex passage times in traversal order."""
    curve = _load_curve(curve_file)
    _require_valid_cli(curve)
    moments = corner_moments(curve)
    rows = [
        {"vertex": f"{m.vertex[0]},{m.vertex[1]}", "time": _rat(m.time)} for m in moments
    ]
    if fmt == "json":
        _emit_json({"kind": classify(curve).value, "moments": rows})
    else:
        _emit_csv(rows)


def _require_valid_cli(curve: FractalCurve) -> None:
    report = validate(curve)
    if not report.ok:
        click.echo(
            json.dumps({"valid": False, "issues": list(report.issues)}, sort_keys=True),
            err=True,
        )
        sys.exit(EXIT_INVALID)


def run() -> None:
    """Console entry point with exception-to-exit-code mapping."""
    try:
        main.main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    except InvalidCurveError as exc:
        click.echo(f"invalid curve: {exc}", err=True)
        sys.exit(EXIT_INVALID)
    except ResourceCapError as exc:
        click.echo(f"resource cap: {exc}", err=True)
        sys.exit(EXIT_CAPPED)
    except MemoryError:
        click.echo("resource cap: memory limit exceeded", err=True)
        sys.exit(EXIT_CAPPED)


if __name__ == "__main__":
    run()
