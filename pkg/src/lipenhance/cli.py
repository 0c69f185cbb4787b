"""Command-line interface: ``stats``, ``enhance``, ``baseline`` and ``compare``.

Exit codes: 0 success, 2 I/O or parse failure, 3 homothety did not converge
(the output image is still written, from the last iterate).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import baselines
from .enhancement import EnhanceOptions, enhance
from .gray_algebra import phi, phi_inv
from .image_io import (
    EPS_MAP,
    PGMError,
    PixelImage,
    from_gray_domain,
    gray_to_levels,
    load_pgm,
    save_pgm,
    to_gray_domain,
)
from .range_statistics import (
    CLASSICAL,
    LOGARITHMIC,
    classical_center,
    classical_dynamic_range,
    compute_stats,
    log_center,
    solve_two_point,
)

EXIT_OK, EXIT_IO, EXIT_NOCONV = 0, 2, 3


class CLIError(Exception):
    pass


def dumps(obj, indent=2, _level=0) -> str:
    """JSON text with floats written to 17 significant digits.

    Non-finite floats become ``null``.  Key order is preserved.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _level(v, levels):
    return None if v is None else float(gray_to_levels(v, levels))


def _span(d, levels):
    # a difference of gray values expressed in integer levels
    return d * (levels - 1) / (2.0 * (1.0 - EPS_MAP))


def stats_block(img: PixelImage, framework: str) -> dict:
    f = to_gray_domain(img)
    stats = compute_stats(f, framework)
    v_range = classical_dynamic_range(f)
    if stats.degenerate:
        v_low = v_high = stats.mean
        q_low = q_high = 0.5
    else:
        tp = solve_two_point(stats)
        v_low, v_high, q_low, q_high = tp.v_low, tp.v_high, tp.q_low, tp.q_high
    center = log_center(stats) if framework == LOGARITHMIC else classical_center(stats)
    vm = v_high - v_low
    L = img.levels
    return {
        "framework": framework,
        "count": stats.count,
        "degenerate": stats.degenerate,
        "mean": stats.mean,
        "sigma": stats.spread,
        "skew": stats.skew,
        "q_low": q_low,
        "q_high": q_high,
        "v_low": v_low,
        "v_high": v_high,
        "v_center": center,
        "dynamic_range": v_range,
        "mean_dynamic_range": vm,
        "pixel_units": {
            "mean": _level(stats.mean, L),
            "sigma": _span(stats.spread, L),
            "v_low": _level(v_low, L),
            "v_high": _level(v_high, L),
            "v_center": _level(center, L),
            "dynamic_range": _span(v_range, L),
            "mean_dynamic_range": _span(vm, L),
        },
    }


def conjugacy_check(img: PixelImage) -> dict:
    """Largest gap between the logarithmic path and phi^-1(classical path on phi(pixels))."""
    f = to_gray_domain(img)
    log_st = compute_stats(f, LOGARITHMIC)
    cls_st = compute_stats(phi(f.values()), CLASSICAL)
    gaps = [abs(log_st.mean - phi_inv(cls_st.mean)),
            abs(log_st.spread - phi_inv(cls_st.spread)),
            abs(log_st.skew - cls_st.skew)]
    if not log_st.degenerate:
        a, b = solve_two_point(log_st), solve_two_point(cls_st)
        gaps += [abs(a.v_low - phi_inv(b.v_low)), abs(a.v_high - phi_inv(b.v_high))]
    return {"max_abs_difference": max(gaps), "consistent": max(gaps) <= 1e-10}


def stats_report(img: PixelImage, framework: str, name: str) -> dict:
    doc = {"input": name, "width": img.width, "height": img.height, "levels": img.levels}
    frameworks = (CLASSICAL, LOGARITHMIC) if framework == "both" else (framework,)
    for fw in frameworks:
        doc[fw] = stats_block(img, fw)
    if framework == "both":
        doc["conjugacy_check"] = conjugacy_check(img)
    return doc


def enhance_report(report, levels: int) -> dict:
    return {
        "framework": LOGARITHMIC,
        "w0": report.w0,
        "w0_pixel_units": _level(report.w0, levels),
        "lambda_pos": report.lambda_pos,
        "lambda_neg": report.lambda_neg,
        "mean_dynamic_range_before": report.vm_before,
        "mean_dynamic_range_after": report.vm_after,
        "mean_dynamic_range_before_pixel_units": _span(report.vm_before, levels),
        "mean_dynamic_range_after_pixel_units": _span(report.vm_after, levels),
        "iterations": {"pos": report.iterations_pos, "neg": report.iterations_neg},
        "residuals": {"pos": report.residual_pos, "neg": report.residual_neg},
        "converged": report.converged,
        "degenerate": report.degenerate,
        "notes": list(report.notes),
    }


def run_enhance(img: PixelImage, translate=True, homothety=True):
    f = to_gray_domain(img)
    out, report = enhance(f, EnhanceOptions(translate=translate, homothety=homothety))
    return from_gray_domain(out, img.levels), report


def run_baseline(img: PixelImage, method: str, gamma="auto"):
    if method == "histeq":
        return baselines.histogram_equalization(img)
    if method == "gamma":
        return baselines.gamma_correction(img, gamma)
    raise CLIError(f"unknown baseline {method!r}")


def summary_row(img: PixelImage) -> dict:
    f = to_gray_domain(img)
    block = stats_block(img, LOGARITHMIC)
    classical = stats_block(img, CLASSICAL)
    return {
        "dynamic_range": classical_dynamic_range(f),
        "mean_dynamic_range": block["mean_dynamic_range"],
        "mean_dynamic_range_classical": classical["mean_dynamic_range"],
        "mean": block["mean"],
        "sigma": block["sigma"],
        "mean_pixel_level": float(np.mean(img.pixels)),
        "pixel_units": {
            "dynamic_range": _span(classical_dynamic_range(f), img.levels),
            "mean_dynamic_range": block["pixel_units"]["mean_dynamic_range"],
            "mean": block["pixel_units"]["mean"],
        },
    }


# -- subcommands --------------------------------------------------------------

def _load(path):
    try:
        return load_pgm(path)
    except (OSError, PGMError) as exc:
        raise CLIError(f"cannot read {path}: {exc}") from exc


def _save(path, img, fmt="P5"):
    try:
        save_pgm(path, img, fmt)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}") from exc


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}") from exc


def cmd_stats(args):
    img = _load(args.input)
    sys.stdout.write(dumps(stats_report(img, args.framework, os.path.basename(args.input))) + "\n")
    return EXIT_OK


def cmd_enhance(args):
    img = _load(args.input)
    out, report = run_enhance(img, args.translate == "on", args.homothety == "on")
    _save(args.output, out, args.format)
    doc = {"input": os.path.basename(args.input), "output": os.path.basename(args.output)}
    doc.update(enhance_report(report, img.levels))
    doc["mean_pixel_level_before"] = float(np.mean(img.pixels))
    doc["mean_pixel_level_after"] = float(np.mean(out.pixels))
    if args.report:
        _write_text(args.report, dumps(doc) + "\n")
    return EXIT_OK if report.converged else EXIT_NOCONV


def cmd_baseline(args):
    img = _load(args.input)
    gamma = args.gamma if args.gamma == "auto" else float(args.gamma)
    _save(args.output, run_baseline(img, args.method, gamma), args.format)
    return EXIT_OK


COMPARE_FILES = {
    "original": "original.pgm",
    "histeq": "histeq.pgm",
    "gamma": "gamma.pgm",
    "lip": "lip_enhanced.pgm",
}


def cmd_compare(args):
    img = _load(args.input)
    try:
        os.makedirs(args.output_dir, exist_ok=True)
    except OSError as exc:
        raise CLIError(f"cannot create {args.output_dir}: {exc}") from exc
    gamma = baselines.auto_gamma(img)
    lip, report = run_enhance(img)
    results = {
        "original": img,
        "histeq": baselines.histogram_equalization(img),
        "gamma": baselines.gamma_correction(img, gamma),
        "lip": lip,
    }
    for key, result in results.items():
        _save(os.path.join(args.output_dir, COMPARE_FILES[key]), result)
    doc = {
        "input": os.path.basename(args.input),
        "gamma": gamma,
        "files": dict(COMPARE_FILES),
        "methods": {key: summary_row(result) for key, result in results.items()},
        "enhancement": enhance_report(report, img.levels),
    }
    _write_text(os.path.join(args.output_dir, "report.json"), dumps(doc) + "\n")
    return EXIT_OK if report.converged else EXIT_NOCONV


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lipenhance",
        description="Gray-level enhancement by logarithmic mean dynamic range maximization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="moment statistics and mean dynamic range as JSON")
    p.add_argument("input")
    p.add_argument("--framework", choices=["classical", "log", "both"], default="both")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("enhance", help="optimal translation and per-sign homothety")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--translate", choices=["on", "off"], default="on")
    p.add_argument("--homothety", choices=["on", "off"], default="on")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--format", choices=["P5", "P2"], default="P5")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("baseline", help="histogram equalization or gamma correction")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", choices=["histeq", "gamma"], required=True)
    p.add_argument("--gamma", default="auto", help="positive number or 'auto'")
    p.add_argument("--format", choices=["P5", "P2"], default="P5")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("compare", help="original, histeq, gamma and LIP side by side")
    p.add_argument("input")
    p.add_argument("output_dir")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "framework", None) == "log":
        args.framework = LOGARITHMIC
    if getattr(args, "gamma", "auto") != "auto":
        try:
            if not float(args.gamma) > 0:
                raise ValueError
        except ValueError:
            print(f"lipenhance: invalid gamma {args.gamma!r}", file=sys.stderr)
            return EXIT_IO
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"lipenhance: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
