"""Command-line experiment driver.

Subcommands map onto the library's entry surfaces: order, tile, encode,
detect, entropy, verify, pipeline.  All take --config (a builtin name or a
JSON file), --out (report path or, for pipeline, an artifact directory) and
--seed (overrides the config seed).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CodeOverflowError, ConfigError, MultiorderError
from .pipeline import (
    EXIT_CHECK_FAILED,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_OVERFLOW,
    build_instance,
    build_sample,
    build_spec,
    load_config,
    run_pipeline,
    verify_all,
    _invariance_pairs,
    _order_record,
)
from .tilings import spec_to_record, validate_system
from .tiling_orders import induced_order, interval_invariance_scan, straightness_status
from .arrays import entropy_bound_check
from .asymptotic import detect, tail_pair
from .coder import partition_intervals, product_pipeline, verify_separation


def _emit(record: dict, out: str | None) -> None:
    text = json.dumps(record, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _stage_order(cfg) -> dict:
    spec = build_spec(cfg)
    instance = build_instance(cfg, spec)
    order = induced_order(instance, instance.top_level)
    rec = _order_record(order)
    rec["straightness"] = straightness_status(instance, instance.top_level).kind
    return rec


def _stage_tile(cfg) -> dict:
    spec = build_spec(cfg)
    pairs = _invariance_pairs(cfg, spec.group)
    report = validate_system(spec, pairs)
    return {
        "validation": report.to_record(),
        "base": list(spec.base()),
        "spec": spec_to_record(spec),
    }


def _stage_encode(cfg) -> dict:
    spec = build_spec(cfg)
    instance = build_instance(cfg, spec)
    sample = build_sample(cfg)
    coder = product_pipeline(sample, instance)
    coded = coder.encode(cfg.depth, fill=cfg.fill, step_levels=cfg.step_levels)
    return {"capacity": coder.capacity_rows(cfg.depth), "coded": coded.to_record()}


def _stage_detect(cfg) -> dict:
    spec = build_spec(cfg)
    instance = build_instance(cfg, spec)
    sample = build_sample(cfg)
    coder = product_pipeline(sample, instance)
    order = coder.order
    horizon = min(cfg.horizon, order.radius)
    x = coder.point
    y = tail_pair(x, order, 0, order.at_position(-2))
    tail_verdict = detect(x, y, order, 0, horizon)

    coded = coder.encode(cfg.depth, fill=cfg.fill, step_levels=cfg.step_levels)
    from .pipeline import _perturb_cells
    from .arrays import ArrayPoint

    rows = []
    for cell in _perturb_cells(cfg, coder, max(1, cfg.perturb_pairs)):
        bits = x.bits.copy()
        bits[0, x.index[cell]] ^= 1
        x2 = ArrayPoint(x.group, x.floors, x.window, bits)
        y2 = coder.encode_variant(
            x2, cfg.depth, fill=cfg.fill, step_levels=cfg.step_levels
        )
        rep = verify_separation(x, x2, coded, y2, cfg.depth)
        h = max((r.witness_position for r in rep.rows), default=horizon)
        verdict = detect(
            coded.combined(), y2.combined(), order, min(0, rep.first_position), h
        )
        rows.append(
            {
                "cell": list(cell),
                "separation": rep.to_record(),
                "detect": verdict.to_record(),
            }
        )
    return {"tail_pair": tail_verdict.to_record(), "perturbed": rows}


def _stage_entropy(cfg) -> dict:
    spec = build_spec(cfg)
    instance = build_instance(cfg, spec)
    sample = build_sample(cfg)
    order = induced_order(instance, instance.top_level)
    from .pipeline import step_level_list

    rows = []
    for n, lev in enumerate(step_level_list(cfg), start=1):
        if n > sample.point.floors:
            break
        part = partition_intervals(order, instance, lev, step=n)
        cells = part.cells(next(iter(part.indices())))
        rows.append(entropy_bound_check(sample, n, [(cells, part.p)]).to_record())
    pairs = _invariance_pairs(cfg, spec.group)
    scan = None
    if pairs:
        scan = interval_invariance_scan(spec, pairs[0][0], pairs[0][1]).to_record()
    return {"bounds": rows, "interval_scan": scan}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="multiorder",
        description="Tiling orders, block coding and asymptotic-pair experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, hlp in [
        ("order", "derive and check the induced order window"),
        ("tile", "validate a tiling system spec"),
        ("encode", "run the interval coder"),
        ("detect", "asymptotic demos: tail pairs and perturbed pairs"),
        ("entropy", "block-count bound checks and interval scans"),
        ("verify", "run module invariant suites"),
        ("pipeline", "full product-coding pipeline with artifacts"),
    ]:
        p = sub.add_parser(name, help=hlp)
        if name != "verify":
            p.add_argument("--config", required=True, help="builtin name or JSON path")
        else:
            p.add_argument("--scope", nargs="*", help="module prefixes to run")
        p.add_argument("--out", help="output path (pipeline: artifact directory)")
        p.add_argument("--seed", type=int, help="override the config seed")

    args = parser.parse_args(argv)

    if args.command == "verify":
        record, code = verify_all(set(args.scope) if args.scope else None)
        _emit(record, args.out)
        return code

    try:
        cfg = load_config(args.config, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "pipeline":
        report, code = run_pipeline(cfg, args.out)
        if args.out is None:
            _emit(report, None)
        else:
            print(f"status={report['status']} -> {args.out}/report.json")
        return code

    stages = {
        "order": _stage_order,
        "tile": _stage_tile,
        "encode": _stage_encode,
        "detect": _stage_detect,
        "entropy": _stage_entropy,
    }
    try:
        record = stages[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CodeOverflowError as exc:
        _emit({"status": "code-overflow", "error": str(exc)}, args.out)
        return EXIT_OVERFLOW
    except MultiorderError as exc:
        _emit({"status": "invariant-violation", "error": str(exc)}, args.out)
        return EXIT_CHECK_FAILED
    _emit(record, args.out)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
