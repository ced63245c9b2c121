"""Experiment driver: configuration, the product-coding pipeline, verify runner.

A config names a group, a sample generator, a tiling (builtin family or a
spec file), a coding depth and detector horizon.  ``run_pipeline`` builds
the product system, checks capacities, encodes, verifies separation on
perturbed pairs and runs the asymptotic demos; everything is reproducible
from the single config seed through named streams.

Exit codes: 0 ok, 1 invariant/check failure, 2 configuration error,
3 code-table capacity overflow.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    CodeOverflowError,
    ConfigError,
    MultiorderError,
)
from .groups import FiniteSubset, group_by_name, to_fraction
from .orders import OrderWindow
from .tilings import (
    TilingSystemSpec,
    center_normalize,
    instance_from_anchor,
    odometrize,
    spec_from_json,
    spec_to_json,
    validate_system,
    z2_dyadic_spec,
    z_odometer_spec,
)
from .tiling_orders import induced_order, interval_invariance_scan, straightness_status
from .arrays import ArrayPoint, entropy_bound_check, generate_sample
from .asymptotic import AGREEING_TAIL, detect, distality_floor, tail_pair
from .coder import product_pipeline, verify_separation
from .checks import run_checks
from .seeding import derive_seed

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_OVERFLOW = 3


@dataclass
class ExperimentConfig:
    name: str
    group: str
    sample: dict
    tiling: dict
    depth: int
    horizon: int
    seed: int = 0
    fill: str = "zeros"
    invariance: list = field(default_factory=list)
    perturb_pairs: int = 4
    step_levels: list | None = None

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "group": self.group,
            "sample": self.sample,
            "tiling": self.tiling,
            "depth": self.depth,
            "horizon": self.horizon,
            "seed": self.seed,
            "fill": self.fill,
            "invariance": self.invariance,
            "perturb_pairs": self.perturb_pairs,
            "step_levels": self.step_levels,
        }


BUILTIN_CONFIGS: dict[str, dict] = {
    "tm-z-odometer": {
        "group": "Z",
        "seed": 1,
        "sample": {
            "kind": "thue-morse",
            "region": {"kind": "interval", "lo": -1500, "hi": 1500},
            "floors": 1,
        },
        "tiling": {
            "builtin": "z-odometer",
            "base": [16, 64, 256, 1024],
            "anchor_position": 344,
        },
        "depth": 2,
        "horizon": 300,
        "invariance": [{"K": {"ball": 1}, "eps": "1/10"}],
        "perturb_pairs": 4,
    },
    "fullshift-z": {
        "group": "Z",
        "seed": 1,
        "sample": {
            "kind": "full-shift",
            "region": {"kind": "interval", "lo": -2100, "hi": 2100},
            "floors": 2,
            "complete_up_to": 12,
        },
        "tiling": {
            "builtin": "z-odometer",
            "base": [16, 64, 256, 1024],
            "anchor_position": 344,
        },
        "depth": 2,
        "horizon": 300,
        "invariance": [{"K": {"ball": 1}, "eps": "1/10"}],
        "perturb_pairs": 0,
    },
    "xor-z2-dyadic": {
        "group": "Z2",
        "seed": 1,
        "sample": {
            "kind": "z2-xor",
            "region": {"kind": "rect", "lo": -70, "hi": 70},
            "floors": 1,
        },
        "tiling": {"builtin": "z2-dyadic", "levels": 5, "anchor_position": 341},
        "depth": 1,
        "step_levels": [3],
        "horizon": 200,
        "invariance": [{"K": {"ball": 1}, "eps": "1/2"}],
        "perturb_pairs": 2,
    },
    "smoke-zero": {
        "group": "Z",
        "seed": 1,
        "sample": {
            "kind": "constant-zero",
            "region": {"kind": "interval", "lo": -700, "hi": 700},
            "floors": 1,
        },
        "tiling": {
            "builtin": "z-odometer",
            "base": [16, 64, 512],
            "anchor_position": 216,
        },
        "depth": 2,
        "horizon": 100,
        "invariance": [{"K": {"ball": 1}, "eps": "1/10"}],
        "perturb_pairs": 1,
    },
}


def load_config(source, seed_override: int | None = None) -> ExperimentConfig:
    """Builtin name, path to a JSON config, or an already-parsed dict."""
    if isinstance(source, dict):
        raw, name = dict(source), source.get("name", "inline")
    elif source in BUILTIN_CONFIGS:
        raw, name = dict(BUILTIN_CONFIGS[source]), source
    else:
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"no builtin config or file named {source!r}")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        name = raw.get("name", path.stem)
    try:
        cfg = ExperimentConfig(
            name=name,
            group=raw["group"],
            sample=raw["sample"],
            tiling=raw["tiling"],
            depth=int(raw["depth"]),
            horizon=int(raw["horizon"]),
            seed=int(raw.get("seed", 0)),
            fill=raw.get("fill", "zeros"),
            invariance=raw.get("invariance", []),
            perturb_pairs=int(raw.get("perturb_pairs", 4)),
            step_levels=raw.get("step_levels"),
        )
    except KeyError as exc:
        raise ConfigError(f"config is missing required key {exc}") from exc
    if seed_override is not None:
        cfg.seed = seed_override
    if cfg.depth < 1:
        raise ConfigError("depth must be >= 1")
    if cfg.fill not in ("zeros", "ones"):
        raise ConfigError("pipeline fill must be zeros or ones")
    return cfg


def build_spec(cfg: ExperimentConfig) -> TilingSystemSpec:
    t = cfg.tiling
    try:
        if "path" in t:
            spec = spec_from_json(Path(t["path"]).read_text())
        elif t.get("builtin") == "z-odometer":
            spec = z_odometer_spec(
                tuple(t["base"]), t.get("subtile_orders", "natural")
            )
        elif t.get("builtin") == "z2-dyadic":
            spec = z2_dyadic_spec(int(t["levels"]))
        else:
            raise ConfigError(f"unknown tiling source {t!r}")
        if spec.group.name != cfg.group:
            raise ConfigError(
                f"tiling group {spec.group.name} does not match config group {cfg.group}"
            )
        report = validate_system(spec)
        if not report.accepted:
            raise ConfigError("tiling spec failed determinism validation")
        spec = center_normalize(spec)
        spec = odometrize(spec, spec.base(), "deterministic")
        return spec
    except MultiorderError as exc:
        raise ConfigError(f"tiling configuration rejected: {exc}") from exc


def build_instance(cfg: ExperimentConfig, spec: TilingSystemSpec):
    t = cfg.tiling
    level = spec.top_level
    try:
        return instance_from_anchor(
            spec, level, anchor_position=int(t["anchor_position"])
        )
    except (KeyError, IndexError, MultiorderError) as exc:
        raise ConfigError(f"bad anchor: {exc}") from exc


def build_sample(cfg: ExperimentConfig):
    s = cfg.sample
    try:
        return generate_sample(
            s["kind"],
            derive_seed(cfg.seed, "sample"),
            s["region"],
            floors=int(s.get("floors", 1)),
            complete_up_to=int(s.get("complete_up_to", 8)),
            group=group_by_name(cfg.group),
        )
    except (KeyError, MultiorderError) as exc:
        raise ConfigError(f"bad sample configuration: {exc}") from exc


def _invariance_pairs(cfg: ExperimentConfig, group):
    pairs = []
    for row in cfg.invariance:
        kdesc = row["K"]
        if isinstance(kdesc, dict) and "ball" in kdesc:
            K = group.ball(int(kdesc["ball"]))
        else:
            K = FiniteSubset.make(group, [tuple(p) for p in kdesc])
        pairs.append((K, to_fraction(row["eps"])))
    return pairs


def _order_record(order: OrderWindow) -> dict:
    rec = order.to_record()
    rec["roundtrip_ok"] = all(
        order.position_of(order.at_position(k)) == k
        for k in range(-order.radius, order.radius + 1)
    )
    return rec


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def step_level_list(cfg: ExperimentConfig) -> list[int]:
    return list(cfg.step_levels) if cfg.step_levels else list(range(1, cfg.depth + 1))


def _perturb_cells(cfg, coder, count: int):
    """Deterministic in-window flip cells whose deepest range pair is complete."""
    order = coder.order
    rng = np.random.default_rng(derive_seed(cfg.seed, "perturb"))
    from .coder import partition_intervals

    deep = partition_intervals(
        order, coder.instance, step_level_list(cfg)[-1], step=cfg.depth
    )
    good = [
        i for i in deep.indices() if deep.complete(i - 1) and deep.complete(i + 1)
    ]
    cells = []
    for i in good:
        cells.extend(deep.positions(i))
    if not cells:
        raise ConfigError("window too small to host perturbed pairs")
    picks = rng.choice(len(cells), size=min(count, len(cells)), replace=False)
    return [order.at_position(cells[int(p)]) for p in sorted(picks)]


def run_pipeline(cfg: ExperimentConfig, out_dir=None) -> tuple[dict, int]:
    """Full flow; returns (report record, exit code) and writes artifacts."""
    t0 = time.perf_counter()
    report: dict = {"config": cfg.to_record(), "checks": [], "artifacts": {}}
    artifacts: dict[str, str] = {}

    def add_check(name: str, passed: bool, details) -> bool:
        report["checks"].append(
            {"name": name, "passed": bool(passed), "details": details}
        )
        return bool(passed)

    try:
        spec = build_spec(cfg)
        instance = build_instance(cfg, spec)
        sample = build_sample(cfg)
    except ConfigError as exc:
        report["status"] = "config-error"
        report["error"] = str(exc)
        return report, EXIT_CONFIG

    ok = True
    try:
        status = straightness_status(instance, instance.top_level)
        ok &= add_check(
            "straightness", status.kind == "straight-so-far", status.kind
        )

        order = induced_order(instance, instance.top_level)
        artifacts["order.json"] = json.dumps(_order_record(order), sort_keys=True)
        ok &= add_check("order-roundtrip", json.loads(artifacts["order.json"])["roundtrip_ok"], "")
        artifacts["spec.json"] = spec_to_json(spec)

        pairs = _invariance_pairs(cfg, spec.group)
        if pairs:
            K, eps = pairs[0]
            scan = interval_invariance_scan(spec, K, eps)
            report["interval_scan"] = scan.to_record()
            ok &= add_check("interval-scan-finite", scan.l0 is not None, scan.l0)

        coder = product_pipeline(sample, instance)
        capacity = coder.capacity_rows(cfg.depth, step_levels=cfg.step_levels)
        report["capacity"] = capacity

        bound_rows = []
        for n, lev in enumerate(step_level_list(cfg), start=1):
            from .coder import partition_intervals

            part = partition_intervals(order, instance, lev, step=n)
            cells = part.cells(next(iter(part.indices())))
            if n <= sample.point.floors:
                bound_rows.append(
                    entropy_bound_check(sample, n, [(cells, part.p)]).to_record()
                )
        report["entropy_bounds"] = bound_rows

        coded = coder.encode(cfg.depth, fill=cfg.fill, step_levels=cfg.step_levels)
        artifacts["coded.json"] = json.dumps(coded.to_record(), sort_keys=True)
        ok &= add_check(
            "mask-exactness",
            all(a["exact"] for a in coded.mask_audit),
            coded.mask_audit,
        )

        # Separation demos on single-cell perturbed pairs.
        sep_ok = True
        sep_rows = []
        for cell in _perturb_cells(cfg, coder, cfg.perturb_pairs):
            x = coder.point
            bits = x.bits.copy()
            bits[0, x.index[cell]] ^= 1
            x2 = ArrayPoint(x.group, x.floors, x.window, bits)
            y2 = coder.encode_variant(
                x2, cfg.depth, fill=cfg.fill, step_levels=cfg.step_levels
            )
            rep = verify_separation(x, x2, coded, y2, cfg.depth)
            horizon = max((r.witness_position for r in rep.rows), default=None)
            verdict = None
            if horizon is not None:
                verdict = detect(
                    coded.combined(),
                    y2.combined(),
                    order,
                    min(0, rep.first_position),
                    horizon,
                ).kind
            sep_rows.append(
                {
                    "cell": list(cell),
                    "ok": rep.ok,
                    "witnesses": [r.to_record() for r in rep.rows],
                    "detect": verdict,
                }
            )
            sep_ok &= rep.ok and verdict == "separated-beyond"
        if cfg.perturb_pairs:
            ok &= add_check("separation-witnesses", sep_ok, sep_rows)

        # Asymptotic demo: a tail pair must register as agreeing.
        horizon = min(cfg.horizon, order.radius)
        flip = order.at_position(-2)
        x = coder.point
        y = tail_pair(x, order, 0, flip)
        verdict = detect(x, y, order, 0, horizon)
        ok &= add_check(
            "tail-pair-agreeing",
            verdict.kind == AGREEING_TAIL and verdict.from_k == 0,
            verdict.to_record(),
        )

        # Distality demo: an anchor incongruent mod p_1 gives distal floors.
        base = spec.base()
        other = instance_from_anchor(
            spec,
            instance.top_level,
            anchor_position=int(cfg.tiling["anchor_position"]) + 1,
        )
        ind1 = _level1_indicator(coder.point, instance)
        ind2 = _level1_indicator_other(other, instance.window)
        shifts = [
            t.center
            for t in instance.tiles[1]
            if t.center in ind1.window
            and t.center in ind2.window
            and _margin_ok(ind1, t.center, 1)
        ][:8]
        floor = distality_floor(ind1, ind2, shifts) if shifts else None
        ok &= add_check(
            "distality-floor",
            floor is not None and floor >= to_fraction("1/2"),
            str(floor),
        )
        del base
    except CodeOverflowError as exc:
        report["status"] = "code-overflow"
        report["error"] = (
            f"{exc}; the block universe exceeds the capacity bound "
            "2^(p/2^n), as expected for positive-entropy input"
        )
        report["timing"] = {"seconds": time.perf_counter() - t0}
        _write_artifacts(report, artifacts, out_dir)
        return report, EXIT_OVERFLOW
    except ConfigError as exc:
        report["status"] = "config-error"
        report["error"] = str(exc)
        report["timing"] = {"seconds": time.perf_counter() - t0}
        return report, EXIT_CONFIG
    except MultiorderError as exc:
        report["status"] = "invariant-violation"
        report["error"] = str(exc)
        report["timing"] = {"seconds": time.perf_counter() - t0}
        _write_artifacts(report, artifacts, out_dir)
        return report, EXIT_CHECK_FAILED

    report["status"] = "ok" if ok else "checks-failed"
    report["timing"] = {"seconds": time.perf_counter() - t0}
    _write_artifacts(report, artifacts, out_dir)
    return report, EXIT_OK if ok else EXIT_CHECK_FAILED


def _level1_indicator(point: ArrayPoint, instance) -> ArrayPoint:
    """The first tiling floor of a product point as a standalone point."""
    data_floors = point.floors - sum(
        len(instance.spec.levels[k].shapes) for k in range(1, instance.top_level + 1)
    )
    row = point.bits[data_floors : data_floors + 1]
    return ArrayPoint(point.group, 1, point.window, row.copy())


def _level1_indicator_other(other, window) -> ArrayPoint:
    from .tilings import symbolic_encode

    common = FiniteSubset.make(
        other.group, [c for c in window if c in other.window.as_set]
    )
    sym = symbolic_encode(other, 1, common)
    bits = np.array(
        [0 if sym.labels[c] == "0" else 1 for c in common.elements], dtype=np.uint8
    ).reshape(1, -1)
    return ArrayPoint(other.group, 1, common, bits)


def _margin_ok(point: ArrayPoint, cell, radius: int) -> bool:
    g = point.group
    return all(g.mul(b, cell) in point.window for b in g.ball(radius))


def _write_artifacts(report: dict, artifacts: dict[str, str], out_dir) -> None:
    for name, text in artifacts.items():
        report["artifacts"][name] = {"sha256": _sha(text)}
    if out_dir is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in artifacts.items():
        (out / name).write_text(text)
        report["artifacts"][name]["path"] = name
    (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")


def verify_all(scope=None) -> tuple[dict, int]:
    """Run the registered module invariant suites; exit 1 on any failure."""
    t0 = time.perf_counter()
    results = run_checks(scope)
    record = {
        "scope": sorted(scope) if scope else "all",
        "results": [r.to_record() for r in results],
        "passed": all(r.passed for r in results),
        "timing": {"seconds": time.perf_counter() - t0},
    }
    return record, EXIT_OK if record["passed"] else EXIT_CHECK_FAILED
