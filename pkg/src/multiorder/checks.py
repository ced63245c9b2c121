"""Registry of module invariant checks, shared by the verify runner and tests.

Each check is a nullary callable returning a CheckResult; names are
"<module>.<law>" so scopes can filter by module prefix.  Sizes are fixed
and documented inline; everything is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .groups import H3, Z, Z2, FiniteSubset, check_invariance
from .orders import OrderWindow, integer_order_window, spiral_order_window
from .tilings import (
    Tile,
    center_normalize,
    instance_from_anchor,
    is_odometric,
    odometrize,
    symbolic_encode,
    validate_system,
    z2_dyadic_spec,
    z_odometer_spec,
)
from .tiling_orders import induced_order, order_interval_elements, straightness_status
from .arrays import (
    THUE_MORSE,
    ArrayPoint,
    generate_sample,
    make_point,
    shift,
    successor_iterate,
    successor_step,
)
from .asymptotic import (
    AGREEING_TAIL,
    array_distance,
    detect,
    distality_floor,
    tail_pair,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: str = ""

    def to_record(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


CHECKS: dict = {}


def check(name: str):
    def register(fn):
        CHECKS[name] = fn
        return fn

    return register


def run_checks(scope=None) -> list[CheckResult]:
    """Run all checks (or those whose module prefix is in ``scope``)."""
    results = []
    for name, fn in CHECKS.items():
        if scope and name.split(".")[0] not in scope:
            continue
        try:
            results.append(fn())
        except Exception as exc:  # a crashed check is a failed check
            results.append(CheckResult(name, False, f"raised {exc!r}"))
    return results


# -- group_core ---------------------------------------------------------------


@check("groups.associativity")
def _groups_associativity() -> CheckResult:
    for g in (Z, Z2, H3):
        ball = list(g.ball(3))
        for a, b, c in itertools.product(ball, repeat=3):
            if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)):
                return CheckResult(
                    "groups.associativity", False, f"{g.name}: {a} {b} {c}"
                )
    return CheckResult("groups.associativity", True, "exhaustive on ball(3)^3")


@check("groups.inverses")
def _groups_inverses() -> CheckResult:
    for g in (Z, Z2, H3):
        for a in g.ball(3):
            if g.mul(a, g.inv(a)) != g.identity or g.mul(g.inv(a), a) != g.identity:
                return CheckResult("groups.inverses", False, f"{g.name}: {a}")
    return CheckResult("groups.inverses", True, "")


@check("groups.enumeration-bijective")
def _groups_enumeration() -> CheckResult:
    for g in (Z, Z2, H3):
        for i in range(10_000):
            if g.index_of(g.element_at(i)) != i:
                return CheckResult(
                    "groups.enumeration-bijective", False, f"{g.name} index {i}"
                )
        if g.element_at(0) != g.identity:
            return CheckResult("groups.enumeration-bijective", False, g.name)
    return CheckResult("groups.enumeration-bijective", True, "first 10^4 indices")


@check("groups.invariance-monotone")
def _groups_invariance_monotone() -> CheckResult:
    for g, fmaker in (
        (Z, lambda n: [(i,) for i in range(n)]),
        (Z2, lambda n: [(i, j) for i in range(n) for j in range(n)]),
    ):
        for n in (5, 12, 30):
            F = FiniteSubset.make(g, fmaker(n))
            prev = None
            for r in (1, 2, 3):
                K = g.ball(r)
                ratio, _ = check_invariance(K, 1, F)
                if prev is not None and ratio < prev:
                    return CheckResult(
                        "groups.invariance-monotone", False, f"{g.name} n={n} r={r}"
                    )
                prev = ratio
    return CheckResult("groups.invariance-monotone", True, "K = balls 1..3")


@check("groups.ball-growth")
def _groups_ball_growth() -> CheckResult:
    for g in (Z, Z2, H3):
        for r in range(5):
            if not g.ball(r).as_set <= g.ball(r + 1).as_set:
                return CheckResult("groups.ball-growth", False, f"{g.name} r={r}")
    for r in range(20):
        if len(Z2.ball(r)) != (2 * r + 1) ** 2:
            return CheckResult("groups.ball-growth", False, f"Z2 r={r}")
    return CheckResult("groups.ball-growth", True, "nesting + (2r+1)^2 on Z2")


# -- orders -------------------------------------------------------------------


def _order_pool() -> list[OrderWindow]:
    pool = [integer_order_window(40), spiral_order_window(H3, 30),
            spiral_order_window(Z2, 30)]
    spec = z_odometer_spec((4, 16, 64))
    pool.append(induced_order(instance_from_anchor(spec, 3, anchor=(21,)), 3))
    dy = z2_dyadic_spec(3)
    pool.append(induced_order(instance_from_anchor(dy, 3, anchor_position=21), 3))
    return pool


def action_law_holds(act_fn, w: OrderWindow, g, h) -> bool:
    """act(h, act(g, w)) must equal the one-step act by h*g on the overlap."""
    inner = act_fn(w, g)
    if inner.position_of(h) is None:
        return True  # h fell outside the derived window; nothing to compare
    lhs = act_fn(inner, h)
    hg = w.group.mul(h, g)
    if w.position_of(hg) is None:
        return True
    rhs = act_fn(w, hg)
    r = min(lhs.radius, rhs.radius)
    return all(lhs.at_position(i) == rhs.at_position(i) for i in range(-r, r + 1))


@check("orders.action-law")
def _orders_action_law() -> CheckResult:
    act = lambda w, g: w.act(g)
    for w in _order_pool():
        ks = [-7, -3, -1, 1, 2, 5]
        for kg in ks:
            for kh in ks:
                g = w.at_position(kg)
                gw = w.act(g)
                h = gw.at_position(min(kh, gw.radius))
                if h is None:
                    continue
                if not action_law_holds(act, w, g, h):
                    return CheckResult(
                        "orders.action-law", False, f"{w.group.name} kg={kg} kh={kh}"
                    )
    return CheckResult("orders.action-law", True, "pool incl. H3 spiral windows")


@check("orders.translation-identities")
def _orders_translation() -> CheckResult:
    for w in _order_pool():
        for k in (-10, -3, -1, 0, 1, 4, 9):
            g = w.at_position(k)
            gw = w.act(g)
            for i in range(-gw.radius, gw.radius + 1):
                if w.group.mul(gw.at_position(i), g) != w.at_position(i + k):
                    return CheckResult(
                        "orders.translation-identities", False,
                        f"{w.group.name} k={k} i={i}",
                    )
            if abs(k) <= gw.radius and gw.position_of(w.group.inv(g)) != -k:
                return CheckResult(
                    "orders.translation-identities", False,
                    f"{w.group.name} inverse position k={k}",
                )
    return CheckResult("orders.translation-identities", True, "")


@check("orders.anchoring-preserved")
def _orders_anchoring() -> CheckResult:
    for w in _order_pool():
        for k in (-2, 1, 3):
            if w.act(w.at_position(k)).at_position(0) != w.group.identity:
                return CheckResult("orders.anchoring-preserved", False, w.group.name)
        if w.successor_order().at_position(0) != w.group.identity:
            return CheckResult("orders.anchoring-preserved", False, w.group.name)
    return CheckResult("orders.anchoring-preserved", True, "")


# -- tilings ------------------------------------------------------------------


@check("tilings.determinism-exact")
def _tilings_determinism() -> CheckResult:
    for spec in (z_odometer_spec((2, 4, 8, 16)), z2_dyadic_spec(4)):
        if not validate_system(spec).accepted:
            return CheckResult("tilings.determinism-exact", False, spec.group.name)
    return CheckResult("tilings.determinism-exact", True, "builtin families")


@check("tilings.symbolic-roundtrip")
def _tilings_symbolic_roundtrip() -> CheckResult:
    spec = z_odometer_spec((4, 16))
    inst = instance_from_anchor(spec, 2, anchor=(5,))
    window = inst.window
    for level in (1, 2):
        sym = symbolic_encode(inst, level, window)
        expected = {
            t.center: t.shape_id
            for t in inst.tiles[level]
            if t.center in window
        }
        got = {c: l for c, l in sym.labels.items() if l != "0"}
        if got != expected:
            return CheckResult("tilings.symbolic-roundtrip", False, f"level {level}")
    return CheckResult("tilings.symbolic-roundtrip", True, "")


@check("tilings.odometrize-congruences")
def _tilings_odometrize() -> CheckResult:
    spec = z_odometer_spec((4, 8, 16))
    fam = odometrize(spec, (4, 8, 16), center_choice="enumerate")
    if not is_odometric(fam, (4, 8, 16)):
        return CheckResult("tilings.odometrize-congruences", False, "Z family")
    counts = [len(fam.levels[k].shapes) for k in range(1, 4)]
    if counts != [4, 8, 16]:
        return CheckResult(
            "tilings.odometrize-congruences", False, f"variant counts {counts}"
        )
    dy = z2_dyadic_spec(2)
    fam2 = odometrize(dy, (4, 16), center_choice="enumerate")
    if not is_odometric(fam2, (4, 16)):
        return CheckResult("tilings.odometrize-congruences", False, "Z2 family")
    return CheckResult(
        "tilings.odometrize-congruences", True, "all variants, exhaustive rows"
    )


@check("tilings.dyadic-invariance-ratio")
def _tilings_dyadic_ratio() -> CheckResult:
    spec = z2_dyadic_spec(5)
    cross = FiniteSubset.make(Z2, [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
    for k in range(1, 6):
        shape = spec.shape(k, f"sq{2 ** k}")
        ratio, _ = check_invariance(cross, 1, shape.offsets)
        if ratio != Fraction(4, 2 ** k):
            return CheckResult(
                "tilings.dyadic-invariance-ratio", False, f"k={k} ratio={ratio}"
            )
    return CheckResult("tilings.dyadic-invariance-ratio", True, "ratio = 4/2^k exactly")


# -- tiling orders ------------------------------------------------------------


@check("tiling-orders.level-consistency")
def _tiling_orders_consistency() -> CheckResult:
    for spec in (z_odometer_spec((2, 4, 8, 16, 32, 64, 128)), z2_dyadic_spec(7)):
        top = spec.top_level
        size = spec.levels[top].shapes[0].size
        for pos in (0, 5, size // 2, size - 3):
            inst = instance_from_anchor(spec, top, anchor_position=pos)
            for k in range(1, top):
                lo = spec.tile_cells(inst.central_tile(k))
                hi = spec.tile_cells(inst.central_tile(k + 1))
                pos_hi = {c: i for i, c in enumerate(hi)}
                run = [pos_hi[c] for c in lo]
                if run != list(range(run[0], run[0] + len(run))):
                    return CheckResult(
                        "tiling-orders.level-consistency",
                        False,
                        f"{spec.group.name} anchor pos {pos} level {k}",
                    )
    return CheckResult(
        "tiling-orders.level-consistency", True, "flattenings nest through level 7"
    )


@check("tiling-orders.interval-nesting")
def _tiling_orders_interval_nesting() -> CheckResult:
    spec = z2_dyadic_spec(2)
    tile = Tile(2, "sq4", (0, 0))
    subs = [Tile(1, "sq2", c) for c in spec.levels[2].subtile_orders["sq4"]]
    for i, j in [(1, 16), (2, 7), (5, 13), (4, 4)]:
        interval = set(order_interval_elements(spec, tile, i, j))
        for sub in subs:
            sub_cells = spec.tile_cells(sub)
            hit = [idx for idx, c in enumerate(sub_cells) if c in interval]
            if hit and hit != list(range(hit[0], hit[-1] + 1)):
                return CheckResult(
                    "tiling-orders.interval-nesting", False, f"[{i},{j}] in {sub}"
                )
    return CheckResult("tiling-orders.interval-nesting", True, "")


@check("tiling-orders.plus-tail-bounded")
def _tiling_orders_plus_tail() -> CheckResult:
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(0,))
    st = straightness_status(inst, 3)
    if st.kind != "plus-n-tail":
        return CheckResult("tiling-orders.plus-tail-bounded", False, st.kind)
    cells = spec.tile_cells(inst.central_tile(3))
    anchor = cells.index(spec.group.identity)
    if anchor != 0:
        return CheckResult(
            "tiling-orders.plus-tail-bounded", False, f"anchor at {anchor}"
        )
    return CheckResult(
        "tiling-orders.plus-tail-bounded", True, "no predecessors beyond the anchor"
    )


@check("tiling-orders.shift-equivariance")
def _tiling_orders_equivariance() -> CheckResult:
    spec = z2_dyadic_spec(4)
    inst = instance_from_anchor(spec, 4, anchor_position=85)
    w = induced_order(inst, 4)
    for k in (-5, -1, 2, 9):
        g = w.at_position(k)
        shifted = inst.shifted(g)
        lhs = induced_order(shifted, 4)
        rhs = w.act(g)
        r = min(lhs.radius, rhs.radius)
        if any(lhs.at_position(i) != rhs.at_position(i) for i in range(-r, r + 1)):
            return CheckResult("tiling-orders.shift-equivariance", False, f"k={k}")
    return CheckResult("tiling-orders.shift-equivariance", True, "")


# -- arrays -------------------------------------------------------------------


@check("arrays.shift-composition")
def _arrays_shift_composition() -> CheckResult:
    for g, cells in (
        (Z, [(i,) for i in range(-6, 7)]),
        (H3, list(H3.ball(2))),
    ):
        x = make_point(g, 2, cells, lambda f, c: (7 * f + sum(3 * v for v in c)) % 2)
        probes = list(g.ball(1))
        for h in probes:
            for h2 in probes:
                lhs = shift(shift(x, h), h2)
                rhs = shift(x, g.mul(h2, h))
                common = [c for c in lhs.window if c in rhs.window]
                for c in common:
                    for f in range(2):
                        if lhs.bits[f, lhs.index[c]] != rhs.bits[f, rhs.index[c]]:
                            return CheckResult(
                                "arrays.shift-composition", False, f"{g.name} {h} {h2}"
                            )
    return CheckResult("arrays.shift-composition", True, "incl. H3 (anti-action law)")


@check("arrays.census-translation-invariant")
def _arrays_census_translation() -> CheckResult:
    tm = generate_sample(THUE_MORSE, 0, {"kind": "interval", "lo": -3000, "hi": 3000})
    F = [(0,), (1,), (2,), (3,), (4,)]
    base = tm.census(1, F).count
    for h in ((7,), (-19,), (201,)):
        Fh = [Z.mul(f, h) for f in F]
        if tm.census(1, Fh).count != base:
            return CheckResult(
                "arrays.census-translation-invariant", False, f"h={h}"
            )
    return CheckResult("arrays.census-translation-invariant", True, "")


@check("arrays.tm-complexity-oracle")
def _arrays_tm_complexity() -> CheckResult:
    tm = generate_sample(THUE_MORSE, 0, {"kind": "interval", "lo": -5000, "hi": 5000})
    bits = "".join(str(tm.point.bit(1, (i,))) for i in range(-5000, 5001))
    prev = None
    for length in range(1, 17):
        oracle = len({bits[i : i + length] for i in range(len(bits) - length + 1)})
        count = tm.census(1, [(i,) for i in range(length)]).count
        if count != oracle:
            return CheckResult(
                "arrays.tm-complexity-oracle", False, f"l={length}: {count} != {oracle}"
            )
        if count > 10 * length / 3 + 4:
            return CheckResult(
                "arrays.tm-complexity-oracle", False, f"l={length} above linear bound"
            )
        if prev is not None and count < prev:
            return CheckResult(
                "arrays.tm-complexity-oracle", False, f"l={length} not monotone"
            )
        prev = count
    return CheckResult("arrays.tm-complexity-oracle", True, "lengths 1..16")


@check("arrays.successor-path-vs-jump")
def _arrays_successor_path() -> CheckResult:
    spec = z_odometer_spec((4, 16, 64))
    inst = instance_from_anchor(spec, 3, anchor=(21,))
    w = induced_order(inst, 3)
    x = make_point(Z, 1, [(i,) for i in range(-80, 81)], lambda f, c: c[0] % 2)
    for target in (5, -5, min(12, w.radius)):
        cur, order = x, w
        step = 1 if target >= 0 else -1
        for _ in range(abs(target)):
            cur, order = successor_step(cur, order, step)
        jump = successor_iterate(x, w, target)
        common = [c for c in cur.window if c in jump.window]
        for c in common:
            if cur.bits[0, cur.index[c]] != jump.bits[0, jump.index[c]]:
                return CheckResult(
                    "arrays.successor-path-vs-jump", False, f"target {target}"
                )
    return CheckResult("arrays.successor-path-vs-jump", True, "")


# -- asymptotic ---------------------------------------------------------------


@check("asymptotic.pseudometric")
def _asymptotic_pseudometric() -> CheckResult:
    cells = [(i,) for i in range(-6, 7)]
    pts = [
        make_point(Z, 1, cells, lambda f, c, s=s: (c[0] * s + s) % 2)
        for s in (1, 2, 3)
    ]
    x, y, z = pts
    if array_distance(x, x) != 0:
        return CheckResult("asymptotic.pseudometric", False, "identity")
    if array_distance(x, y) != array_distance(y, x):
        return CheckResult("asymptotic.pseudometric", False, "symmetry")
    dxz = array_distance(x, z)
    if dxz > max(array_distance(x, y), array_distance(y, z)):
        return CheckResult("asymptotic.pseudometric", False, "ultrametric triangle")
    return CheckResult("asymptotic.pseudometric", True, "")


@check("asymptotic.tail-pair-agreeing")
def _asymptotic_tail_pair() -> CheckResult:
    w = integer_order_window(60)
    x = make_point(Z, 1, [(i,) for i in range(-60, 61)], lambda f, c: (c[0] * 3) % 2)
    for k0, flip in ((0, (-1,)), (0, (-13,)), (5, (2,))):
        y = tail_pair(x, w, k0, flip)
        v = detect(x, y, w, k0, 60)
        if v.kind != AGREEING_TAIL or v.from_k != k0:
            return CheckResult(
                "asymptotic.tail-pair-agreeing", False, f"k0={k0} flip={flip}"
            )
    return CheckResult("asymptotic.tail-pair-agreeing", True, "")


@check("asymptotic.shift-consistency")
def _asymptotic_shift_consistency() -> CheckResult:
    w = integer_order_window(60)
    x = make_point(Z, 1, [(i,) for i in range(-60, 61)], lambda f, c: (c[0] * 5) % 2)
    y = tail_pair(x, w, 0, (-2,))
    for k in (1, 3, 7):
        g = w.at_position(k)
        wv = w.act(g)
        v = detect(shift(x, g), shift(y, g), wv, 0, wv.radius)
        if v.kind != AGREEING_TAIL:
            return CheckResult("asymptotic.shift-consistency", False, f"k={k}")
    return CheckResult("asymptotic.shift-consistency", True, "")


@check("asymptotic.horizon-monotone")
def _asymptotic_horizon_monotone() -> CheckResult:
    w = integer_order_window(80)
    x = make_point(Z, 1, [(i,) for i in range(-80, 81)], lambda f, c: 0)
    y = tail_pair(x, w, 0, (-4,))
    verdicts = [detect(x, y, w, 0, h).kind for h in (10, 40, 80)]
    if any(v != AGREEING_TAIL for v in verdicts):
        return CheckResult("asymptotic.horizon-monotone", False, str(verdicts))
    return CheckResult("asymptotic.horizon-monotone", True, "")


@check("asymptotic.case-b-distality")
def _asymptotic_case_b() -> CheckResult:
    cells = [(i,) for i in range(-24, 25)]
    even = make_point(Z, 1, cells, lambda f, c: 1 - abs(c[0]) % 2)
    odd = make_point(Z, 1, cells, lambda f, c: abs(c[0]) % 2)
    floor = distality_floor(even, odd, [(i,) for i in range(-8, 9)])
    if floor < Fraction(1, 2):
        return CheckResult("asymptotic.case-b-distality", False, str(floor))
    return CheckResult("asymptotic.case-b-distality", True, f"floor = {floor}")


# -- coder --------------------------------------------------------------------


def _small_coder():
    from .coder import product_pipeline

    spec = z_odometer_spec((16, 64, 256))
    inst = instance_from_anchor(spec, 3, anchor=(88,))
    tm = generate_sample(THUE_MORSE, 5, {"kind": "interval", "lo": -800, "hi": 800})
    return product_pipeline(tm, inst)


@check("coder.mask-exactness")
def _coder_mask() -> CheckResult:
    coder = _small_coder()
    coded = coder.encode(2)
    for a in coded.mask_audit:
        if not a["exact"]:
            return CheckResult("coder.mask-exactness", False, str(a))
    return CheckResult("coder.mask-exactness", True, "depths 1..2")


@check("coder.determinism")
def _coder_determinism() -> CheckResult:
    r1 = _small_coder().encode(2).to_record()
    r2 = _small_coder().encode(2).to_record()
    if r1 != r2:
        return CheckResult("coder.determinism", False, "records differ")
    return CheckResult("coder.determinism", True, "")


@check("coder.prefix-stability")
def _coder_prefix_stability() -> CheckResult:
    coder = _small_coder()
    spec_levels = [1, 2]
    d1 = coder.encode(1)
    d2 = coder.encode(2, step_levels=spec_levels)
    defined1 = [
        s.write_positions for s in d1.steps if s.status == "coded" and s.step == 1
    ]
    for s2 in d2.steps:
        if s2.step != 1 or s2.status != "coded":
            continue
        match = [w for w in defined1 if w == s2.write_positions]
        if not match:
            return CheckResult(
                "coder.prefix-stability", False, f"range {s2.range_index}"
            )
        for q in s2.write_positions:
            if d1.row_at(q)[0] != d2.row_at(q)[0]:
                return CheckResult("coder.prefix-stability", False, f"pos {q}")
    return CheckResult("coder.prefix-stability", True, "")


@check("coder.write-disjointness")
def _coder_write_disjoint() -> CheckResult:
    coded = _small_coder().encode(2)
    seen: dict[int, int] = {}
    for s in coded.steps:
        if s.status != "coded":
            continue
        for q in s.write_positions:
            if q in seen:
                return CheckResult(
                    "coder.write-disjointness", False, f"pos {q} written twice"
                )
            seen[q] = s.step
    return CheckResult("coder.write-disjointness", True, f"{len(seen)} writes")


@check("coder.separation-soundness")
def _coder_separation() -> CheckResult:
    from .coder import verify_separation

    coder = _small_coder()
    x = coder.point
    bits = x.bits.copy()
    bits[0, x.index[(3,)]] ^= 1
    x2 = ArrayPoint(x.group, x.floors, x.window, bits)
    y = coder.encode(2)
    y2 = coder.encode_variant(x2, 2)
    rep = verify_separation(x, x2, y, y2, 2)
    if not rep.ok:
        return CheckResult("coder.separation-soundness", False, "no witnesses")
    horizon = max(r.witness_position for r in rep.rows)
    v = detect(y.combined(), y2.combined(), y.order, 0, horizon)
    if v.kind != "separated-beyond":
        return CheckResult("coder.separation-soundness", False, v.kind)
    return CheckResult("coder.separation-soundness", True, "")


# -- pipeline -----------------------------------------------------------------


@check("pipeline.report-determinism")
def _pipeline_determinism() -> CheckResult:
    import json

    from .pipeline import BUILTIN_CONFIGS, load_config, run_pipeline

    cfg = load_config("smoke-zero")
    rec1, code1 = run_pipeline(cfg)
    rec2, code2 = run_pipeline(load_config("smoke-zero"))
    for rec in (rec1, rec2):
        rec.pop("timing", None)
    if code1 != code2 or json.dumps(rec1, sort_keys=True) != json.dumps(
        rec2, sort_keys=True
    ):
        return CheckResult("pipeline.report-determinism", False, "")
    del BUILTIN_CONFIGS
    return CheckResult("pipeline.report-determinism", True, "smoke config, two runs")
