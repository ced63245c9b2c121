"""Hierarchical tiling systems: shapes, subtile decompositions, centering.

A spec describes, per level, a finite set of shapes together with an exact
decomposition of every shape into translated shapes of the previous level
and a fixed ordering of the subtile centers.  Level 0 is always the trivial
singleton shape ``e``.  Tiles of a concrete (windowed) instance are shape
translates ``S*c`` identified by (level, shape id, center).

Conventions:
  * every shape's offsets contain the unit, and the unit *is* the center
    (a loaded file may designate another center; it is normalized away);
  * a decomposition row lists the centers at which a child shape is placed,
    so ``S = union of S' * c'`` exactly (determinism);
  * the subtile order is a permutation of all child centers and induces the
    recursive enumeration ``enum(S)`` used everywhere downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BaseNotDividingError,
    BaseTooLargeError,
    MalformedSpecError,
    UncoveredCellError,
    UnknownShapeError,
)
from .groups import (
    FiniteSubset,
    Group,
    Point,
    check_invariance,
    group_by_name,
    to_fraction,
)

TRIVIAL_ID = "e"


@dataclass(frozen=True)
class Shape:
    id: str
    offsets: FiniteSubset

    def __post_init__(self):
        if self.offsets.group.identity not in self.offsets:
            raise MalformedSpecError(f"shape {self.id!r} does not contain the unit")

    @property
    def size(self) -> int:
        return len(self.offsets)


@dataclass(frozen=True)
class DecompositionRow:
    shape_id: str
    centers: tuple[Point, ...]


@dataclass
class LevelSpec:
    shapes: tuple[Shape, ...]
    decompositions: dict[str, tuple[DecompositionRow, ...]]
    subtile_orders: dict[str, tuple[Point, ...]]
    p: int | None = None

    def shape(self, sid: str) -> Shape:
        for s in self.shapes:
            if s.id == sid:
                return s
        raise UnknownShapeError(sid)


@dataclass(frozen=True)
class Tile:
    level: int
    shape_id: str
    center: Point


class TilingSystemSpec:
    """Levels 0..K; index 0 is the implicit trivial level."""

    def __init__(self, group: Group, levels: list[LevelSpec]):
        self.group = group
        trivial = LevelSpec(
            shapes=(Shape(TRIVIAL_ID, FiniteSubset.make(group, [group.identity])),),
            decompositions={},
            subtile_orders={},
            p=1,
        )
        self.levels: list[LevelSpec] = [trivial] + list(levels)
        self._enum_cache: dict[tuple[int, str], tuple[Point, ...]] = {}
        self._check_structure()

    # -- structure -------------------------------------------------------

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    def shape(self, level: int, sid: str) -> Shape:
        return self.levels[level].shape(sid)

    def base(self) -> tuple[int, ...]:
        """p values for levels 1..K (None entries excluded -> error)."""
        ps = [lv.p for lv in self.levels[1:]]
        if any(p is None for p in ps):
            raise MalformedSpecError("spec has no complete base (p per level)")
        return tuple(ps)  # type: ignore[return-value]

    def _check_structure(self) -> None:
        for k, lv in enumerate(self.levels[1:], start=1):
            if not lv.shapes:
                raise MalformedSpecError(f"level {k} has no shapes")
            below = {s.id for s in self.levels[k - 1].shapes}
            for s in lv.shapes:
                rows = lv.decompositions.get(s.id)
                if not rows:
                    raise MalformedSpecError(
                        f"level {k} shape {s.id!r} has no decomposition rows"
                    )
                centers: list[Point] = []
                for row in rows:
                    if row.shape_id not in below:
                        raise MalformedSpecError(
                            f"level {k} shape {s.id!r} references unknown "
                            f"child {row.shape_id!r}"
                        )
                    centers.extend(row.centers)
                if len(set(centers)) != len(centers):
                    raise MalformedSpecError(
                        f"level {k} shape {s.id!r} repeats a subtile center"
                    )
                order = lv.subtile_orders.get(s.id)
                if order is None or sorted(order) != sorted(centers):
                    raise MalformedSpecError(
                        f"level {k} shape {s.id!r} subtile order is not a "
                        "permutation of its centers"
                    )

    def child_of(self, level: int, sid: str) -> dict[Point, str]:
        """Map subtile center -> child shape id."""
        out: dict[Point, str] = {}
        for row in self.levels[level].decompositions[sid]:
            for c in row.centers:
                out[c] = row.shape_id
        return out

    # -- induced enumeration ----------------------------------------------

    def enum(self, level: int, sid: str) -> tuple[Point, ...]:
        """Recursive subtile-order flattening of a shape (its induced order)."""
        key = (level, sid)
        got = self._enum_cache.get(key)
        if got is not None:
            return got
        if level == 0:
            out: tuple[Point, ...] = (self.group.identity,)
        else:
            child = self.child_of(level, sid)
            parts: list[Point] = []
            for c in self.levels[level].subtile_orders[sid]:
                parts.extend(
                    self.group.mul(x, c) for x in self.enum(level - 1, child[c])
                )
            out = tuple(parts)
        self._enum_cache[key] = out
        return out

    def center_position(self, level: int, sid: str) -> int:
        """0-based position of the center (the unit) along the shape's order."""
        return self.enum(level, sid).index(self.group.identity)

    def is_centered(self) -> bool:
        return all(
            self.center_position(k, s.id) == 0
            for k in range(1, self.top_level + 1)
            for s in self.levels[k].shapes
        )

    def run_starts(self, level: int, sid: str) -> tuple[int, ...]:
        """Start offset of each subtile run in the shape's enumeration."""
        child = self.child_of(level, sid)
        starts = []
        acc = 0
        for c in self.levels[level].subtile_orders[sid]:
            starts.append(acc)
            acc += self.shape(level - 1, child[c]).size
        return tuple(starts)

    def tile_cells(self, tile: Tile) -> tuple[Point, ...]:
        """Cells of a tile in its induced order."""
        return tuple(
            self.group.mul(s, tile.center)
            for s in self.enum(tile.level, tile.shape_id)
        )


# -- validation ------------------------------------------------------------


@dataclass
class LevelReport:
    level: int
    shape_sizes: dict[str, int]
    determinism_ok: bool
    violations: list[tuple[str, Point, str]]
    invariance: list[dict]


@dataclass
class ValidationReport:
    accepted: bool
    levels: list[LevelReport]

    def to_record(self) -> dict:
        return {
            "accepted": self.accepted,
            "levels": [
                {
                    "level": lr.level,
                    "shape_sizes": lr.shape_sizes,
                    "determinism_ok": lr.determinism_ok,
                    "violations": [
                        {"shape": sid, "center": list(c), "kind": kind}
                        for sid, c, kind in lr.violations
                    ],
                    "invariance": lr.invariance,
                }
                for lr in self.levels
            ],
        }


def validate_system(spec: TilingSystemSpec, invariance_pairs=()) -> ValidationReport:
    """Determinism (exact partition) per level, plus shape invariance ratios.

    ``invariance_pairs`` is an iterable of (K, eps) with K a FiniteSubset;
    ratios of every shape against each pair are reported.  The system is
    accepted iff the subtile translates partition each shape exactly.
    """
    g = spec.group
    reports: list[LevelReport] = []
    accepted = True
    for k in range(1, spec.top_level + 1):
        lv = spec.levels[k]
        violations: list[tuple[str, Point, str]] = []
        for s in lv.shapes:
            covered: set[Point] = set()
            for row in lv.decompositions[s.id]:
                child = spec.shape(k - 1, row.shape_id)
                for c in row.centers:
                    cells = {g.mul(x, c) for x in child.offsets}
                    overlap = covered & cells
                    if overlap:
                        violations.append((s.id, c, "overlap"))
                    stray = cells - s.offsets.as_set
                    if stray:
                        violations.append((s.id, c, "outside-shape"))
                    covered |= cells
            if covered != s.offsets.as_set and not any(
                v[0] == s.id for v in violations
            ):
                violations.append((s.id, g.identity, "gap"))
        inv_rows = []
        for K, eps in invariance_pairs:
            for s in lv.shapes:
                ratio, ok = check_invariance(K, eps, s.offsets)
                inv_rows.append(
                    {
                        "shape": s.id,
                        "eps": str(to_fraction(eps)),
                        "ratio": str(ratio),
                        "invariant": ok,
                    }
                )
        det_ok = not violations
        accepted = accepted and det_ok
        reports.append(
            LevelReport(
                level=k,
                shape_sizes={s.id: s.size for s in lv.shapes},
                determinism_ok=det_ok,
                violations=violations,
                invariance=inv_rows,
            )
        )
    return ValidationReport(accepted=accepted, levels=reports)


def decompose(spec: TilingSystemSpec, level: int, tile: Tile) -> list[Tile]:
    """Subtiles of a tile in the configured subtile order."""
    if level < 1 or tile.level != level:
        raise UnknownShapeError(f"cannot decompose level-{tile.level} tile at level {level}")
    lv = spec.levels[level]
    if all(s.id != tile.shape_id for s in lv.shapes):
        raise UnknownShapeError(tile.shape_id)
    child = spec.child_of(level, tile.shape_id)
    return [
        Tile(level - 1, child[c], spec.group.mul(c, tile.center))
        for c in lv.subtile_orders[tile.shape_id]
    ]


# -- windowed instances ------------------------------------------------------


class TilingInstance:
    """A consistent assignment of tiles on a window, one chain of central tiles.

    Constructed from a top-level tile containing the unit; all lower levels
    are forced by determinism.  The declared window defaults to the top
    tile's cells and is only used by coverage checks.
    """

    def __init__(self, spec: TilingSystemSpec, top_tile: Tile, window=None):
        self.spec = spec
        self.group = spec.group
        self.top_level = top_tile.level
        tiles: dict[int, tuple[Tile, ...]] = {top_tile.level: (top_tile,)}
        for k in range(top_tile.level, 0, -1):
            subs: list[Tile] = []
            for t in tiles[k]:
                subs.extend(decompose(spec, k, t))
            tiles[k - 1] = tuple(subs)
        self.tiles = tiles
        cells = spec.tile_cells(top_tile)
        if self.group.identity not in set(cells):
            raise MalformedSpecError("top tile does not contain the unit")
        self.window = (
            window
            if window is not None
            else FiniteSubset.make(self.group, cells)
        )

    @cached_property
    def cell_maps(self) -> dict[int, dict[Point, Tile]]:
        out: dict[int, dict[Point, Tile]] = {}
        for k, tls in self.tiles.items():
            m: dict[Point, Tile] = {}
            for t in tls:
                for cell in self.spec.tile_cells(t):
                    m[cell] = t
            out[k] = m
        return out

    def central_tile(self, level: int) -> Tile:
        t = self.cell_maps[level].get(self.group.identity)
        if t is None:
            raise UncoveredCellError(f"no central tile at level {level}")
        return t

    def with_window(self, window: FiniteSubset) -> "TilingInstance":
        clone = TilingInstance(self.spec, self.tiles[self.top_level][0], window)
        return clone

    def shifted(self, h: Point) -> "TilingInstance":
        """The instance of the shifted tiling: centers move c -> c * h^-1."""
        hinv = self.group.inv(h)
        top = self.tiles[self.top_level][0]
        moved = Tile(top.level, top.shape_id, self.group.mul(top.center, hinv))
        return TilingInstance(self.spec, moved)


def instance_from_anchor(
    spec: TilingSystemSpec,
    level: int,
    shape_id: str | None = None,
    anchor: Point | None = None,
    anchor_position: int | None = None,
) -> TilingInstance:
    """Instance whose top central tile places the unit at the given anchor.

    ``anchor`` is an offset of the top shape; ``anchor_position`` selects it
    by its position along the shape's induced order instead.
    """
    lv = spec.levels[level]
    sid = shape_id if shape_id is not None else lv.shapes[0].id
    shape = spec.shape(level, sid)
    if anchor is None:
        if anchor_position is None:
            raise ValueError("need anchor or anchor_position")
        anchor = spec.enum(level, sid)[anchor_position]
    if anchor not in shape.offsets:
        raise MalformedSpecError(f"anchor {anchor!r} is not an offset of {sid!r}")
    center = spec.group.inv(anchor)
    return TilingInstance(spec, Tile(level, sid, center))


# -- symbolic encoding -------------------------------------------------------


@dataclass(frozen=True)
class SymbolicTiling:
    group: Group
    level: int
    labels: dict  # cell -> shape id or "0"

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted({v for v in self.labels.values()}))


def symbolic_encode(
    instance: TilingInstance, level: int, window: FiniteSubset
) -> SymbolicTiling:
    """Label each window cell with its tile's shape id at centers, else "0"."""
    m = instance.cell_maps[level]
    labels = {}
    for cell in window:
        t = m.get(cell)
        if t is None:
            raise UncoveredCellError(f"cell {cell!r} uncovered at level {level}")
        labels[cell] = t.shape_id if t.center == cell else "0"
    return SymbolicTiling(instance.group, level, labels)


def centers_from_symbolic(sym: SymbolicTiling) -> dict[Point, str]:
    """Round-trip helper: recover center -> shape id from a labeling."""
    return {cell: lab for cell, lab in sym.labels.items() if lab != "0"}


# -- centering and the odometric construction --------------------------------


def center_normalize(spec: TilingSystemSpec) -> TilingSystemSpec:
    """Relocate every tile's center to the initial element of its order.

    Tile sets and their induced enumerations are unchanged; only the
    (shape, center) representation moves.  Straight elements keep their
    induced orders.
    """
    g = spec.group
    s1: dict[tuple[int, str], Point] = {}
    for k in range(0, spec.top_level + 1):
        for s in spec.levels[k].shapes:
            s1[(k, s.id)] = spec.enum(k, s.id)[0]

    new_levels: list[LevelSpec] = []
    for k in range(1, spec.top_level + 1):
        lv = spec.levels[k]
        shapes = []
        decomps: dict[str, tuple[DecompositionRow, ...]] = {}
        orders: dict[str, tuple[Point, ...]] = {}
        for s in lv.shapes:
            sig = s1[(k, s.id)]
            sig_inv = g.inv(sig)
            shapes.append(
                Shape(s.id, FiniteSubset.make(g, [g.mul(x, sig_inv) for x in s.offsets]))
            )
            child = spec.child_of(k, s.id)

            def move(c: Point) -> Point:
                return g.mul(g.mul(s1[(k - 1, child[c])], c), sig_inv)

            decomps[s.id] = tuple(
                DecompositionRow(row.shape_id, tuple(move(c) for c in row.centers))
                for row in lv.decompositions[s.id]
            )
            orders[s.id] = tuple(move(c) for c in lv.subtile_orders[s.id])
        new_levels.append(LevelSpec(tuple(shapes), decomps, orders, p=lv.p))
    return TilingSystemSpec(g, new_levels)


def _check_base(spec: TilingSystemSpec, base: tuple[int, ...]) -> None:
    if len(base) != spec.top_level:
        raise MalformedSpecError("base length must match the number of levels")
    prev: int | None = None
    for k, p in enumerate(base, start=1):
        if p < 1:
            raise BaseNotDividingError(f"p_{k} must be a positive integer")
        if prev is not None:
            if p <= prev:
                raise BaseNotDividingError(f"base must be strictly increasing at level {k}")
            if p % prev != 0:
                raise BaseNotDividingError(f"{prev} does not divide {p} (level {k})")
        min_size = min(s.size for s in spec.levels[k].shapes)
        if p > min_size:
            raise BaseTooLargeError(
                f"p_{k} = {p} exceeds the smallest level-{k} shape size {min_size}"
            )
        prev = p


def is_odometric(spec: TilingSystemSpec, base: tuple[int, ...] | None = None) -> bool:
    """Center-position congruences j_T' == j_T mod p_{k-1}, exhaustively."""
    base = base if base is not None else spec.base()
    for k in range(1, spec.top_level + 1):
        p_prev = 1 if k == 1 else base[k - 2]
        lv = spec.levels[k]
        for s in lv.shapes:
            en = spec.enum(k, s.id)
            j_t = en.index(spec.group.identity)
            for row in lv.decompositions[s.id]:
                for c in row.centers:
                    if (en.index(c) - j_t) % p_prev != 0:
                        return False
    return True


def odometrize(
    spec: TilingSystemSpec,
    base: tuple[int, ...],
    center_choice: str = "deterministic",
) -> TilingSystemSpec:
    """Move centers into the initial p_k positions so center congruences hold.

    ``deterministic`` anchors every top-level shape at position 0 and
    propagates the forced choices downward; when nothing is forced off 0
    (subtile run starts aligned to the base) the spec is returned as-is.
    ``enumerate`` materializes all p_k center variants of every shape, the
    full finite family of admissible re-centerings.
    """
    if not spec.is_centered():
        raise MalformedSpecError("odometrize requires a centered spec")
    base = tuple(base)
    _check_base(spec, base)
    g = spec.group

    if center_choice not in ("deterministic", "enumerate"):
        raise ValueError(center_choice)

    # Which (shape, center position) variants exist per level.
    variants: dict[int, set[tuple[str, int]]] = {
        k: set() for k in range(spec.top_level + 1)
    }
    top = spec.top_level
    if center_choice == "enumerate":
        for k in range(1, top + 1):
            p = base[k - 1]
            for s in spec.levels[k].shapes:
                variants[k] |= {(s.id, j) for j in range(p)}
    else:
        for s in spec.levels[top].shapes:
            variants[top].add((s.id, 0))
    variants[0] = {(TRIVIAL_ID, 0)}

    def forced_children(k: int, sid: str, j: int) -> list[tuple[str, int]]:
        if k == 1:
            return [(TRIVIAL_ID, 0)]
        p_prev = base[k - 2]
        child = spec.child_of(k, sid)
        order = spec.levels[k].subtile_orders[sid]
        starts = spec.run_starts(k, sid)
        return [
            (child[c], (j - r) % p_prev) for c, r in zip(order, starts)
        ]

    for k in range(top, 0, -1):
        for sid, j in sorted(variants[k]):
            for pair in forced_children(k, sid, j):
                variants[k - 1].add(pair)

    plain = all(j == 0 for k in range(1, top + 1) for _, j in variants[k])
    if plain and all(spec.levels[k].p == base[k - 1] for k in range(1, top + 1)):
        if is_odometric(spec, base):
            return spec

    def vid(sid: str, j: int, k: int) -> str:
        if k == 0:
            return TRIVIAL_ID
        return sid if plain else f"{sid}@{j}"

    new_levels: list[LevelSpec] = []
    for k in range(1, top + 1):
        lv = spec.levels[k]
        shapes: list[Shape] = []
        decomps: dict[str, tuple[DecompositionRow, ...]] = {}
        orders: dict[str, tuple[Point, ...]] = {}
        for sid, j in sorted(variants[k]):
            s = lv.shape(sid)
            en = spec.enum(k, sid)
            sigma = en[j]
            sigma_inv = g.inv(sigma)
            name = vid(sid, j, k)
            shapes.append(
                Shape(name, FiniteSubset.make(g, [g.mul(x, sigma_inv) for x in s.offsets]))
            )
            child = spec.child_of(k, sid)
            starts = dict(zip(lv.subtile_orders[sid], spec.run_starts(k, sid)))
            p_prev = 1 if k == 1 else base[k - 2]

            def child_variant(c: Point) -> tuple[str, int, Point]:
                jc = (j - starts[c]) % p_prev
                csid = child[c]
                sig_c = spec.enum(k - 1, csid)[jc] if k > 1 else g.identity
                new_center = g.mul(g.mul(sig_c, c), sigma_inv)
                return csid, jc, new_center

            rows: dict[str, list[Point]] = {}
            order_out: list[Point] = []
            for c in lv.subtile_orders[sid]:
                csid, jc, nc = child_variant(c)
                rows.setdefault(vid(csid, jc, k - 1), []).append(nc)
                order_out.append(nc)
            decomps[name] = tuple(
                DecompositionRow(cid, tuple(cs)) for cid, cs in sorted(rows.items())
            )
            orders[name] = tuple(order_out)
        new_levels.append(LevelSpec(tuple(shapes), decomps, orders, p=base[k - 1]))
    out = TilingSystemSpec(g, new_levels)
    if not is_odometric(out, base):
        raise AssertionError("odometrize produced a non-odometric spec")
    return out


# -- built-in spec generators -------------------------------------------------


def z_odometer_spec(base: tuple[int, ...], subtile_orders="natural") -> TilingSystemSpec:
    """Interval tiling system of Z: level-k shape [0, p_k), nested intervals.

    ``subtile_orders`` is "natural", "reversed", or a mapping level ->
    ("natural" | "reversed") for mixed configurations.
    """
    from .groups import Z

    def order_kind(k: int) -> str:
        if isinstance(subtile_orders, str):
            return subtile_orders
        return subtile_orders.get(k, "natural")

    levels: list[LevelSpec] = []
    prev_p = 1
    prev_id = TRIVIAL_ID
    for k, p in enumerate(base, start=1):
        if p % prev_p != 0:
            raise BaseNotDividingError(f"{prev_p} does not divide {p}")
        sid = f"I{p}"
        offsets = FiniteSubset.make(Z, [(i,) for i in range(p)])
        centers = tuple((i,) for i in range(0, p, prev_p))
        order = centers if order_kind(k) == "natural" else tuple(reversed(centers))
        levels.append(
            LevelSpec(
                shapes=(Shape(sid, offsets),),
                decompositions={sid: (DecompositionRow(prev_id, centers),)},
                subtile_orders={sid: order},
                p=p,
            )
        )
        prev_p, prev_id = p, sid
    return TilingSystemSpec(Z, levels)


def z2_dyadic_spec(levels: int) -> TilingSystemSpec:
    """Dyadic squares [0, 2^k)^2 with the 2x2 boustrophedon subtile order."""
    from .groups import Z2

    out: list[LevelSpec] = []
    prev_id = TRIVIAL_ID
    for k in range(1, levels + 1):
        side = 2 ** k
        h = side // 2
        sid = f"sq{side}"
        offsets = FiniteSubset.make(
            Z2, [(x, y) for x in range(side) for y in range(side)]
        )
        centers = ((0, 0), (h, 0), (h, h), (0, h)) if k > 1 else (
            (0, 0), (1, 0), (1, 1), (0, 1)
        )
        out.append(
            LevelSpec(
                shapes=(Shape(sid, offsets),),
                decompositions={sid: (DecompositionRow(prev_id, centers),)},
                subtile_orders={sid: centers},
                p=4 ** k,
            )
        )
        prev_id = sid
    return TilingSystemSpec(Z2, out)


# -- canonical serialization --------------------------------------------------


def spec_to_record(spec: TilingSystemSpec) -> dict:
    return {
        "group": spec.group.name,
        "levels": [
            {
                "p": lv.p,
                "shapes": [
                    {
                        "id": s.id,
                        "offsets": [list(x) for x in s.offsets],
                        "center": [0] * spec.group.dim,
                        "subtile_order": [
                            list(c) for c in lv.subtile_orders[s.id]
                        ],
                        "decomposition": [
                            {
                                "shape_id": row.shape_id,
                                "centers": [list(c) for c in row.centers],
                            }
                            for row in lv.decompositions[s.id]
                        ],
                    }
                    for s in lv.shapes
                ],
            }
            for lv in spec.levels[1:]
        ],
    }


def spec_to_json(spec: TilingSystemSpec) -> str:
    return json.dumps(spec_to_record(spec), sort_keys=True, indent=2) + "\n"


def spec_from_record(record: dict) -> TilingSystemSpec:
    g = group_by_name(record["group"])
    levels: list[LevelSpec] = []
    for lv in record["levels"]:
        shapes: list[Shape] = []
        decomps: dict[str, tuple[DecompositionRow, ...]] = {}
        orders: dict[str, tuple[Point, ...]] = {}
        for srec in lv["shapes"]:
            offsets = [tuple(x) for x in srec["offsets"]]
            center = tuple(srec.get("center", [0] * g.dim))
            if center not in set(offsets):
                raise MalformedSpecError(
                    f"shape {srec['id']!r}: center is not one of its offsets"
                )
            minv = g.inv(center)
            shapes.append(
                Shape(srec["id"], FiniteSubset.make(g, [g.mul(x, minv) for x in offsets]))
            )
            decomps[srec["id"]] = tuple(
                DecompositionRow(
                    row["shape_id"],
                    tuple(g.mul(tuple(c), minv) for c in row["centers"]),
                )
                for row in srec["decomposition"]
            )
            orders[srec["id"]] = tuple(
                g.mul(tuple(c), minv) for c in srec["subtile_order"]
            )
        levels.append(LevelSpec(tuple(shapes), decomps, orders, p=lv.get("p")))
    return TilingSystemSpec(g, levels)


def spec_from_json(text: str) -> TilingSystemSpec:
    return spec_from_record(json.loads(text))
