"""The interval-coding extension over an odometric tiling order.

Steps n = 1..depth process order intervals of length p_n aligned so that
tile centers sit at range starts.  The n-floor block a point shows on range
i is coded injectively into p_n / 2^n bits and written into the first
still-undefined positions of range i+1; after step n every fully coded
range keeps exactly p_n / 2^n undefined cells.  Ranges clipped by the
window edge are skipped and logged, never partially written.

Code words are assigned canonically: blocks in census order get consecutive
binary counters.  The census object is shared between table construction
and encoding, which keeps the capacity check sound at window scale.
"""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlignmentViolationError,
    CodeOverflowError,
    DivisibilityViolationError,
    FloorsMismatchError,
    GroupMismatchError,
    NotOdometricError,
    NotStraightError,
    OutOfWindowError,
    PairEqualError,
    RegionTooSmallError,
    UnknownBlockError,
    WindowTooSmallError,
)
from .groups import FiniteSubset, Point
from .orders import OrderWindow
from .arrays import (
    ArrayPoint,
    SampleUniverse,
    point_universe,
    restrict,
    stack_floors,
)
from .tilings import TilingInstance, is_odometric, symbolic_encode
from .tiling_orders import STRAIGHT_SO_FAR, induced_order, straightness_status


@dataclass(frozen=True)
class IntervalPartition:
    """Ranges of length p tiling the order positions, anchored at range 0 ∋ 0."""

    step: int  # coding step n
    tiling_level: int
    p: int
    order: OrderWindow
    start0: int  # start position of range 0

    def start(self, i: int) -> int:
        return self.start0 + i * self.p

    def positions(self, i: int) -> range:
        return range(self.start(i), self.start(i) + self.p)

    def complete(self, i: int) -> bool:
        return self.start(i) >= -self.order.radius and (
            self.start(i) + self.p - 1 <= self.order.radius
        )

    def index_of(self, position: int) -> int:
        return (position - self.start0) // self.p

    def indices(self) -> range:
        """Indices of ranges fully inside the window."""
        lo = self.index_of(-self.order.radius + self.p - 1)
        hi = self.index_of(self.order.radius - self.p + 1)
        while not self.complete(lo):
            lo += 1
        while not self.complete(hi):
            hi -= 1
        return range(lo, hi + 1)

    def cells(self, i: int) -> tuple[Point, ...]:
        return tuple(self.order.at_position(q) for q in self.positions(i))


def partition_intervals(
    order: OrderWindow,
    instance: TilingInstance,
    tiling_level: int,
    step: int | None = None,
    p: int | None = None,
) -> IntervalPartition:
    """Partition aligned to the centers of the given tiling level.

    Requires an odometric spec (base present, congruences holding) and a
    straight-so-far instance; verifies that every visible center sits at a
    range start (all centers congruent mod p).
    """
    spec = instance.spec
    base = spec.base()
    if not is_odometric(spec, base):
        raise NotOdometricError("instance's spec violates the center congruences")
    status = straightness_status(instance, instance.top_level)
    if status.kind != STRAIGHT_SO_FAR:
        raise NotStraightError(
            f"instance is {status.kind} at depth {status.depth}; coder requires "
            "straight-so-far"
        )
    p = p if p is not None else base[tiling_level - 1]
    step = step if step is not None else tiling_level
    residues = set()
    for tile in instance.tiles[tiling_level]:
        pos = order.position_of(tile.center)
        if pos is not None:
            residues.add(pos % p)
    if not residues:
        raise AlignmentViolationError(
            f"no level-{tiling_level} centers visible in the order window"
        )
    if len(residues) > 1:
        raise AlignmentViolationError(
            f"level-{tiling_level} centers occupy several residues mod {p}: "
            f"{sorted(residues)}"
        )
    r = residues.pop()
    start0 = 0 if r == 0 else r - p
    return IntervalPartition(step, tiling_level, p, order, start0)


@dataclass
class CodeTable:
    floors: int
    length: int  # code word length L = p / 2^n
    domain: tuple[Point, ...]
    words: dict  # block bytes -> np bit array of length L
    blocks: tuple[bytes, ...]

    def word(self, key: bytes) -> np.ndarray:
        got = self.words.get(key)
        if got is None:
            raise UnknownBlockError(
                "block not present in the shared census (provenance mismatch)"
            )
        return got


def build_code_table(
    sample: SampleUniverse, n: int, cells, p: int
) -> CodeTable:
    """Injective census-order code from n-floor blocks on cells to L bits."""
    if p % (2 ** n) != 0:
        raise DivisibilityViolationError(f"2^{n} does not divide p = {p}")
    length = p // (2 ** n)
    census = sample.census(n, cells)
    if census.count > 2 ** length:
        raise CodeOverflowError(
            f"{census.count} blocks exceed capacity 2^{length}"
        )
    words = {}
    for i, key in enumerate(census.blocks):
        bits = np.array(
            [(i >> (length - 1 - b)) & 1 for b in range(length)], dtype=np.uint8
        )
        words[key] = bits
    return CodeTable(n, length, census.domain, words, census.blocks)


@dataclass
class StepRecord:
    step: int
    range_index: int
    status: str  # "coded" | "skipped-source-incomplete" | "skipped-target-incomplete"
    block_hash: str | None = None
    code_bits: str | None = None
    write_positions: tuple[int, ...] = ()

    def to_record(self) -> dict:
        return {
            "level": self.step,
            "range_index": self.range_index,
            "status": self.status,
            "block_hash": self.block_hash,
            "code_word": self.code_bits,
            "write_positions": list(self.write_positions),
        }


@dataclass
class CodedPoint:
    base: ArrayPoint
    order: OrderWindow
    partitions: list[IntervalPartition]
    row_bits: np.ndarray  # position space, index 0 -> position -N
    row_mask: np.ndarray  # 1 = undefined
    steps: list[StepRecord]
    fill: str | None
    mask_audit: list[dict]

    @property
    def pos_lo(self) -> int:
        return -self.order.radius

    def row_at(self, position: int) -> tuple[int, bool]:
        i = position - self.pos_lo
        return int(self.row_bits[i]), bool(self.row_mask[i])

    def row_point(self) -> ArrayPoint:
        """The coded row as a 1-floor point over the order image."""
        cells = self.order.points
        g = self.order.group
        perm = sorted(range(len(cells)), key=lambda i: g.sort_key(cells[i]))
        window = FiniteSubset(g, tuple(cells[i] for i in perm), _trusted=True)
        cols = np.array(perm, dtype=np.intp)
        bits = self.row_bits[cols].reshape(1, -1)
        mask = self.row_mask[cols].reshape(1, -1)
        return ArrayPoint(g, 1, window, bits, mask if mask.any() else None)

    def combined(self) -> ArrayPoint:
        """Coded row stacked as the new top floor above the base floors."""
        return stack_floors(self.row_point(), self.base)

    def undefined_count(self) -> int:
        return int(self.row_mask.sum())

    def to_record(self) -> dict:
        return {
            "base_floors": self.base.floors,
            "depth": len(self.partitions),
            "fill": self.fill,
            "partitions": [
                {"level": p.step, "tiling_level": p.tiling_level, "p": p.p,
                 "start0": p.start0}
                for p in self.partitions
            ],
            "steps": [s.to_record() for s in self.steps],
            "mask_audit": self.mask_audit,
            "row_bits": base64.b64encode(np.packbits(self.row_bits)).decode(),
            "row_mask": base64.b64encode(np.packbits(self.row_mask)).decode(),
        }


def _block_hash(key: bytes) -> str:
    return hashlib.sha256(key).hexdigest()[:16]


def encode_point(
    x: ArrayPoint,
    instance: TilingInstance,
    depth: int,
    universe: SampleUniverse,
    fill: str = "zeros",
    step_levels: list[int] | None = None,
):
    """Run the coding construction to the given depth.

    ``step_levels`` maps coding steps 1..depth to tiling levels (default the
    identity); the base value of that level is the step's p_n.  Fill is
    "zeros"/"ones" for the deterministic representative, or "enumerate" for
    the finite family of completions (returns a list; cap-guarded).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if x.floors < depth:
        raise FloorsMismatchError(f"point has {x.floors} floors, depth {depth} needed")
    if fill not in ("zeros", "ones", "enumerate"):
        raise ValueError(f"unknown fill policy {fill!r}")
    order = induced_order(instance, instance.top_level)
    for cell in order.points:
        if cell not in x.window:
            raise OutOfWindowError("point does not cover the order window image")
    levels = step_levels if step_levels is not None else list(range(1, depth + 1))
    if len(levels) != depth:
        raise ValueError("step_levels must list one tiling level per step")
    base = instance.spec.base()

    parts: list[IntervalPartition] = []
    prev_p = None
    prev_r = None
    for n, lev in enumerate(levels, start=1):
        part = partition_intervals(order, instance, lev, step=n)
        if prev_p is not None:
            if part.p % prev_p != 0 or part.p <= prev_p:
                raise DivisibilityViolationError(
                    f"step {n} length {part.p} does not extend {prev_p}"
                )
            if (part.start0 - prev_r) % prev_p != 0:
                raise AlignmentViolationError(
                    f"step {n} ranges are not unions of step {n-1} ranges"
                )
        prev_p, prev_r = part.p, part.start0
        parts.append(part)

    size = 2 * order.radius + 1
    row = np.zeros(size, dtype=np.uint8)
    undef = np.ones(size, dtype=np.uint8)
    records: list[StepRecord] = []
    audit: list[dict] = []
    tables: dict = {}

    for n, part in enumerate(parts, start=1):
        for i in part.indices():
            if not part.complete(i + 1):
                records.append(StepRecord(n, i, "skipped-target-incomplete"))
                continue
            cells = part.cells(i)
            key_domain = universe.normalize_domain(cells)
            table = tables.get((n, key_domain))
            if table is None:
                table = build_code_table(universe, n, cells, part.p)
                tables[(n, key_domain)] = table
            block = universe.block_of(x, n, cells)
            word = table.word(block)
            lo = part.start(i + 1) + order.radius
            targets = [
                q for q in range(lo, lo + part.p) if undef[q]
            ][: table.length]
            if len(targets) != table.length:
                raise AlignmentViolationError(
                    f"range {i+1} at step {n} lacks undefined positions"
                )
            idx = np.array(targets, dtype=np.intp)
            row[idx] = word
            undef[idx] = 0
            records.append(
                StepRecord(
                    n,
                    i,
                    "coded",
                    block_hash=_block_hash(block),
                    code_bits="".join(map(str, word.tolist())),
                    write_positions=tuple(int(t) - order.radius for t in targets),
                )
            )
        # Exactness audit over ranges whose own and preceding ranges are complete.
        expected = part.p // (2 ** n)
        rows = []
        exact = True
        for i in part.indices():
            if not part.complete(i - 1):
                continue
            lo = part.start(i) + order.radius
            got = int(undef[lo : lo + part.p].sum())
            rows.append({"range_index": i, "undefined": got})
            exact = exact and got == expected
        audit.append(
            {"level": n, "expected": expected, "ranges": rows, "exact": exact}
        )

    def finish(bits: np.ndarray, mask: np.ndarray, policy: str | None) -> CodedPoint:
        return CodedPoint(
            base=x,
            order=order,
            partitions=parts,
            row_bits=bits,
            row_mask=mask,
            steps=records,
            fill=policy,
            mask_audit=audit,
        )

    if fill == "enumerate":
        free = np.flatnonzero(undef)
        if len(free) > 12:
            raise ValueError(
                f"enumerate fill would produce 2^{len(free)} variants; "
                "use a smaller window"
            )
        out = []
        for assignment in range(2 ** len(free)):
            bits = row.copy()
            for b, q in enumerate(free):
                bits[q] = (assignment >> b) & 1
            out.append(finish(bits, np.zeros_like(undef), "enumerate"))
        return out

    bits = row.copy()
    bits[undef.astype(bool)] = 0 if fill == "zeros" else 1
    return finish(bits, np.zeros_like(undef), fill)


@dataclass
class SeparationRow:
    level: int
    range_index: int
    witness_position: int
    witness_cell: Point

    def to_record(self) -> dict:
        return {
            "level": self.level,
            "range_index": self.range_index,
            "witness_position": self.witness_position,
            "witness_cell": list(self.witness_cell),
        }


@dataclass
class SeparationReport:
    ok: bool
    first_floor: int
    first_cell: Point
    first_position: int
    rows: list[SeparationRow]
    failures: list[int] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "ok": self.ok,
            "first_floor": self.first_floor,
            "first_cell": list(self.first_cell),
            "first_position": self.first_position,
            "witnesses": [r.to_record() for r in self.rows],
            "failed_levels": self.failures,
        }


def verify_separation(
    x: ArrayPoint,
    x2: ArrayPoint,
    y: CodedPoint,
    y2: CodedPoint,
    depth: int,
) -> SeparationReport:
    """Confirm the coded rows differ in the successor range of every level
    that fully saw the base difference.

    Witnesses are taken inside the step-n write region, which is identical
    for both points (write positions are data-independent) and disjoint
    across steps, so witnesses at different levels are distinct.
    """
    if x.window.elements != x2.window.elements:
        raise WindowTooSmallError("points must share a window")
    diff = None
    for f in range(min(x.floors, x2.floors)):
        cols = np.flatnonzero(x.bits[f] != x2.bits[f])
        if len(cols):
            cands = [x.window.elements[c] for c in cols]
            g = x.group
            cands.sort(key=g.sort_key)
            diff = (f + 1, cands[0])
            break
    if diff is None:
        raise PairEqualError("points are equal on their window")
    n0, g0 = diff
    order = y.order
    pos0 = order.position_of(g0)
    if pos0 is None:
        raise WindowTooSmallError("first difference lies outside the order window")

    write_map = {
        (s.step, s.range_index): s.write_positions
        for s in y.steps
        if s.status == "coded"
    }
    write_map2 = {
        (s.step, s.range_index): s.write_positions
        for s in y2.steps
        if s.status == "coded"
    }
    rows: list[SeparationRow] = []
    failures: list[int] = []
    examined = 0
    for n in range(max(n0, 1), depth + 1):
        part = y.partitions[n - 1]
        i0 = part.index_of(pos0)
        key = (n, i0)
        if key not in write_map:
            continue
        if write_map.get(key) != write_map2.get(key):
            raise AlignmentViolationError("write regions diverged between the pair")
        examined += 1
        witness = None
        for q in write_map[key]:
            b1, _ = y.row_at(q)
            b2, _ = y2.row_at(q)
            if b1 != b2:
                witness = q
                break
        if witness is None:
            failures.append(n)
        else:
            rows.append(
                SeparationRow(n, i0 + 1, witness, order.at_position(witness))
            )
    if examined == 0:
        raise WindowTooSmallError(
            "no level has both the difference range and its successor complete"
        )
    return SeparationReport(
        ok=not failures,
        first_floor=n0,
        first_cell=g0,
        first_position=pos0,
        rows=rows,
        failures=failures,
    )


def tower_compose(
    x: ArrayPoint,
    instance: TilingInstance,
    depths: list[int],
    universe: SampleUniverse,
    fill: str = "zeros",
) -> list[CodedPoint]:
    """Finite tower: each stage feeds its coded row back as a new top floor."""
    out: list[CodedPoint] = []
    current = x
    current_universe = universe
    for depth in depths:
        coded = encode_point(current, instance, depth, current_universe, fill=fill)
        if isinstance(coded, list):
            raise ValueError("tower stages need a deterministic fill")
        out.append(coded)
        current = coded.combined()
        current_universe = point_universe(current, kind="tower-stage")
    return out


@dataclass
class ProductCoder:
    """Coder over the product of a sample point with a tiling's symbolic floors."""

    sample: SampleUniverse
    instance: TilingInstance
    point: ArrayPoint  # data floors above tiling indicator floors
    universe: SampleUniverse
    order: OrderWindow
    data_floors: int

    def encode(self, depth: int, fill: str = "zeros", step_levels=None):
        return encode_point(
            self.point, self.instance, depth, self.universe, fill, step_levels
        )

    def encode_variant(
        self, point: ArrayPoint, depth: int, fill: str = "zeros", step_levels=None
    ):
        """Encode a perturbed companion sharing this coder's tables."""
        if point.window.elements != self.point.window.elements:
            raise WindowTooSmallError("variant must share the product window")
        self.universe.extra_points.append(point)
        self.universe.clear_census_cache()
        return encode_point(
            point, self.instance, depth, self.universe, fill, step_levels
        )

    def capacity_rows(self, depth: int, step_levels=None) -> list[dict]:
        levels = list(step_levels) if step_levels else list(range(1, depth + 1))
        rows = []
        for n, lev in enumerate(levels, start=1):
            part = partition_intervals(self.order, self.instance, lev, step=n)
            cells = part.cells(next(iter(part.indices())))
            length = part.p // (2 ** n)
            census = self.universe.census(n, cells)
            rows.append(
                {
                    "n": n,
                    "p": part.p,
                    "count": census.count,
                    "bound": 2 ** length,
                    "ok": census.count <= 2 ** length,
                }
            )
        return rows


def product_point(sample: SampleUniverse, instance: TilingInstance) -> ArrayPoint:
    """Data floors of the sample over the instance window, tiling floors below."""
    if sample.group is not instance.group:
        raise GroupMismatchError("sample and instance live over different groups")
    window = instance.window
    for cell in window:
        if cell not in sample.point.window:
            raise RegionTooSmallError("sample region does not cover the instance window")
    data = restrict(sample.point, window)
    floors = [data.bits]
    for level in range(1, instance.top_level + 1):
        sym = symbolic_encode(instance, level, window)
        for sid in sorted({s.id for s in instance.spec.levels[level].shapes}):
            row = np.array(
                [1 if sym.labels[c] == sid else 0 for c in window.elements],
                dtype=np.uint8,
            )
            floors.append(row.reshape(1, -1))
    bits = np.concatenate(floors)
    return ArrayPoint(instance.group, bits.shape[0], window, bits)


def product_pipeline(sample: SampleUniverse, instance: TilingInstance) -> ProductCoder:
    """Assemble the product system and configure the coder over it."""
    point = product_point(sample, instance)
    universe = point_universe(point, kind=f"product:{sample.kind}", seed=sample.seed)
    order = induced_order(instance, instance.top_level)
    return ProductCoder(
        sample=sample,
        instance=instance,
        point=point,
        universe=universe,
        order=order,
        data_floors=sample.point.floors,
    )
