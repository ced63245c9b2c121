"""Binary array points, shifts, block censuses and sample generators.

An array point is a {0,1}-array indexed by (floor, cell) over a finite
window of a group, optionally with a mask of undefined cells.  The shift
convention is (h(x))_{n,g} = x_{n,gh}, so shift(shift(x,h),h') equals
shift(x, h'h) on the common window.

Block censuses enumerate the distinct patterns a sample realizes on all
in-region translates of a domain; counts are empirical lower bounds of the
true block collection and are shared (same universe object) with any coder
built on top, which keeps capacity checks sound.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    BadRegionError,
    FloorsMismatchError,
    OutOfWindowError,
    RegionTooSmallError,
)
from .groups import FiniteSubset, Group, Point, group_by_name
from .orders import OrderWindow
from .seeding import derive_seed


@dataclass(frozen=True)
class ArrayPoint:
    group: Group
    floors: int
    window: FiniteSubset  # canonical order
    bits: np.ndarray  # uint8, shape (floors, |window|)
    mask: np.ndarray | None = None  # uint8, 1 = undefined

    def __post_init__(self):
        if self.bits.shape != (self.floors, len(self.window)):
            raise ValueError("bits shape does not match floors x window")
        if self.mask is not None and self.mask.shape != self.bits.shape:
            raise ValueError("mask shape does not match bits")

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.window.elements)}

    def bit(self, floor: int, cell: Point) -> int:
        """1-based floor access."""
        return int(self.bits[floor - 1, self.index[cell]])

    def defined(self, floor: int, cell: Point) -> bool:
        if self.mask is None:
            return True
        return not self.mask[floor - 1, self.index[cell]]

    def to_record(self) -> dict:
        rec = {
            "group": self.group.name,
            "floors": self.floors,
            "window": [list(p) for p in self.window.elements],
            "bits": base64.b64encode(np.packbits(self.bits)).decode(),
        }
        rec["mask"] = (
            base64.b64encode(np.packbits(self.mask)).decode()
            if self.mask is not None
            else None
        )
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "ArrayPoint":
        g = group_by_name(rec["group"])
        window = FiniteSubset.make(g, [tuple(p) for p in rec["window"]], ordered=True)
        n, w = rec["floors"], len(window)

        def unpack(txt):
            raw = np.frombuffer(base64.b64decode(txt), dtype=np.uint8)
            return np.unpackbits(raw)[: n * w].reshape(n, w).copy()

        mask = unpack(rec["mask"]) if rec.get("mask") else None
        return cls(g, n, window, unpack(rec["bits"]), mask)


def make_point(group: Group, floors: int, cells, bit_fn) -> ArrayPoint:
    """Build a point from a callable (floor, cell) -> 0/1 (floor is 1-based)."""
    window = cells if isinstance(cells, FiniteSubset) else FiniteSubset.make(group, cells)
    bits = np.zeros((floors, len(window)), dtype=np.uint8)
    for j, cell in enumerate(window.elements):
        for f in range(1, floors + 1):
            bits[f - 1, j] = bit_fn(f, cell) & 1
    return ArrayPoint(group, floors, window, bits)


def shift(x: ArrayPoint, h: Point) -> ArrayPoint:
    """(h(x))_{n,g} = x_{n,gh}; the window moves to W h^{-1}."""
    g = x.group
    hinv = g.inv(h)
    moved = [g.mul(w, hinv) for w in x.window.elements]
    order = sorted(range(len(moved)), key=lambda i: g.sort_key(moved[i]))
    elements = tuple(moved[i] for i in order)
    cols = np.array(order, dtype=np.intp)
    bits = x.bits[:, cols]
    mask = x.mask[:, cols] if x.mask is not None else None
    return ArrayPoint(g, x.floors, FiniteSubset(g, elements, _trusted=True), bits, mask)


def restrict(x: ArrayPoint, cells) -> ArrayPoint:
    """Restriction to a sub-window (canonical order)."""
    window = cells if isinstance(cells, FiniteSubset) else FiniteSubset.make(x.group, cells)
    cols = np.array([x.index[c] for c in window.elements], dtype=np.intp)
    mask = x.mask[:, cols] if x.mask is not None else None
    return ArrayPoint(x.group, x.floors, window, x.bits[:, cols], mask)


def stack_floors(top: ArrayPoint, bottom: ArrayPoint) -> ArrayPoint:
    """New point with top's floors above bottom's, on the common window."""
    if top.group is not bottom.group:
        raise FloorsMismatchError("points live over different groups")
    common = [c for c in top.window.elements if c in bottom.window]
    a = restrict(top, common)
    b = restrict(bottom, common)
    bits = np.concatenate([a.bits, b.bits])
    masks = []
    for part in (a, b):
        masks.append(
            part.mask if part.mask is not None else np.zeros_like(part.bits)
        )
    mask = np.concatenate(masks)
    if not mask.any():
        mask = None
    return ArrayPoint(a.group, a.floors + b.floors, a.window, bits, mask)


def successor_iterate(x: ArrayPoint, order: OrderWindow, k: int) -> ArrayPoint:
    """k-th successor-map image: the shift by the order's k-th element."""
    g = order.at_position(k)
    if g is None:
        raise OutOfWindowError(f"position {k} exceeds the order window radius")
    return shift(x, g)


def successor_step(x: ArrayPoint, order: OrderWindow, direction: int = 1):
    """One successor (or predecessor) step, re-deriving the order window."""
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    g = order.at_position(direction)
    if g is None:
        raise OutOfWindowError("order window too small to step")
    return shift(x, g), order.act(g)


# -- regions ------------------------------------------------------------------


def region_subset(group: Group, desc) -> FiniteSubset:
    """Region descriptor -> FiniteSubset; balls and boxes are supported."""
    if isinstance(desc, FiniteSubset):
        return desc
    if not isinstance(desc, dict):
        raise BadRegionError(f"bad region descriptor {desc!r}")
    kind = desc.get("kind")
    if kind == "ball":
        return group.ball(int(desc["radius"]))
    if kind == "interval":
        if group.dim != 1:
            raise BadRegionError("interval regions require the group Z")
        lo, hi = int(desc["lo"]), int(desc["hi"])
        if hi < lo:
            raise BadRegionError("empty interval")
        return FiniteSubset.make(group, [(i,) for i in range(lo, hi + 1)])
    if kind == "rect":
        if group.dim != 2:
            raise BadRegionError("rect regions require the group Z2")
        lo, hi = int(desc["lo"]), int(desc["hi"])
        if hi < lo:
            raise BadRegionError("empty rectangle")
        return FiniteSubset.make(
            group, [(i, j) for i in range(lo, hi + 1) for j in range(lo, hi + 1)]
        )
    raise BadRegionError(f"unknown region kind {kind!r}")


# -- generators ---------------------------------------------------------------

FULL_SHIFT = "full-shift"
THUE_MORSE = "thue-morse"
Z2_XOR = "z2-xor"
CONSTANT_ZERO = "constant-zero"


def _tm_prefix(n: int) -> np.ndarray:
    arr = np.array([0], dtype=np.uint8)
    while len(arr) < n:
        arr = np.concatenate([arr, 1 - arr])
    return arr[:n]


_TM_CACHE = {"prefix": _tm_prefix(1 << 16)}


def thue_morse_bit(i: int) -> int:
    """Two-sided substitution fixed point; mirror convention a(-n-1) = a(n)."""
    j = i if i >= 0 else -i - 1
    pre = _TM_CACHE["prefix"]
    while j >= len(pre):
        pre = _tm_prefix(2 * len(pre))
        _TM_CACHE["prefix"] = pre
    return int(pre[j])


def de_bruijn_binary(order: int) -> list[int]:
    """Linear binary sequence containing every length-``order`` word once.

    Greedy prefer-one construction plus a wrap tail, verified on build.
    """
    m = order
    seq = [0] * m
    seen = {tuple(seq)}
    total = 1 << m
    while len(seen) < total:
        tail = tuple(seq[-(m - 1):]) if m > 1 else ()
        for b in (1, 0):
            w = tail + (b,)
            if w not in seen:
                seq.append(b)
                seen.add(w)
                break
        else:
            raise AssertionError("greedy de Bruijn construction hit a dead end")
    seq.extend(seq[: m - 1])
    windows = {tuple(seq[i : i + m]) for i in range(len(seq) - m + 1)}
    if len(windows) != total:
        raise AssertionError("de Bruijn verification failed")
    return seq


@dataclass(frozen=True)
class Block:
    floors: int
    domain: tuple[Point, ...]
    bits: bytes  # floor-major, domain order

    def key(self) -> bytes:
        return self.bits


@dataclass(frozen=True)
class CensusResult:
    floors: int
    domain: tuple[Point, ...]  # normalized: first element is the unit
    count: int
    blocks: tuple[bytes, ...]  # lexicographically sorted bit rows
    translate_count: int


@dataclass
class SampleUniverse:
    """Deterministic sample point plus its block-membership oracle.

    ``extra_points`` extends the observed universe (e.g. with a perturbed
    companion that must share the code tables); the census is the union of
    the blocks each point realizes.
    """

    kind: str
    seed: int
    point: ArrayPoint
    params: dict = field(default_factory=dict)
    extra_points: list = field(default_factory=list)
    _census_cache: dict = field(default_factory=dict, repr=False)

    @property
    def group(self) -> Group:
        return self.point.group

    def clear_census_cache(self) -> None:
        self._census_cache.clear()

    def normalize_domain(self, cells) -> tuple[Point, ...]:
        cells = tuple(tuple(c) for c in cells)
        g = self.group
        inv0 = g.inv(cells[0])
        return tuple(g.mul(c, inv0) for c in cells)

    @staticmethod
    def _scan(point: ArrayPoint, n: int, norm) -> tuple[np.ndarray, int]:
        g = point.group
        wset = point.window.as_set
        idx = point.index
        tail = norm[1:]
        valid = [
            h
            for h in point.window.elements
            if all(g.mul(f, h) in wset for f in tail)
        ]
        if not valid:
            return np.zeros((0, n * len(norm)), dtype=np.uint8), 0
        cols = np.empty((len(valid), len(norm)), dtype=np.intp)
        for t, h in enumerate(valid):
            cols[t, 0] = idx[h]
            for j, f in enumerate(tail, start=1):
                cols[t, j] = idx[g.mul(f, h)]
        rows = point.bits[:n][:, cols]  # (n, T, F)
        rows = np.ascontiguousarray(np.transpose(rows, (1, 0, 2))).reshape(
            len(valid), n * len(norm)
        )
        if point.mask is not None:
            bad = point.mask[:n][:, cols].any(axis=(0, 2))
            rows = rows[~bad]
        return rows, len(valid)

    def census(self, n: int, cells) -> CensusResult:
        """Distinct blocks with n floors on all in-region translates of cells."""
        if n > self.point.floors:
            raise FloorsMismatchError(
                f"sample has {self.point.floors} floors, census needs {n}"
            )
        norm = self.normalize_domain(cells)
        key = (n, norm)
        got = self._census_cache.get(key)
        if got is not None:
            return got
        parts = []
        translates = 0
        for pt in [self.point] + list(self.extra_points):
            rows, count = self._scan(pt, n, norm)
            parts.append(rows)
            translates += count
        if translates == 0:
            raise RegionTooSmallError("region cannot cover the domain")
        rows = np.concatenate(parts) if len(parts) > 1 else parts[0]
        if rows.shape[0] == 0:
            raise RegionTooSmallError("all translates touch undefined cells")
        uniq = np.unique(rows, axis=0)
        blocks = tuple(bytes(r) for r in uniq)
        result = CensusResult(n, norm, len(blocks), blocks, translates)
        self._census_cache[key] = result
        return result

    def block_of(self, x: ArrayPoint, n: int, cells) -> bytes:
        """Bit row of x on the given ordered cells (floor-major), as a key."""
        cols = [x.index[c] for c in cells]
        return bytes(x.bits[:n][:, cols].reshape(-1))


def point_universe(point: ArrayPoint, kind: str = "point", seed: int = 0) -> SampleUniverse:
    """Wrap an existing point (e.g. a product point) as its own universe."""
    return SampleUniverse(kind, seed, point)


def generate_sample(
    kind: str,
    seed: int,
    region,
    floors: int = 1,
    complete_up_to: int = 8,
    group: Group | None = None,
) -> SampleUniverse:
    """Deterministic sample generators.

    full-shift (Z): seeded random bits with a planted linear de Bruijn region
    guaranteeing every pattern on domains of span <= complete_up_to.
    thue-morse (Z): substitution fixed point, mirror-extended; floor i is the
    base sequence advanced by i-1.
    z2-xor (Z2): x(i,j) = a(i+floor-1) xor b(j) with a = b = thue-morse.
    constant-zero: all cells 0 over any region.
    """
    from .groups import Z, Z2

    if kind == CONSTANT_ZERO:
        g = group or Z
        window = region_subset(g, region)
        bits = np.zeros((floors, len(window)), dtype=np.uint8)
        point = ArrayPoint(g, floors, window, bits)
        return SampleUniverse(kind, seed, point, {"floors": floors})

    if kind == THUE_MORSE:
        window = region_subset(Z, region)
        point = make_point(
            Z, floors, window, lambda f, c: thue_morse_bit(c[0] + f - 1)
        )
        return SampleUniverse(kind, seed, point, {"floors": floors})

    if kind == Z2_XOR:
        window = region_subset(Z2, region)
        point = make_point(
            Z2,
            floors,
            window,
            lambda f, c: thue_morse_bit(c[0] + f - 1) ^ thue_morse_bit(c[1]),
        )
        return SampleUniverse(kind, seed, point, {"floors": floors})

    if kind == FULL_SHIFT:
        window = region_subset(Z, region)
        if window.group.dim != 1:
            raise BadRegionError("full-shift samples are generated over Z")
        cells = window.elements
        coords = np.array([c[0] for c in cells])
        lo = int(coords.min())
        bits = np.zeros((floors, len(cells)), dtype=np.uint8)
        for f in range(floors):
            rng = np.random.default_rng(derive_seed(seed, f"full-shift.floor{f+1}"))
            bits[f] = rng.integers(0, 2, size=len(cells), dtype=np.uint8)
        plant = de_bruijn_binary(complete_up_to)
        if len(plant) > len(cells):
            raise RegionTooSmallError(
                f"region too small to plant a de Bruijn({complete_up_to}) segment"
            )
        pos_of = {c[0]: i for i, c in enumerate(cells)}
        for off, b in enumerate(plant):
            bits[0, pos_of[lo + off]] = b
        point = ArrayPoint(Z, floors, window, bits)
        return SampleUniverse(
            kind, seed, point, {"floors": floors, "complete_up_to": complete_up_to}
        )

    raise BadRegionError(f"unknown sample kind {kind!r}")


# -- entropy-style bound checks ------------------------------------------------


@dataclass
class BoundCheckRow:
    floors: int
    length: int
    count: int
    bound: int
    passed: bool

    def to_record(self) -> dict:
        return {
            "n": self.floors,
            "length": self.length,
            "count": self.count,
            "bound": self.bound,
            "margin": self.bound - self.count,
            "pass": self.passed,
        }


@dataclass
class BoundReport:
    rows: list[BoundCheckRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_record(self) -> dict:
        return {"pass": self.passed, "rows": [r.to_record() for r in self.rows]}


def entropy_bound_check(sample: SampleUniverse, n: int, intervals) -> BoundReport:
    """Check #blocks(n floors, I) < 2^(p / 2^n) for each (cells, p) interval."""
    rows = []
    for cells, p in intervals:
        result = sample.census(n, cells)
        exponent = p // (2 ** n)
        bound = 2 ** exponent
        rows.append(BoundCheckRow(n, p, result.count, bound, result.count < bound))
    return BoundReport(rows)
