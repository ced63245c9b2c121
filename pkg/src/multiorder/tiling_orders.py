"""Orders induced by ordered tiling systems, and interval-level Folner scans.

The recursive subtile-order flattening of the central tile at a depth gives
a finite window of the order the tiling element induces on the group.  The
window is anchored at the unit and symmetric; its radius is the largest
derivable from that tile (never extrapolated).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OutOfRangeError, WindowNotDominatedError
from .groups import FiniteSubset, check_invariance, to_fraction
from .orders import OrderWindow
from .tilings import Tile, TilingInstance, TilingSystemSpec

STRAIGHT_SO_FAR = "straight-so-far"
PLUS_N_TAIL = "plus-n-tail"
MINUS_N_TAIL = "minus-n-tail"
NOT_GENERAL_POSITION = "not-general-position"


def induced_order(
    instance: TilingInstance, depth: int, window: FiniteSubset | None = None
) -> OrderWindow:
    """Order window from the depth-k central tile, anchored at the unit.

    The returned radius is the largest symmetric range the tile determines.
    When ``window`` is given it must be contained in the central tile
    (WindowNotDominated otherwise) so that all comparisons inside it resolve.
    """
    tile = instance.central_tile(depth)
    cells = instance.spec.tile_cells(tile)
    if window is not None and not (set(window) <= set(cells)):
        raise WindowNotDominatedError(
            f"central tile at depth {depth} does not contain the window"
        )
    q = cells.index(instance.group.identity)
    radius = min(q, len(cells) - 1 - q)
    return OrderWindow(instance.group, tuple(cells[q - radius : q + radius + 1]))


@dataclass(frozen=True)
class StraightnessStatus:
    kind: str
    depth: int
    from_level: int | None = None
    central_indices: tuple[int, ...] = ()


def straightness_status(instance: TilingInstance, depth: int) -> StraightnessStatus:
    """Tail classification of the central-tile chain at the examined depth.

    A plus/minus tail is reported when the central tile is first (resp.
    last) among its parent's subtiles on a suffix of the examined levels;
    nothing is extrapolated past the data.
    """
    if depth > instance.top_level:
        raise OutOfRangeError("depth exceeds the instance's top level")
    spec = instance.spec
    top_cells = set(spec.tile_cells(instance.central_tile(instance.top_level)))
    if not (instance.window.as_set <= top_cells):
        return StraightnessStatus(NOT_GENERAL_POSITION, depth)

    indices: list[int] = []
    counts: list[int] = []
    for k in range(1, depth + 1):
        parent = instance.central_tile(k)
        child = instance.central_tile(k - 1)
        from .tilings import decompose

        subs = decompose(spec, k, parent)
        indices.append(subs.index(child) + 1)
        counts.append(len(subs))

    def suffix_from(predicate) -> int | None:
        level = None
        for k in range(depth, 0, -1):
            if predicate(k - 1):
                level = k
            else:
                break
        return level

    plus_from = suffix_from(lambda i: indices[i] == 1)
    minus_from = suffix_from(lambda i: indices[i] == counts[i])
    if plus_from is not None and counts[depth - 1] > 1:
        return StraightnessStatus(PLUS_N_TAIL, depth, plus_from, tuple(indices))
    if minus_from is not None and counts[depth - 1] > 1:
        return StraightnessStatus(MINUS_N_TAIL, depth, minus_from, tuple(indices))
    return StraightnessStatus(STRAIGHT_SO_FAR, depth, None, tuple(indices))


def order_interval_elements(
    spec: TilingSystemSpec, tile: Tile, i: int, j: int
) -> FiniteSubset:
    """Elements i..j (1-based, inclusive) of the tile's induced enumeration."""
    cells = spec.tile_cells(tile)
    if not (1 <= i <= j <= len(cells)):
        raise OutOfRangeError(f"bounds [{i}, {j}] invalid for a tile of size {len(cells)}")
    return FiniteSubset.make(spec.group, cells[i - 1 : j], ordered=True)


@dataclass
class ScanBudget:
    max_level: int = 5
    dense_length_cap: int = 128
    sparse_stride: int = 32
    samples_per_length: int = 16


@dataclass
class ScanReport:
    K_offsets: tuple
    eps: Fraction
    l0: int | None
    buckets: list[dict]
    envelope: dict

    def to_record(self) -> dict:
        return {
            "K": [list(p) for p in self.K_offsets],
            "eps": str(self.eps),
            "l0": self.l0,
            "buckets": self.buckets,
            "envelope": self.envelope,
        }


def interval_invariance_scan(
    spec: TilingSystemSpec, K: FiniteSubset, eps, budget: ScanBudget | None = None
) -> ScanReport:
    """Empirical smallest length l0 past which sampled order intervals are
    (K, eps)-invariant, with a worst-ratio table per sampled length.

    Invariance of an order interval is translation-invariant, so scanning
    intervals of shape enumerations covers all tiles.  The report records
    the sampling envelope; l0 is an observation, not a proof.
    """
    budget = budget or ScanBudget()
    eps = to_fraction(eps)
    g = spec.group
    max_level = min(budget.max_level, spec.top_level)
    max_size = max(
        s.size for k in range(1, max_level + 1) for s in spec.levels[k].shapes
    )
    lengths = sorted(
        set(range(1, min(budget.dense_length_cap, max_size) + 1))
        | set(range(budget.sparse_stride, max_size + 1, budget.sparse_stride))
        | {max_size}
    )
    worst: dict[int, Fraction] = {}
    counts: dict[int, int] = {}
    for k in range(1, max_level + 1):
        for s in spec.levels[k].shapes:
            en = spec.enum(k, s.id)
            size = len(en)
            for length in lengths:
                if length > size:
                    continue
                nstarts = size - length + 1
                take = min(nstarts, budget.samples_per_length)
                stride = max(1, nstarts // take)
                for start in range(0, nstarts, stride):
                    cells = FiniteSubset.make(g, en[start : start + length], ordered=True)
                    ratio, _ = check_invariance(K, eps, cells)
                    if ratio > worst.get(length, Fraction(-1)):
                        worst[length] = ratio
                    counts[length] = counts.get(length, 0) + 1
    sampled = sorted(worst)
    l0: int | None = None
    for length in reversed(sampled):
        if worst[length] < eps:
            l0 = length
        else:
            break
    buckets = [
        {"length": length, "worst_ratio": str(worst[length]), "count": counts[length]}
        for length in sampled
    ]
    envelope = {
        "max_level": max_level,
        "lengths_sampled": len(sampled),
        "samples_per_length": budget.samples_per_length,
    }
    return ScanReport(tuple(K.elements), eps, l0, buckets, envelope)
