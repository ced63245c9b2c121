"""Array-point metric, asymptotic-pair detection, tail pairs, distality.

The metric is the first-disagreement-radius dyadic metric: d = 2^-r where r
is the first radius at which the points fail to be both defined and equal
on floors [1, min(n, r+1)] x ball(r).  Comparisons never extend past the
common window; when nothing fails up to the window edge the distance
collapses to the edge value, and it is exactly 0 only when the points agree
on the full common window and that window exhausts both.

``detect`` evaluates the successor-orbit distances d_k at steps k0..horizon.
Each step compares the shifted points on the forward image of the stepped
order (cells at original order positions >= k): divergence that has been
left strictly behind the anchor no longer contributes, so a pair agreeing
at all order positions >= k0 reaches distance exactly 0 from k0 on.  All
verdicts are horizon-qualified; nothing is claimed about the infinite
limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    FloorsMismatchError,
    OutOfWindowError,
    PairNotDistinctError,
)
from .groups import Point
from .orders import OrderWindow
from .arrays import ArrayPoint, shift

AGREEING_TAIL = "agreeing-tail"
SEPARATED_BEYOND = "separated-beyond"
CONVERGENT_TO_HORIZON = "convergent-to-horizon"
UNDECIDED = "undecided"
ORDERS_DIFFER = "orders-differ"


def array_distance(x: ArrayPoint, y: ArrayPoint) -> Fraction:
    """Dyadic distance of two points around the anchor cell."""
    if x.group is not y.group:
        raise FloorsMismatchError("points live over different groups")
    if x.floors != y.floors:
        raise FloorsMismatchError(f"floor counts differ: {x.floors} vs {y.floors}")
    g = x.group
    common = [c for c in x.window.elements if c in y.window]
    cset = set(common)
    if g.identity not in cset:
        raise OutOfWindowError("windows do not overlap on the anchor cell")

    r0 = None
    for cell in common:
        ix, iy = x.index[cell], y.index[cell]
        bad_floor = None
        for f in range(x.floors):
            dx = x.mask is None or not x.mask[f, ix]
            dy = y.mask is None or not y.mask[f, iy]
            if not (dx and dy) or x.bits[f, ix] != y.bits[f, iy]:
                bad_floor = f + 1
                break
        if bad_floor is not None:
            r = max(g.norm(cell), bad_floor - 1)
            if r0 is None or r < r0:
                r0 = r

    r_cap = 0
    while r0 is None or r_cap + 1 < r0:
        nxt = g.ball(r_cap + 1)
        if len(nxt) > len(cset) or not (nxt.as_set <= cset):
            break
        r_cap += 1

    if r0 is None:
        if len(common) == len(x.window) == len(y.window):
            return Fraction(0)
        return Fraction(1, 2 ** (r_cap + 1))
    return Fraction(1, 2 ** min(r0, r_cap + 1))


@dataclass(frozen=True)
class Verdict:
    kind: str
    k0: int
    horizon: int
    from_k: int | None = None
    last_exceedance: int | None = None
    exceedance_count: int = 0
    final_exponent: int | None = None  # d_horizon = 2^-e; None means 0
    witness_positions: tuple[int, ...] = ()
    reason: str | None = None

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "k_range": [self.k0, self.horizon],
            "from_k": self.from_k,
            "last_exceedance": self.last_exceedance,
            "exceedance_count": self.exceedance_count,
            "final_exponent": self.final_exponent,
            "witness_positions": list(self.witness_positions),
            "reason": self.reason,
        }


def _divergence_sites(x: ArrayPoint, y: ArrayPoint, order: OrderWindow):
    """Cells of the order image where the pair fails to be defined-and-equal.

    Returns (positions, min_floors, cells) restricted to positions the order
    window knows about.  Cells present in only one window count as floor-1
    failures; cells in neither are outside every comparison.
    """
    positions: list[int] = []
    floors: list[int] = []
    cells: list[Point] = []
    n = min(x.floors, y.floors)
    for p in range(-order.radius, order.radius + 1):
        cell = order.at_position(p)
        inx, iny = cell in x.window, cell in y.window
        if not inx and not iny:
            continue
        if inx != iny:
            positions.append(p), floors.append(1), cells.append(cell)
            continue
        ix, iy = x.index[cell], y.index[cell]
        bad = None
        for f in range(n):
            dx = x.mask is None or not x.mask[f, ix]
            dy = y.mask is None or not y.mask[f, iy]
            if not (dx and dy) or x.bits[f, ix] != y.bits[f, iy]:
                bad = f + 1
                break
        if bad is not None:
            positions.append(p), floors.append(bad), cells.append(cell)
    return positions, floors, cells


def _step_exponents(
    order: OrderWindow,
    positions: list[int],
    floors: list[int],
    cells: list[Point],
    k0: int,
    horizon: int,
) -> list[int | None]:
    """Exponent e_k with d_k = 2^-e_k (None for exact 0), per step.

    Step k compares on cells at original positions [k, N]; the examinable
    radius is grown while the shifted ball stays inside that forward set.
    """
    g = order.group
    pos_arr = np.array(positions, dtype=np.int64)
    floor_arr = np.array(floors, dtype=np.int64)
    coord_arr = np.array(cells, dtype=np.int64) if cells else np.zeros((0, g.dim))
    pos_of = {}
    for p in range(-order.radius, order.radius + 1):
        pos_of[order.at_position(p)] = p
    max_pos = int(pos_arr.max()) if len(pos_arr) else None

    out: list[int | None] = []
    for k in range(k0, horizon + 1):
        if max_pos is None or k > max_pos:
            out.append(None)
            continue
        visible = pos_arr >= k
        if not visible.any():
            out.append(None)
            continue
        gk = order.at_position(k)
        if g.dim <= 2:
            diff = coord_arr[visible] - np.array(gk, dtype=np.int64)
            norms = np.abs(diff).max(axis=1)
        else:
            ginv = g.inv(gk)
            norms = np.array(
                [g.norm(g.mul(tuple(c), ginv)) for c in coord_arr[visible]]
            )
        radii = np.maximum(norms, floor_arr[visible] - 1)
        r0 = int(radii.min())
        r_cap = 0
        while r_cap + 1 < r0:
            ball = g.ball(r_cap + 1)
            ok = all(
                pos_of.get(g.mul(b, gk), -(10 ** 9)) >= k for b in ball
            )
            if not ok:
                break
            r_cap += 1
        out.append(min(r0, r_cap + 1))
    return out


def detect(
    x: ArrayPoint,
    y: ArrayPoint,
    order: OrderWindow,
    k0: int,
    horizon: int,
    separation_exponent: int = 0,
) -> Verdict:
    """Classify the pair's successor-orbit behaviour over [k0, horizon].

    AgreeingTail: distances exactly 0 from some step through the horizon.
    SeparatedBeyond: distances >= 2^-separation_exponent recur into the
    final tenth of the examined range.  ConvergentToHorizon: non-increasing
    but not yet 0.  Otherwise Undecided.
    """
    if horizon > order.radius:
        raise OutOfWindowError("horizon exceeds the order window radius")
    if k0 > horizon:
        raise ValueError("k0 must not exceed the horizon")
    common = [c for c in x.window.elements if c in y.window]
    distinct = False
    for cell in common:
        ix, iy = x.index[cell], y.index[cell]
        if (x.bits[:, ix] != y.bits[:, iy]).any():
            distinct = True
            break
        mx = x.mask[:, ix] if x.mask is not None else None
        my = y.mask[:, iy] if y.mask is not None else None
        if (mx is not None and mx.any()) != (my is not None and my.any()):
            distinct = True
            break
    if not distinct:
        raise PairNotDistinctError("points agree on the common window")

    positions, floors, cells = _divergence_sites(x, y, order)
    witnesses = tuple(sorted(positions)[:16])
    max_pos = max(positions) if positions else None

    if max_pos is None or max_pos < horizon:
        from_k = k0 if max_pos is None else max(k0, max_pos + 1)
        return Verdict(
            AGREEING_TAIL,
            k0,
            horizon,
            from_k=from_k,
            final_exponent=None,
            witness_positions=witnesses,
        )

    exps = _step_exponents(order, positions, floors, cells, k0, horizon)
    exceed = [
        k0 + i
        for i, e in enumerate(exps)
        if e is not None and e <= separation_exponent
    ]
    span = max(1, (horizon - k0) // 10)
    if exceed and horizon - exceed[-1] <= span:
        return Verdict(
            SEPARATED_BEYOND,
            k0,
            horizon,
            last_exceedance=exceed[-1],
            exceedance_count=len(exceed),
            final_exponent=exps[-1],
            witness_positions=witnesses,
        )
    numeric = [(10 ** 9) if e is None else -e for e in exps]  # larger = farther
    non_increasing = all(a <= b for a, b in zip(numeric, numeric[1:]))
    if non_increasing and exps[-1] is not None and numeric[-1] > numeric[0]:
        return Verdict(
            CONVERGENT_TO_HORIZON,
            k0,
            horizon,
            final_exponent=exps[-1],
            witness_positions=witnesses,
        )
    return Verdict(
        UNDECIDED,
        k0,
        horizon,
        final_exponent=exps[-1],
        witness_positions=witnesses,
        reason="distances neither vanish, recur at the separation floor, "
        "nor decrease monotonically",
    )


def phi_asymptotic_check(
    x: ArrayPoint,
    y: ArrayPoint,
    order_x: OrderWindow,
    order_y: OrderWindow,
    k0: int,
    horizon: int,
    separation_exponent: int = 0,
) -> Verdict:
    """OrdersDiffer when the two order windows disagree; else delegate."""
    r = min(order_x.radius, order_y.radius)
    for i in range(-r, r + 1):
        if order_x.at_position(i) != order_y.at_position(i):
            return Verdict(
                ORDERS_DIFFER,
                k0,
                horizon,
                witness_positions=(i,),
                reason="order windows disagree on the common domain",
            )
    shared = order_x if order_x.radius <= order_y.radius else order_y
    return detect(x, y, shared, k0, horizon, separation_exponent)


def tail_pair(x: ArrayPoint, order: OrderWindow, k0: int, flip: Point) -> ArrayPoint:
    """Copy of x with one floor-1 bit flipped strictly before position k0."""
    p = order.position_of(flip)
    if p is None or p >= k0:
        raise OutOfWindowError(
            f"flip cell must sit at an order position < {k0}; got {p}"
        )
    if flip not in x.window:
        raise OutOfWindowError("flip cell is outside the point's window")
    bits = x.bits.copy()
    bits[0, x.index[flip]] ^= 1
    return ArrayPoint(x.group, x.floors, x.window, bits, x.mask)


def distality_floor(x: ArrayPoint, y: ArrayPoint, shifts) -> Fraction:
    """min over the supplied translates of the pair's array distance."""
    best: Fraction | None = None
    for h in shifts:
        d = array_distance(shift(x, h), shift(y, h))
        if best is None or d < best:
            best = d
    if best is None:
        raise ValueError("shifts must be nonempty")
    return best
