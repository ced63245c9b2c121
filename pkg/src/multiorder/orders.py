"""Orders of type Z represented as finite windows of anchored bijections.

An order of type Z on a group G is equivalent to a bijection Z -> G sending
0 to the unit; a window stores that bijection restricted to positions
[-N, N].  Queries past the window edge return None (a normal verdict, never
a guess); structural operations that cannot return a partial result raise.

``act(g, w)`` realizes the group action on orders, a <' b  iff  ag < bg,
through the translation identity  i^(g(<)) = (i+k)^< * g^{-1}  where
g = k^<.  The output radius is conservative: N' = N - |k|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyResultError, OutOfWindowError
from .groups import FiniteSubset, Group, Point

LESS, EQUAL, GREATER = -1, 0, 1


@dataclass(frozen=True)
class OrderWindow:
    group: Group
    points: tuple[Point, ...]  # positions -N..N in order
    _pos: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.points)
        if n % 2 != 1:
            raise ValueError("window must cover positions -N..N")
        if self.points[n // 2] != self.group.identity:
            raise ValueError("window is not anchored at the identity")
        pos = {p: i - n // 2 for i, p in enumerate(self.points)}
        if len(pos) != n:
            raise ValueError("window positions are not injective")
        object.__setattr__(self, "_pos", pos)

    @property
    def radius(self) -> int:
        return len(self.points) // 2

    def at_position(self, k: int) -> Point | None:
        """k-th element counting from the unit along the order; None if |k| > N."""
        if abs(k) > self.radius:
            return None
        return self.points[k + self.radius]

    def position_of(self, g: Point) -> int | None:
        return self._pos.get(g)

    def compare(self, a: Point, b: Point) -> int | None:
        """LESS/EQUAL/GREATER, or None when a point is outside the window image."""
        if a == b:
            return EQUAL
        pa, pb = self._pos.get(a), self._pos.get(b)
        if pa is None or pb is None:
            return None
        return LESS if pa < pb else GREATER

    @property
    def image(self) -> FiniteSubset:
        return FiniteSubset.make(self.group, self.points, ordered=True)

    def act(self, g: Point) -> "OrderWindow":
        """Window of g(<) derived from this one; radius shrinks to N - |k|."""
        k = self._pos.get(g)
        if k is None:
            raise OutOfWindowError(f"{g!r} is not in the window image")
        n2 = self.radius - abs(k)
        if n2 < 0:
            raise EmptyResultError("derived window would be empty")
        ginv = self.group.inv(g)
        mid = self.radius
        pts = tuple(
            self.group.mul(self.points[i + k + mid], ginv)
            for i in range(-n2, n2 + 1)
        )
        return OrderWindow(self.group, pts)

    def successor_order(self) -> "OrderWindow":
        """The order moved one step along itself: g(<) with g = 1^<."""
        if self.radius < 1:
            raise EmptyResultError("radius 0 window has no successor data")
        return self.act(self.at_position(1))

    def to_record(self) -> dict:
        return {
            "group": self.group.name,
            "radius": self.radius,
            "positions": [list(p) for p in self.points],
        }

    @classmethod
    def from_record(cls, record: dict, group: Group) -> "OrderWindow":
        pts = tuple(tuple(p) for p in record["positions"])
        return cls(group, pts)


def integer_order_window(radius: int) -> OrderWindow:
    """The natural order on Z, restricted to [-N, N]."""
    from .groups import Z

    return OrderWindow(Z, tuple((k,) for k in range(-radius, radius + 1)))


def spiral_order_window(group: Group, radius: int) -> OrderWindow:
    """An anchored order window threading the canonical enumeration.

    Positions 0, 1, -1, 2, -2, ... visit enumeration indices 0, 1, 2, 3, 4,
    which yields a valid window on any of the built-in groups (useful for
    exercising the order calculus off the tiling path, e.g. on H3).
    """
    pts = [group.identity] * (2 * radius + 1)
    for k in range(1, radius + 1):
        pts[radius + k] = group.element_at(2 * k - 1)
        pts[radius - k] = group.element_at(2 * k)
    return OrderWindow(group, tuple(pts))
