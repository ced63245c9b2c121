"""Concrete countable groups with canonical enumeration and invariance checks.

Three groups are built in: the integers Z, the plane Z^2 (sup-norm balls) and
the discrete Heisenberg group H3 in upper-triangular coordinates (a, b, c).
Elements are plain integer tuples; the arity of the tuple identifies the
group, and every operation validates it.

The canonical enumeration orders elements by word-ball radius, then
lexicographically within a shell.  It is a bijection N -> G with
``element_at(0)`` the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptySetError, MixedGroupError

Point = tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Coerce an exact rational from int/str/Fraction/float (via repr)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


class Group:
    """Base class: group law on integer-tuple coordinates."""

    name: str = ""
    dim: int = 0
    generators: tuple[Point, ...] = ()

    def __init__(self) -> None:
        self._shells: list[list[Point]] = [[self.identity]]
        self._index: dict[Point, int] = {self.identity: 0}
        self._norm: dict[Point, int] = {self.identity: 0}

    # -- group law -----------------------------------------------------

    @property
    def identity(self) -> Point:
        return (0,) * self.dim

    def check(self, p: Point) -> Point:
        if not isinstance(p, tuple) or len(p) != self.dim:
            raise MixedGroupError(f"{p!r} is not an element of {self.name}")
        return p

    def mul(self, a: Point, b: Point) -> Point:
        raise NotImplementedError

    def inv(self, a: Point) -> Point:
        raise NotImplementedError

    # -- canonical enumeration ------------------------------------------

    def _shell(self, r: int) -> list[Point]:
        """Elements of word norm exactly r, lexicographically sorted."""
        raise NotImplementedError

    def _extend_shells(self, radius: int) -> None:
        while len(self._shells) <= radius:
            r = len(self._shells)
            shell = self._shell(r)
            base = sum(len(s) for s in self._shells)
            for i, p in enumerate(shell):
                self._index[p] = base + i
                self._norm[p] = r
            self._shells.append(shell)

    def norm(self, p: Point) -> int:
        """Word-ball radius of p (generators as in ``ball``)."""
        self.check(p)
        got = self._norm.get(p)
        if got is not None:
            return got
        r = len(self._shells)
        cap = self._norm_cap(p)
        while p not in self._norm:
            if r > cap:
                raise AssertionError(f"norm search blew cap for {p!r}")
            self._extend_shells(r)
            r += 1
        return self._norm[p]

    def _norm_cap(self, p: Point) -> int:
        return sum(abs(c) for c in p) + 1

    def ball(self, radius: int) -> "FiniteSubset":
        """Word ball of the given radius in canonical order."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        self._extend_shells(radius)
        elems: list[Point] = []
        for shell in self._shells[: radius + 1]:
            elems.extend(shell)
        return FiniteSubset(self, tuple(elems), _trusted=True)

    def element_at(self, i: int) -> Point:
        if i < 0:
            raise ValueError("enumeration index must be >= 0")
        while sum(len(s) for s in self._shells) <= i:
            self._extend_shells(len(self._shells))
        seen = 0
        for shell in self._shells:
            if i < seen + len(shell):
                return shell[i - seen]
            seen += len(shell)
        raise AssertionError("unreachable")

    def index_of(self, p: Point) -> int:
        self.norm(p)  # ensures shells cover p
        return self._index[p]

    def sort_key(self, p: Point):
        return (self.norm(p), p)


class IntLine(Group):
    name = "Z"
    dim = 1
    generators = ((1,), (-1,))

    def mul(self, a: Point, b: Point) -> Point:
        self.check(a), self.check(b)
        return (a[0] + b[0],)

    def inv(self, a: Point) -> Point:
        self.check(a)
        return (-a[0],)

    def _shell(self, r: int) -> list[Point]:
        return [(0,)] if r == 0 else [(-r,), (r,)]


class IntPlane(Group):
    name = "Z2"
    dim = 2
    generators = ((1, 0), (-1, 0), (0, 1), (0, -1))

    def mul(self, a: Point, b: Point) -> Point:
        self.check(a), self.check(b)
        return (a[0] + b[0], a[1] + b[1])

    def inv(self, a: Point) -> Point:
        self.check(a)
        return (-a[0], -a[1])

    def _shell(self, r: int) -> list[Point]:
        if r == 0:
            return [(0, 0)]
        pts = [
            (x, y)
            for x in range(-r, r + 1)
            for y in range(-r, r + 1)
            if max(abs(x), abs(y)) == r
        ]
        pts.sort()
        return pts


class Heisenberg(Group):
    """Discrete Heisenberg group; (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b')."""

    name = "H3"
    dim = 3
    generators = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))

    def mul(self, a: Point, b: Point) -> Point:
        self.check(a), self.check(b)
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])

    def inv(self, a: Point) -> Point:
        self.check(a)
        return (-a[0], -a[1], a[0] * a[1] - a[2])

    def _shell(self, r: int) -> list[Point]:
        # BFS layer over the generators, built from the previous shells.
        if r == 0:
            return [(0, 0, 0)]
        inner = set(self._index)
        layer = {
            self.mul(p, g)
            for p in self._shells[r - 1]
            for g in self.generators
        }
        return sorted(layer - inner)

    def _norm_cap(self, p: Point) -> int:
        # (0,0,k^2) is a commutator word of length 4k, so this bound is safe.
        a, b, c = p
        return abs(a) + abs(b) + 4 * (math.isqrt(abs(c)) + 1) + 8


@dataclass(frozen=True)
class FiniteSubset:
    """Duplicate-free ordered list of elements of one group.

    By default construction sorts into canonical enumeration order; pass
    ordered=True to :meth:`make` to preserve a meaningful order (e.g. the
    induced order of a tile).
    """

    group: Group
    elements: tuple[Point, ...]
    _trusted: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not self._trusted:
            for p in self.elements:
                self.group.check(p)
            if len(set(self.elements)) != len(self.elements):
                raise ValueError("duplicate elements in FiniteSubset")

    @classmethod
    def make(cls, group: Group, pts: Iterable[Point], ordered: bool = False) -> "FiniteSubset":
        pts = [tuple(p) for p in pts]
        seen = set()
        uniq = []
        for p in pts:
            group.check(p)
            if p not in seen:
                seen.add(p)
                uniq.append(p)
        if not ordered:
            uniq.sort(key=group.sort_key)
        return cls(group, tuple(uniq), _trusted=True)

    @property
    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p) -> bool:
        return p in self.as_set

    def translate(self, h: Point) -> "FiniteSubset":
        """Right translate F -> Fh, preserving the element order."""
        g = self.group
        return FiniteSubset(g, tuple(g.mul(p, h) for p in self.elements), _trusted=True)


Z = IntLine()
Z2 = IntPlane()
H3 = Heisenberg()

GROUPS: dict[str, Group] = {"Z": Z, "Z2": Z2, "H3": H3}


def group_by_name(name: str) -> Group:
    try:
        return GROUPS[name]
    except KeyError:
        raise MixedGroupError(f"unknown group {name!r}") from None


def same_group(*subsets_or_groups) -> Group:
    groups = [
        s.group if isinstance(s, FiniteSubset) else s for s in subsets_or_groups
    ]
    first = groups[0]
    for g in groups[1:]:
        if g is not first:
            raise MixedGroupError("operands belong to different groups")
    return first


def check_invariance(K: FiniteSubset, eps, F: FiniteSubset) -> tuple[Fraction, bool]:
    """Exact (K, eps)-invariance ratio |KF symdiff F| / |F| and verdict."""
    g = same_group(K, F)
    if len(F) == 0:
        raise EmptySetError("F must be nonempty")
    eps = to_fraction(eps)
    fset = F.as_set
    kf = {g.mul(k, f) for k in K for f in F}
    ratio = Fraction(len(kf.symmetric_difference(fset)), len(F))
    return ratio, ratio < eps


def folner_threshold(seq: Sequence[FiniteSubset], K: FiniteSubset, eps) -> int | None:
    """Smallest 1-based n such that every later set in seq is (K, eps)-invariant.

    Returns None when the final entry already fails (no valid tail).
    """
    if not seq:
        raise EmptySetError("sequence must be nonempty")
    eps = to_fraction(eps)
    threshold = None
    for i, F in enumerate(seq, start=1):
        _, ok = check_invariance(K, eps, F)
        if not ok:
            threshold = None
        elif threshold is None:
            threshold = i
    return threshold
