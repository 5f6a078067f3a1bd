"""Finite topological spaces, bases, coverings, and continuous maps.

A space is a finite point set with an explicit family of open sets closed
under union and intersection.  Spaces are immutable after construction:
minimal open neighborhoods and the closure table are precomputed, and all
enumerations come back in lexicographic order on sorted point labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .canon import open_key, sort_opens
from .errors import (
    CapExceeded,
    GeneratorsDoNotCover,
    NotAnOpen,
    NotContinuous,
    UnknownPoint,
)

PointSet = frozenset[str]


def _as_open(members: Iterable[str]) -> PointSet:
    return frozenset(members)


def _check_label(label: str) -> str:
    if not isinstance(label, str) or label == "" or "," in label:
        raise ValueError(f"point labels must be nonempty strings without commas: {label!r}")
    return label


class FiniteSpace:
    """A finite point set with an explicit topology.

    ``opens`` must contain the empty set and the full point set and be
    closed under pairwise union and intersection (which suffices for
    arbitrary ones on a finite space).
    """

    def __init__(self, points: Iterable[str], opens: Iterable[Iterable[str]]):
        self.points: PointSet = frozenset(_check_label(p) for p in points)
        self.opens: frozenset[PointSet] = frozenset(_as_open(u) for u in opens)
        self._validate()
        self._minimal: dict[str, PointSet] = {
            x: frozenset.intersection(*[u for u in self.opens if x in u])
            for x in self.points
        }
        closed = [self.points - u for u in self.opens]
        self._closure_of_point: dict[str, PointSet] = {
            x: frozenset.intersection(*[c for c in closed if x in c])
            for x in self.points
        }
        self._sorted_opens: list[PointSet] = sort_opens(self.opens)
        self._inclusion_pairs: list[tuple[PointSet, PointSet]] = [
            (u, v) for u in self._sorted_opens for v in self._sorted_opens if u <= v
        ]

    def _validate(self) -> None:
        for u in self.opens:
            if not u <= self.points:
                raise UnknownPoint(f"open {set(u)} contains points outside the space")
        if frozenset() not in self.opens:
            raise ValueError("topology must contain the empty set")
        if self.points not in self.opens:
            raise ValueError("topology must contain the full point set")
        for a in self.opens:
            for b in self.opens:
                if a | b not in self.opens:
                    raise ValueError(f"opens not closed under union: {set(a)} ∪ {set(b)}")
                if a & b not in self.opens:
                    raise ValueError(f"opens not closed under intersection: {set(a)} ∩ {set(b)}")

    # vv Equality is extensional: same points, same opens.
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteSpace)
            and self.points == other.points
            and self.opens == other.opens
        )

    def __hash__(self) -> int:
        return hash((self.points, self.opens))

    def __repr__(self) -> str:
        return f"FiniteSpace({sorted(self.points)}, {len(self.opens)} opens)"

    def sorted_opens(self) -> list[PointSet]:
        return self._sorted_opens

    def inclusion_pairs(self) -> list[tuple[PointSet, PointSet]]:
        """All pairs (u, v) of opens with u ⊆ v, in sorted order."""
        return self._inclusion_pairs

    def is_open(self, u: Iterable[str]) -> bool:
        return _as_open(u) in self.opens

    def require_open(self, u: Iterable[str]) -> PointSet:
        su = _as_open(u)
        if su not in self.opens:
            raise NotAnOpen(f"{open_key(su)!r} is not an open of this space")
        return su

    def require_point(self, x: str) -> str:
        if x not in self.points:
            raise UnknownPoint(f"unknown point {x!r}")
        return x

    def opens_within(self, u: PointSet) -> list[PointSet]:
        """All opens contained in ``u``, sorted."""
        return [v for v in self.sorted_opens() if v <= u]


@dataclass(frozen=True)
class Basis:
    """A family of opens such that every open is a union of members."""

    space: FiniteSpace
    members: frozenset[PointSet]

    def __post_init__(self):
        for b in self.members:
            if b not in self.space.opens:
                raise NotAnOpen(f"basis member {open_key(b)!r} is not open")
        for u in self.space.opens:
            inside = [b for b in self.members if b <= u]
            if frozenset().union(*inside) != u:
                raise ValueError(f"open {open_key(u)!r} is not a union of basis members")

    def sorted_members(self) -> list[PointSet]:
        return sort_opens(self.members)

    def members_within(self, u: PointSet) -> list[PointSet]:
        return [b for b in self.sorted_members() if b <= u]


@dataclass(frozen=True)
class Covering:
    """An open covering of ``target`` by opens contained in it.

    Parts are normalized to sorted order at construction; the empty list
    is a valid covering of the empty set only.
    """

    target: PointSet
    parts: tuple[PointSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sort_opens(self.parts)))
        union: PointSet = frozenset()
        for p in self.parts:
            if not p <= self.target:
                raise ValueError("covering part not contained in target")
            union = union | p
        if union != self.target:
            raise ValueError("covering parts do not cover the target")

    def key(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(sorted(p)) for p in self.parts)


@dataclass(frozen=True)
class ContinuousMap:
    """A continuous map between finite spaces, given point by point."""

    source: FiniteSpace
    target: FiniteSpace
    assignment: Mapping[str, str]

    def __post_init__(self):
        for x in self.source.points:
            if x not in self.assignment:
                raise UnknownPoint(f"assignment missing source point {x!r}")
            if self.assignment[x] not in self.target.points:
                raise UnknownPoint(f"image {self.assignment[x]!r} not in target space")

    def __call__(self, x: str) -> str:
        return self.assignment[self.source.require_point(x)]

    def preimage(self, v: Iterable[str]) -> PointSet:
        vs = frozenset(v)
        return frozenset(x for x in self.source.points if self.assignment[x] in vs)

    def image(self, u: Iterable[str]) -> PointSet:
        return frozenset(self.assignment[x] for x in u)


def identity_map(space: FiniteSpace) -> ContinuousMap:
    return ContinuousMap(space, space, {x: x for x in space.points})


def compose_maps(outer: ContinuousMap, inner: ContinuousMap) -> ContinuousMap:
    """The composite ``outer ∘ inner``; sources and targets must chain."""
    if inner.target != outer.source:
        raise ValueError("maps do not compose: inner target differs from outer source")
    return ContinuousMap(
        inner.source, outer.target,
        {x: outer.assignment[inner.assignment[x]] for x in inner.source.points},
    )


def space_from_basis(points: Iterable[str], generators: Iterable[Iterable[str]]) -> tuple[FiniteSpace, Basis]:
    """Coarsest topology containing the generators, plus the recorded basis.

    Closes the generator family under pairwise union and intersection and
    adds the empty and full sets.
    """
    pts = frozenset(_check_label(p) for p in points)
    gens = {frozenset(g) for g in generators}
    for g in gens:
        if not g <= pts:
            raise UnknownPoint(f"generator {open_key(g)!r} contains unknown points")
    if frozenset().union(*gens, frozenset()) != pts:
        raise GeneratorsDoNotCover("generators do not cover the point set")
    opens = set(gens) | {frozenset(), pts}
    while True:
        new = set()
        for a in opens:
            for b in opens:
                for c in (a | b, a & b):
                    if c not in opens:
                        new.add(c)
        if not new:
            break
        opens |= new
    space = FiniteSpace(pts, opens)
    return space, Basis(space, frozenset(gens))


def minimal_open(space: FiniteSpace, x: str) -> PointSet:
    """Intersection of all opens containing ``x``; itself open here."""
    space.require_point(x)
    return space._minimal[x]


def closure(space: FiniteSpace, subset: Iterable[str]) -> PointSet:
    """Smallest closed set containing ``subset``."""
    s = frozenset(subset)
    for x in s:
        space.require_point(x)
    out: PointSet = frozenset()
    for x in s:
        out = out | space._closure_of_point[x]
    return out


def is_irreducible(space: FiniteSpace) -> bool:
    """Nonempty, and every pair of nonempty opens meets."""
    if not space.points:
        return False
    nonempty = [u for u in space.opens if u]
    return all(a & b for a in nonempty for b in nonempty)


def check_continuous(m: ContinuousMap) -> bool:
    """True iff the preimage of every target open is a source open."""
    return all(m.preimage(v) in m.source.opens for v in m.target.opens)


def require_continuous(m: ContinuousMap) -> ContinuousMap:
    if not check_continuous(m):
        raise NotContinuous("preimage of some open is not open")
    return m


def subspace(space: FiniteSpace, u: Iterable[str]) -> FiniteSpace:
    """The subspace on an *open* subset: its opens are the opens inside it."""
    su = space.require_open(u)
    return FiniteSpace(su, [v for v in space.opens if v <= su])


def open_inclusion(space: FiniteSpace, u: Iterable[str]) -> ContinuousMap:
    su = space.require_open(u)
    return ContinuousMap(subspace(space, su), space, {x: x for x in su})


def _is_antichain(parts: tuple[PointSet, ...]) -> bool:
    return not any(a < b or b < a for a, b in combinations(parts, 2))


def enumerate_antichain_coverings(
    space: FiniteSpace, u: Iterable[str], max_coverings: int | None = None
) -> list[Covering]:
    """All antichain coverings of ``u`` by opens inside it, sorted.

    Includes the trivial covering {u}; for the empty set also the empty
    covering, which is what forces terminal sections there.  Checking the
    gluing axiom over these suffices: the maximal parts of any covering
    form an antichain subcovering through which the full condition factors
    (regression-tested against the full enumeration on tiny spaces).
    """
    su = space.require_open(u)
    candidates = [v for v in space.opens_within(su) if v]
    found: list[Covering] = []
    if not su:
        found.append(Covering(frozenset(), ()))
        found.append(Covering(frozenset(), (frozenset(),)))
    else:
        for r in range(1, len(candidates) + 1):
            for combo in combinations(candidates, r):
                if not _is_antichain(combo):
                    continue
                if frozenset().union(*combo) != su:
                    continue
                found.append(Covering(su, combo))
                if max_coverings is not None and len(found) > max_coverings:
                    raise CapExceeded(
                        f"more than {max_coverings} antichain coverings of {open_key(su)!r}"
                    )
    return sorted(found, key=Covering.key)


def enumerate_all_coverings(space: FiniteSpace, u: Iterable[str]) -> list[Covering]:
    """Exhaustive covering enumeration; the oracle for the antichain cut.

    Exponential in the number of opens inside ``u``, so only usable on
    tiny spaces.
    """
    su = space.require_open(u)
    candidates = space.opens_within(su)
    found: list[Covering] = []
    if not su:
        found.append(Covering(frozenset(), ()))
    for r in range(1, len(candidates) + 1):
        for combo in combinations(candidates, r):
            if frozenset().union(*combo) == su:
                found.append(Covering(su, combo))
    return sorted(found, key=Covering.key)
