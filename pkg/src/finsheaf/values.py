"""The two concrete value categories: finite sets and finite abelian groups.

FinAb objects carry explicit addition tables rather than invariant-factor
decompositions: the axioms are checked by full table scan, which is cheap
at the scale everything here runs at.  Every canonical construction
(limit tuples, colimit classes) produces deterministic composite labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .canon import pair_label
from .errors import (
    CapExceeded,
    IncompatibleCone,
    MalformedDiagram,
    MixedCategories,
    NotFiltered,
)

FINSET = "FinSet"
FINAB = "FinAb"


@dataclass
class ValueObject:
    """A finite set, or a finite abelian group given by its addition table."""

    category: str
    elements: tuple[str, ...]
    add: dict[tuple[str, str], str] | None = None
    zero: str | None = None
    neg: dict[str, str] | None = None

    def __post_init__(self):
        self.elements = tuple(sorted(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate element labels")
        if self.category == FINSET:
            if self.add is not None or self.zero is not None:
                raise ValueError("FinSet objects carry no group structure")
        elif self.category == FINAB:
            self._check_group()
        else:
            raise ValueError(f"unknown category {self.category!r}")

    def _check_group(self) -> None:
        elems = self.elements
        if self.zero is None or self.add is None:
            raise ValueError("FinAb objects need zero and add table")
        if self.zero not in elems:
            raise ValueError("zero is not an element")
        for a, b in product(elems, repeat=2):
            if (a, b) not in self.add or self.add[(a, b)] not in elems:
                raise ValueError(f"add table not total at ({a!r}, {b!r})")
            if self.add[(a, b)] != self.add[(b, a)]:
                raise ValueError(f"not commutative at ({a!r}, {b!r})")
        for a in elems:
            if self.add[(a, self.zero)] != a:
                raise ValueError(f"{self.zero!r} is not an identity for {a!r}")
        if self.neg is None:
            self.neg = {}
            for a in elems:
                inverses = [b for b in elems if self.add[(a, b)] == self.zero]
                if not inverses:
                    raise ValueError(f"no inverse for {a!r}")
                self.neg[a] = inverses[0]
        for a in elems:
            if self.add[(a, self.neg[a])] != self.zero:
                raise ValueError(f"neg table wrong at {a!r}")
        for a, b, c in product(elems, repeat=3):
            if self.add[(self.add[(a, b)], c)] != self.add[(a, self.add[(b, c)])]:
                raise ValueError(f"not associative at ({a!r}, {b!r}, {c!r})")

    def __contains__(self, label: str) -> bool:
        return label in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, ValueObject):
            return NotImplemented
        return (
            self.category == other.category
            and self.elements == other.elements
            and self.add == other.add
            and self.zero == other.zero
        )


def finset(labels: Iterable[str]) -> ValueObject:
    return ValueObject(FINSET, tuple(labels))


def singleton(label: str = "*") -> ValueObject:
    return ValueObject(FINSET, (label,))


def cyclic_group(n: int) -> ValueObject:
    """Z/n with elements "0".."n-1" under addition mod n."""
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    labels = [str(i) for i in range(n)]
    add = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    return ValueObject(FINAB, tuple(labels), add=add, zero="0")


def zero_group() -> ValueObject:
    return cyclic_group(1)


def terminal_object(category: str) -> ValueObject:
    return singleton() if category == FINSET else zero_group()


def group_from_triples(elements: Iterable[str], triples: Iterable[Sequence[str]],
                       zero: str) -> ValueObject:
    add = {(x, y): z for x, y, z in triples}
    return ValueObject(FINAB, tuple(elements), add=add, zero=zero)


@dataclass
class ValueMorphism:
    """A map of finite sets, or a homomorphism of finite abelian groups."""

    source: ValueObject
    target: ValueObject
    map: dict[str, str]

    def __post_init__(self):
        if self.source.category != self.target.category:
            raise MixedCategories(
                f"{self.source.category} -> {self.target.category}")
        for a in self.source.elements:
            if a not in self.map:
                raise ValueError(f"map not total: missing {a!r}")
            if self.map[a] not in self.target.elements:
                raise ValueError(f"image {self.map[a]!r} not in target")
        if self.source.category == FINAB:
            add_s, add_t = self.source.add, self.target.add
            for a, b in product(self.source.elements, repeat=2):
                if self.map[add_s[(a, b)]] != add_t[(self.map[a], self.map[b])]:
                    raise ValueError(f"not a homomorphism at ({a!r}, {b!r})")

    def __call__(self, label: str) -> str:
        return self.map[label]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ValueMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.map == other.map
        )

    def is_bijective(self) -> bool:
        return len(set(self.map.values())) == len(self.target.elements) == len(self.source.elements)

    def inverse(self) -> "ValueMorphism":
        if not self.is_bijective():
            raise ValueError("morphism is not bijective")
        return ValueMorphism(self.target, self.source, {v: k for k, v in self.map.items()})


def identity(obj: ValueObject) -> ValueMorphism:
    return ValueMorphism(obj, obj, {a: a for a in obj.elements})


def compose(outer: ValueMorphism, inner: ValueMorphism) -> ValueMorphism:
    """``outer ∘ inner``; target of ``inner`` must be source of ``outer``."""
    if inner.target != outer.source:
        raise ValueError("morphisms do not compose")
    return ValueMorphism(inner.source, outer.target,
                         {a: outer.map[inner.map[a]] for a in inner.source.elements})


@dataclass(frozen=True)
class Poset:
    """A finite poset given by elements and a reflexive-transitive relation."""

    elements: tuple[str, ...]
    le: frozenset[tuple[str, str]]

    @staticmethod
    def from_pairs(elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "Poset":
        elems = tuple(sorted(set(elements)))
        rel = {(a, a) for a in elems} | set(pairs)
        changed = True
        while changed:
            changed = False
            for (a, b) in list(rel):
                for (c, d) in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        for a, b in rel:
            if a not in elems or b not in elems:
                raise MalformedDiagram(f"relation mentions unknown element ({a!r}, {b!r})")
            if a != b and (b, a) in rel:
                raise MalformedDiagram(f"not antisymmetric: {a!r} and {b!r}")
        return Poset(elems, frozenset(rel))

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.le

    def pairs_below(self) -> list[tuple[str, str]]:
        """All strictly comparable pairs (i, j) with i < j, sorted."""
        return sorted((a, b) for (a, b) in self.le if a != b)

    def upper_bounds(self, a: str, b: str) -> list[str]:
        return [c for c in self.elements if self.leq(a, c) and self.leq(b, c)]

    def is_filtered(self) -> bool:
        if not self.elements:
            return False
        return all(self.upper_bounds(a, b) for a in self.elements for b in self.elements)


COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"


@dataclass
class Diagram:
    """A functor from a finite poset into FinSet or FinAb.

    ``arrows`` holds one morphism per comparable pair ``(i, j)`` with
    ``i < j``; all arrows must run the same way: index order to object
    (covariant) or object to index order (contravariant).  Identity
    arrows are implicit.  ``category_hint`` pins the value category for
    the empty diagram, where no object can witness it.
    """

    index: Poset
    objects: dict[str, ValueObject]
    arrows: dict[tuple[str, str], ValueMorphism]
    category_hint: str | None = None

    def __post_init__(self):
        cats = {o.category for o in self.objects.values()}
        if len(cats) > 1:
            raise MixedCategories(f"diagram mixes {sorted(cats)}")
        if self.category_hint is not None and cats and {self.category_hint} != cats:
            raise MixedCategories("category hint contradicts the objects")
        for i in self.index.elements:
            if i not in self.objects:
                raise MalformedDiagram(f"no object at index {i!r}")
        for (i, j), arr in self.arrows.items():
            if i == j and arr.map != identity(self.objects[i]).map:
                raise MalformedDiagram(f"explicit arrow at ({i!r}, {i!r}) is not the identity")
        self.orientation = self._orientation()
        self._check_functorial()

    @property
    def category(self) -> str:
        if self.objects:
            return next(iter(self.objects.values())).category
        return self.category_hint or FINSET

    def _orientation(self) -> str | None:
        possible = {COVARIANT, CONTRAVARIANT}
        for (i, j) in self.index.pairs_below():
            if (i, j) not in self.arrows:
                raise MalformedDiagram(f"missing arrow for {i!r} <= {j!r}")
            arr = self.arrows[(i, j)]
            fits = set()
            if arr.source == self.objects[i] and arr.target == self.objects[j]:
                fits.add(COVARIANT)
            if arr.source == self.objects[j] and arr.target == self.objects[i]:
                fits.add(CONTRAVARIANT)
            if not fits:
                raise MalformedDiagram(f"arrow at ({i!r}, {j!r}) connects wrong objects")
            possible &= fits
            if not possible:
                raise MalformedDiagram("arrows do not share one orientation")
        if possible == {COVARIANT, CONTRAVARIANT}:
            return None
        return next(iter(possible))

    def _check_functorial(self) -> None:
        # orientation None (only identity-shaped arrows) must satisfy both orders
        orders = [o for o in (CONTRAVARIANT, COVARIANT)
                  if self.orientation in (o, None)]
        for (i, j) in self.index.pairs_below():
            for k in self.index.elements:
                if k == i or k == j:
                    continue
                if self.index.leq(i, k) and self.index.leq(k, j):
                    for orient in orders:
                        if orient == CONTRAVARIANT:
                            left = compose(self.arrows[(i, k)], self.arrows[(k, j)])
                        else:
                            left = compose(self.arrows[(k, j)], self.arrows[(i, k)])
                        if left.map != self.arrows[(i, j)].map:
                            raise MalformedDiagram(
                                f"composite through {k!r} disagrees on ({i!r}, {j!r})")

    def arrow(self, i: str, j: str) -> ValueMorphism:
        """The arrow attached to ``i <= j`` (identity when ``i == j``)."""
        if i == j:
            return identity(self.objects[i])
        return self.arrows[(i, j)]


@dataclass
class LimitResult:
    object: ValueObject
    projections: dict[str, ValueMorphism]
    # per limit element, its compatible family as {index: element}
    families: dict[str, dict[str, str]]


def limit(diagram: Diagram) -> LimitResult:
    """Projective limit: compatible families with componentwise structure.

    Arrows must run from larger to smaller index (contravariant); the
    empty diagram yields the terminal object.
    """
    if diagram.orientation == COVARIANT:
        raise MalformedDiagram("limit needs contravariant arrows (larger to smaller)")
    idx = list(diagram.index.elements)
    category = diagram.category
    families: dict[str, dict[str, str]] = {}
    for combo in product(*[diagram.objects[i].elements for i in idx]):
        fam = dict(zip(idx, combo))
        ok = all(
            diagram.arrow(i, j).map[fam[j]] == fam[i]
            for (i, j) in diagram.index.pairs_below()
        )
        if ok:
            families[pair_label(fam.items())] = fam
    labels = tuple(sorted(families))
    if category == FINAB:
        add = {}
        for la, lb in product(labels, repeat=2):
            sums = {
                i: diagram.objects[i].add[(families[la][i], families[lb][i])]
                for i in idx
            }
            add[(la, lb)] = pair_label(sums.items())
        zero = pair_label({i: diagram.objects[i].zero for i in idx}.items())
        obj = ValueObject(FINAB, labels, add=add, zero=zero)
    else:
        obj = ValueObject(FINSET, labels)
    projections = {
        i: ValueMorphism(obj, diagram.objects[i], {l: families[l][i] for l in labels})
        for i in idx
    }
    return LimitResult(obj, projections, families)


def mediating_morphism(cone: Mapping[str, ValueMorphism], lim: LimitResult,
                       diagram: Diagram, tip: ValueObject | None = None) -> ValueMorphism:
    """The unique morphism into the limit with ``proj_i ∘ m = cone_i``.

    ``tip`` is only needed for the empty diagram, where the cone carries
    no legs to read it off from.
    """
    idx = list(diagram.index.elements)
    if set(cone) != set(idx):
        raise IncompatibleCone("cone must give one leg per index element")
    if idx:
        tips = [cone[i].source for i in idx]
        if any(t != tips[0] for t in tips):
            raise IncompatibleCone("cone legs start at different objects")
        tip = tips[0]
    elif tip is None:
        raise IncompatibleCone("empty-diagram cones need an explicit tip object")
    for (i, j) in diagram.index.pairs_below():
        if compose(diagram.arrow(i, j), cone[j]).map != cone[i].map:
            raise IncompatibleCone(f"cone does not commute over ({i!r}, {j!r})")
    table = {}
    for t in tip.elements:
        fam = {i: cone[i].map[t] for i in idx}
        label = pair_label(fam.items())
        if label not in lim.families:
            raise IncompatibleCone(f"cone lands outside the limit at {t!r}")
        table[t] = label
    return ValueMorphism(tip, lim.object, table)


@dataclass
class ColimitResult:
    object: ValueObject
    injections: dict[str, ValueMorphism]
    # class label -> sorted list of members (index, element)
    classes: dict[str, list[tuple[str, str]]]


def filtered_colimit(diagram: Diagram) -> ColimitResult:
    """Inductive limit over a filtered poset, as classes of (index, element).

    Two pairs are identified when they agree after pushing to a common
    upper index; classes are labeled by their least representative.
    """
    if not diagram.index.is_filtered():
        raise NotFiltered("index poset is empty or has a pair without upper bound")
    if diagram.orientation == CONTRAVARIANT:
        raise MalformedDiagram("filtered colimit needs covariant arrows")
    idx = list(diagram.index.elements)
    pairs = [(i, a) for i in idx for a in diagram.objects[i].elements]
    parent = {p: p for p in pairs}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p, q):
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[max(rp, rq)] = min(rp, rq)

    for (i, a) in pairs:
        for (j, b) in pairs:
            if (i, a) >= (j, b):
                continue
            if any(
                diagram.arrow(i, k).map[a] == diagram.arrow(j, k).map[b]
                for k in diagram.index.upper_bounds(i, j)
            ):
                union((i, a), (j, b))

    members: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for p in pairs:
        members.setdefault(find(p), []).append(p)

    def class_label(root: tuple[str, str]) -> str:
        i0, a0 = min(members[root])
        return pair_label([(i0, a0)])

    label_of_pair = {p: class_label(find(p)) for p in pairs}
    classes = {class_label(r): sorted(ms) for r, ms in members.items()}
    labels = tuple(sorted(classes))
    category = diagram.category
    if category == FINAB:
        def add_classes(la: str, lb: str) -> str:
            i, a = classes[la][0]
            j, b = classes[lb][0]
            k = sorted(diagram.index.upper_bounds(i, j))[0]
            s = diagram.objects[k].add[
                (diagram.arrow(i, k).map[a], diagram.arrow(j, k).map[b])
            ]
            return label_of_pair[(k, s)]

        add = {(la, lb): add_classes(la, lb) for la in labels for lb in labels}
        zero = label_of_pair[(idx[0], diagram.objects[idx[0]].zero)]
        obj = ValueObject(FINAB, labels, add=add, zero=zero)
    else:
        obj = ValueObject(FINSET, labels)
    injections = {
        i: ValueMorphism(
            diagram.objects[i], obj,
            {a: label_of_pair[(i, a)] for a in diagram.objects[i].elements},
        )
        for i in idx
    }
    return ColimitResult(obj, injections, classes)


def enumerate_morphisms(source: ValueObject, target: ValueObject,
                        max_homs: int | None = None) -> list[ValueMorphism]:
    """All maps (FinSet) or homomorphisms (FinAb), deterministically ordered."""
    if source.category != target.category:
        raise MixedCategories(f"{source.category} vs {target.category}")
    n_candidates = len(target.elements) ** len(source.elements)
    if max_homs is not None and n_candidates > max_homs:
        raise CapExceeded(f"{n_candidates} candidate maps exceed cap {max_homs}")
    out: list[ValueMorphism] = []
    src = source.elements
    for images in product(target.elements, repeat=len(src)):
        table = dict(zip(src, images))
        if source.category == FINAB:
            add_s, add_t = source.add, target.add
            if any(
                table[add_s[(a, b)]] != add_t[(table[a], table[b])]
                for a, b in product(src, repeat=2)
            ):
                continue
        out.append(ValueMorphism(source, target, table))
    return out
