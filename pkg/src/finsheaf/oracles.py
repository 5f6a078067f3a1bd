"""Exhaustive enumeration substrate for the verification suite.

Everything here exists to drive brute-force cross-checks on tiny
instances: all labeled topologies on a few points, and all presheaves
with bounded section sets over such a space.  The enumerators share
value objects and morphisms aggressively; at three points the presheaf
count already reaches the hundreds of thousands.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator

from .presheaf import Presheaf
from .topology import FiniteSpace, PointSet
from .values import FINSET, ValueMorphism, ValueObject

_LABELS = ("s0", "s1", "s2", "s3")


def enumerate_topologies(points: list[str]) -> list[FiniteSpace]:
    """All labeled topologies on the given points (29 on three points)."""
    pts = frozenset(points)
    proper = [frozenset(c)
              for r in range(1, len(points))
              for c in combinations(sorted(pts), r)]
    out = []
    for r in range(len(proper) + 1):
        for combo in combinations(proper, r):
            fam = set(combo) | {frozenset(), pts}
            if all(a | b in fam and a & b in fam for a in fam for b in fam):
                out.append(FiniteSpace(pts, fam))
    return out


class _SharedTables:
    """Interned value objects and morphisms for the presheaf enumerator."""

    def __init__(self, max_size: int):
        self.objects = {k: ValueObject(FINSET, _LABELS[:k]) for k in range(max_size + 1)}
        self._morphisms: dict = {}

    def morphism(self, src: int, tgt: int, table: tuple) -> ValueMorphism:
        key = (src, tgt, table)
        got = self._morphisms.get(key)
        if got is None:
            got = ValueMorphism(self.objects[src], self.objects[tgt], dict(table))
            self._morphisms[key] = got
        return got

    def all_maps(self, src: int, tgt: int) -> list[ValueMorphism]:
        key = ("all", src, tgt)
        got = self._morphisms.get(key)
        if got is None:
            got = [
                self.morphism(src, tgt, tuple(zip(_LABELS[:src], img)))
                for img in product(_LABELS[:tgt], repeat=src)
            ]
            self._morphisms[key] = got
        return got


def enumerate_presheaves(space: FiniteSpace, max_size: int = 2,
                         min_size: int = 0) -> Iterator[Presheaf]:
    """Every FinSet presheaf on the space with |F(U)| between the bounds.

    Functors are built top-down: maps are chosen on the covering relations
    of the inclusion order and composites are checked for path
    independence, so each functor comes out exactly once.
    """
    shared = _SharedTables(max_size)
    opens = sorted(space.opens, key=lambda u: (-len(u), tuple(sorted(u))))
    n = len(opens)
    supersets = {u: [v for v in opens if u < v] for u in opens}
    parents = {
        u: [v for v in supersets[u]
            if not any(u < w < v for w in supersets[u])]
        for u in opens
    }
    sizes = range(min_size, max_size + 1)

    size_of: dict[PointSet, int] = {}
    res: dict[tuple[PointSet, PointSet], ValueMorphism] = {}

    def rec(i: int) -> Iterator[Presheaf]:
        if i == n:
            sections = {u: shared.objects[size_of[u]] for u in opens}
            full = dict(res)
            for u in opens:
                full[(u, u)] = shared.morphism(
                    size_of[u], size_of[u],
                    tuple((a, a) for a in _LABELS[:size_of[u]]))
            # wiring is consistent by construction; skip re-validation
            yield Presheaf(space, FINSET, sections, full, validate=False)
            return
        u = opens[i]
        for size in sizes:
            par = parents[u]
            for combo in product(*[shared.all_maps(size_of[v], size) for v in par]):
                new_res = {}
                ok = True
                for w in supersets[u]:
                    derived = None
                    for v, f in zip(par, combo):
                        if not v <= w:
                            continue
                        if v == w:
                            cand = f
                        else:
                            inner = res[(v, w)]
                            cand = shared.morphism(
                                size_of[w], size,
                                tuple((a, f.map[inner.map[a]])
                                      for a in _LABELS[:size_of[w]]))
                        if derived is None:
                            derived = cand
                        elif derived is not cand:
                            ok = False
                            break
                    if not ok:
                        break
                    new_res[(u, w)] = derived
                if not ok:
                    continue
                size_of[u] = size
                res.update(new_res)
                yield from rec(i + 1)
                for k in new_res:
                    del res[k]
                del size_of[u]

    yield from rec(0)
