"""Presheaves, morphisms, the gluing axiom, and basis extension.

A presheaf stores one value object per open plus a restriction morphism
for every inclusion pair.  The sheaf checker walks antichain coverings
(plus the empty covering of the empty set, which forces terminal
sections there) and reports every violation with witness data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping

from .canon import mapping_label, open_key, pair_label, sort_opens
from .errors import (
    CapExceeded,
    IncompatibleFamily,
    MalformedDiagram,
    MixedCategories,
    NotASheaf,
    NotIrreducible,
    ValueMismatch,
)
from .topology import Basis, Covering, FiniteSpace, PointSet, subspace
from .values import (
    Diagram,
    FINSET,
    LimitResult,
    Poset,
    ValueMorphism,
    ValueObject,
    compose,
    cyclic_group,
    enumerate_morphisms,
    finset,
    identity,
    limit,
    singleton,
)


def _open_of_key(key: str) -> PointSet:
    return frozenset(key.split(",")) if key else frozenset()


class Presheaf:
    """Sections per open plus restriction morphisms for every inclusion."""

    def __init__(
        self,
        space: FiniteSpace,
        category: str,
        sections: Mapping[PointSet, ValueObject],
        res: Mapping[tuple[PointSet, PointSet], ValueMorphism],
        validate: bool = True,
    ):
        self.space = space
        self.category = category
        self.sections = dict(sections)
        # keyed (smaller, larger): res[(U, V)] maps sections(V) -> sections(U)
        self.res = dict(res)
        if not validate:
            return
        for u in space.opens:
            if u not in self.sections:
                raise ValueMismatch(f"no sections over {open_key(u)!r}")
            if self.sections[u].category != category:
                raise MixedCategories(f"sections over {open_key(u)!r} in wrong category")
        for u, v in self.inclusion_pairs():
            if (u, v) not in self.res:
                raise ValueMismatch(f"no restriction for {open_key(u)!r} ⊆ {open_key(v)!r}")
            r = self.res[(u, v)]
            if r.source != self.sections[v] or r.target != self.sections[u]:
                raise ValueMismatch(
                    f"restriction for {open_key(u)!r} ⊆ {open_key(v)!r} connects wrong objects")

    def inclusion_pairs(self) -> list[tuple[PointSet, PointSet]]:
        return self.space.inclusion_pairs()

    def restrict(self, small: PointSet, large: PointSet) -> ValueMorphism:
        return self.res[(small, large)]

    def section_obj(self, u: Iterable[str]) -> ValueObject:
        return self.sections[self.space.require_open(u)]


def presheaf_from_function(
    space: FiniteSpace,
    category: str,
    section_at: Callable[[PointSet], ValueObject],
    restriction: Callable[[PointSet, PointSet], dict[str, str]],
) -> Presheaf:
    """Build a presheaf from callables giving sections and restriction tables."""
    sections = {u: section_at(u) for u in space.opens}
    res = {}
    for u in space.opens:
        for v in space.opens:
            if u <= v:
                res[(u, v)] = ValueMorphism(sections[v], sections[u], restriction(u, v))
    return Presheaf(space, category, sections, res)


def constant_presheaf(space: FiniteSpace, value: ValueObject) -> Presheaf:
    """The same object over every nonempty open, identity restrictions.

    Constancy only constrains nonempty opens, so the empty set carries the
    terminal object; anything else could never satisfy the gluing axiom's
    empty-covering consequence.
    """
    from .values import terminal_object

    bottom = terminal_object(value.category)
    (only,) = bottom.elements

    def section_at(u):
        return value if u else bottom

    def restriction(u, v):
        if u:
            return {a: a for a in value.elements}
        if v:
            return {a: only for a in value.elements}
        return {only: only}

    return presheaf_from_function(space, value.category, section_at, restriction)


@dataclass
class PresheafMorphism:
    """Per-open component maps commuting with restrictions."""

    source: Presheaf
    target: Presheaf
    components: dict[PointSet, ValueMorphism]

    def __post_init__(self):
        if self.source.space != self.target.space:
            raise ValueMismatch("morphism endpoints live on different spaces")
        if self.source.category != self.target.category:
            raise MixedCategories("morphism endpoints in different categories")
        for u in self.source.space.opens:
            if u not in self.components:
                raise ValueMismatch(f"missing component at {open_key(u)!r}")
            c = self.components[u]
            if c.source != self.source.sections[u] or c.target != self.target.sections[u]:
                raise ValueMismatch(f"component at {open_key(u)!r} connects wrong objects")
        for u, v in self.source.inclusion_pairs():
            left = compose(self.components[u], self.source.restrict(u, v))
            right = compose(self.target.restrict(u, v), self.components[v])
            if left.map != right.map:
                raise ValueMismatch(
                    f"component square fails at {open_key(u)!r} ⊆ {open_key(v)!r}")

    def component(self, u: Iterable[str]) -> ValueMorphism:
        return self.components[self.source.space.require_open(u)]

    def is_isomorphism(self) -> bool:
        return all(c.is_bijective() for c in self.components.values())

    def inverse(self) -> "PresheafMorphism":
        return PresheafMorphism(
            self.target, self.source,
            {u: c.inverse() for u, c in self.components.items()})

    def label(self) -> str:
        """Canonical label used to key Hom-set tables."""
        return pair_label(
            (open_key(u), mapping_label(c.map)) for u, c in self.components.items())


def identity_morphism(p: Presheaf) -> PresheafMorphism:
    return PresheafMorphism(p, p, {u: identity(p.sections[u]) for u in p.space.opens})


def compose_morphisms(outer: PresheafMorphism, inner: PresheafMorphism) -> PresheafMorphism:
    return PresheafMorphism(
        inner.source, outer.target,
        {u: compose(outer.components[u], inner.components[u])
         for u in inner.source.space.opens})


def morphisms_equal(u: PresheafMorphism, v: PresheafMorphism) -> bool:
    return all(u.components[w].map == v.components[w].map
               for w in u.source.space.opens)


def presheaves_equal(p: Presheaf, q: Presheaf) -> bool:
    """Structural table equality (not mere isomorphism)."""
    if p.space != q.space or p.category != q.category:
        return False
    if any(p.sections[u] != q.sections[u] for u in p.space.opens):
        return False
    return all(p.res[k].map == q.res[k].map for k in p.res)


def validate_presheaf(p: Presheaf) -> bool:
    """Identity and composition laws for the restriction morphisms."""
    for u in p.space.opens:
        if p.restrict(u, u).map != identity(p.sections[u]).map:
            return False
    opens = p.space.sorted_opens()
    for u in opens:
        for v in opens:
            if not u <= v:
                continue
            for w in opens:
                if not v <= w:
                    continue
                direct = p.restrict(u, w)
                via = compose(p.restrict(u, v), p.restrict(v, w))
                if direct.map != via.map:
                    return False
    return True


@dataclass
class SheafFailure:
    open_set: PointSet
    covering: Covering | None
    kind: str  # "G1" | "G2" | "EmptyNotTerminal"
    witness: dict


@dataclass
class SheafReport:
    verdict: bool
    failures: list[SheafFailure] = field(default_factory=list)


def _compatible_families(p: Presheaf, cov: Covering) -> Iterable[tuple[str, ...]]:
    """All families (s_α) agreeing on pairwise overlaps, in lex order.

    Families come back as tuples aligned with the covering's sorted parts.
    """
    parts = cov.parts
    overlaps = [
        (i, j, parts[i] & parts[j])
        for i in range(len(parts)) for j in range(i + 1, len(parts))
    ]
    for combo in product(*[p.sections[a].elements for a in parts]):
        ok = True
        for i, j, o in overlaps:
            if p.restrict(o, parts[i]).map[combo[i]] != p.restrict(o, parts[j]).map[combo[j]]:
                ok = False
                break
        if ok:
            yield combo


def _check_covering(p: Presheaf, u: PointSet, cov: Covering,
                    failures: list[SheafFailure] | None) -> bool:
    """G1 and G2 for one covering; returns verdict, appends witnesses."""
    parts = cov.parts
    if u == frozenset() and not parts:
        if len(p.sections[u]) != 1:
            if failures is not None:
                failures.append(SheafFailure(
                    u, cov, "EmptyNotTerminal",
                    {"sections": list(p.sections[u].elements)}))
            return False
        return True
    ok = True
    elems = p.sections[u].elements
    part_res = [p.restrict(a, u).map for a in parts]
    for i, s in enumerate(elems):
        for t in elems[i + 1:]:
            if all(r[s] == r[t] for r in part_res):
                ok = False
                if failures is None:
                    return False
                failures.append(SheafFailure(
                    u, cov, "G1", {"sections": [s, t]}))
    glued_images = {tuple(r[s] for r in part_res) for s in elems}
    for combo in _compatible_families(p, cov):
        if combo not in glued_images:
            ok = False
            if failures is None:
                return False
            failures.append(SheafFailure(
                u, cov, "G2",
                {"family": {open_key(a): s for a, s in zip(parts, combo)}}))
            break  # lexicographically least non-gluable family only
    return ok


def check_sheaf(p: Presheaf, coverings=None) -> SheafReport:
    """The gluing axiom over every antichain covering of every open.

    ``coverings`` may override the covering enumerator (the full
    power-set enumeration is the regression oracle for the antichain cut).
    """
    from .topology import enumerate_antichain_coverings

    if not validate_presheaf(p):
        raise ValueMismatch("presheaf fails functoriality; refusing to check the sheaf axiom")
    enum = coverings or enumerate_antichain_coverings
    failures: list[SheafFailure] = []
    for u in p.space.sorted_opens():
        for cov in enum(p.space, u):
            _check_covering(p, u, cov, failures)
    return SheafReport(not failures, failures)


def is_sheaf(p: Presheaf, coverings=None) -> bool:
    """Verdict-only sheaf check with early exit; used by the big oracles."""
    from .topology import enumerate_antichain_coverings

    enum = coverings or enumerate_antichain_coverings
    for u in p.space.sorted_opens():
        for cov in enum(p.space, u):
            if not _check_covering(p, u, cov, None):
                return False
    return True


def check_sheaf_by_representables(p: Presheaf, probes: list[ValueObject] | None = None) -> bool:
    """Sheaf test through the set-valued presheaves U ↦ Hom(T, F(U)).

    With a singleton probe (FinSet) this agrees with ``check_sheaf``.  For
    FinAb the default probes are the cyclic groups Z/1..Z/e, e the
    exponent of all section groups; this is a recorded heuristic and
    ``check_sheaf`` stays the authoritative verdict.
    """
    if not validate_presheaf(p):
        raise ValueMismatch("presheaf fails functoriality")
    if probes is None:
        if p.category == FINSET:
            probes = [singleton()]
        else:
            exponent = 1
            for u in p.space.opens:
                obj = p.sections[u]
                for a in obj.elements:
                    order, acc = 1, a
                    while acc != obj.zero:
                        acc = obj.add[(acc, a)]
                        order += 1
                    exponent = _lcm(exponent, order)
            probes = [cyclic_group(k) for k in range(1, exponent + 1)]
    for probe in probes:
        if probe.category != p.category:
            raise MixedCategories("probe lives in the wrong category")
        hom_objects = {
            u: finset([mapping_label(m.map)
                       for m in enumerate_morphisms(probe, p.sections[u])])
            for u in p.space.opens
        }
        hom_maps = {}
        for (u, v) in p.inclusion_pairs():
            table = {}
            for m in enumerate_morphisms(probe, p.sections[v]):
                table[mapping_label(m.map)] = mapping_label(
                    compose(p.restrict(u, v), m).map)
            hom_maps[(u, v)] = ValueMorphism(hom_objects[v], hom_objects[u], table)
        hom_presheaf = Presheaf(p.space, FINSET, hom_objects, hom_maps)
        if not is_sheaf(hom_presheaf):
            return False
    return True


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


def restrict_to_open(p: Presheaf, u: Iterable[str]) -> Presheaf:
    """The induced presheaf on the subspace carried by an open set."""
    su = p.space.require_open(u)
    sub = subspace(p.space, su)
    return Presheaf(
        sub, p.category,
        {v: p.sections[v] for v in sub.opens},
        {(v, w): p.res[(v, w)] for v in sub.opens for w in sub.opens if v <= w})


def restrict_morphism(m: PresheafMorphism, u: Iterable[str]) -> PresheafMorphism:
    su = m.source.space.require_open(u)
    return PresheafMorphism(
        restrict_to_open(m.source, su), restrict_to_open(m.target, su),
        {v: m.components[v] for v in m.source.space.opens if v <= su})


# -- presheaves over a basis -------------------------------------------------

class BasisPresheaf:
    """Sections and restrictions defined on basis opens only."""

    def __init__(
        self,
        basis: Basis,
        sections: Mapping[PointSet, ValueObject],
        res: Mapping[tuple[PointSet, PointSet], ValueMorphism],
    ):
        self.basis = basis
        self.sections = dict(sections)
        self.res = dict(res)
        cats = {o.category for o in self.sections.values()}
        if len(cats) > 1:
            raise MixedCategories(f"basis presheaf mixes {sorted(cats)}")
        self.category = next(iter(cats)) if cats else FINSET
        for b in basis.members:
            if b not in self.sections:
                raise ValueMismatch(f"no sections over basis open {open_key(b)!r}")
        for u, v in self.basis_pairs():
            if (u, v) not in self.res:
                raise ValueMismatch(f"no restriction for {open_key(u)!r} ⊆ {open_key(v)!r}")
            r = self.res[(u, v)]
            if r.source != self.sections[v] or r.target != self.sections[u]:
                raise ValueMismatch("basis restriction connects wrong objects")

    def basis_pairs(self) -> list[tuple[PointSet, PointSet]]:
        mem = self.basis.sorted_members()
        return [(u, v) for u in mem for v in mem if u <= v]

    def restrict(self, small: PointSet, large: PointSet) -> ValueMorphism:
        return self.res[(small, large)]

    def validate(self) -> bool:
        for b in self.basis.members:
            if self.restrict(b, b).map != identity(self.sections[b]).map:
                return False
        mem = self.basis.sorted_members()
        for u in mem:
            for v in mem:
                if not u <= v:
                    continue
                for w in mem:
                    if v <= w:
                        if self.restrict(u, w).map != compose(
                                self.restrict(u, v), self.restrict(v, w)).map:
                            return False
        return True


def restrict_to_basis(p: Presheaf, basis: Basis) -> BasisPresheaf:
    mem = basis.sorted_members()
    return BasisPresheaf(
        basis,
        {b: p.sections[b] for b in mem},
        {(u, v): p.res[(u, v)] for u in mem for v in mem if u <= v})


def _basis_antichain_coverings(bp: BasisPresheaf, u: PointSet) -> list[Covering]:
    """Antichain coverings of a basis open by basis opens inside it."""
    from itertools import combinations

    members = [v for v in bp.basis.members_within(u) if v]
    found: list[Covering] = []
    if not u:
        found.append(Covering(frozenset(), ()))
        if frozenset() in bp.basis.members:
            found.append(Covering(frozenset(), (frozenset(),)))
        return sorted(found, key=Covering.key)
    for r in range(1, len(members) + 1):
        for combo in combinations(members, r):
            if any(a < b or b < a for a in combo for b in combo):
                continue
            if frozenset().union(*combo) == u:
                found.append(Covering(u, combo))
    return sorted(found, key=Covering.key)


def check_F0(bp: BasisPresheaf) -> SheafReport:
    """The sheaf axiom over basis coverings, with overlap compatibility
    tested on every basis open inside each pairwise intersection."""
    if not bp.validate():
        raise ValueMismatch("basis presheaf fails functoriality")
    failures: list[SheafFailure] = []
    for u in bp.basis.sorted_members():
        for cov in _basis_antichain_coverings(bp, u):
            parts = sort_opens(cov.parts)
            if u == frozenset() and not parts:
                if len(bp.sections[u]) != 1:
                    failures.append(SheafFailure(
                        u, cov, "EmptyNotTerminal",
                        {"sections": list(bp.sections[u].elements)}))
                continue
            elems = bp.sections[u].elements
            for i, s in enumerate(elems):
                for t in elems[i + 1:]:
                    if all(bp.restrict(a, u).map[s] == bp.restrict(a, u).map[t]
                           for a in parts):
                        failures.append(SheafFailure(u, cov, "G1", {"sections": [s, t]}))
            glueable = {
                pair_label((open_key(a), bp.restrict(a, u).map[s]) for a in parts)
                for s in elems
            }
            for combo in product(*[bp.sections[a].elements for a in parts]):
                fam = dict(zip(parts, combo))
                compatible = True
                for i, a in enumerate(parts):
                    for b in parts[i + 1:]:
                        for w in bp.basis.members_within(a & b):
                            if bp.restrict(w, a).map[fam[a]] != bp.restrict(w, b).map[fam[b]]:
                                compatible = False
                                break
                        if not compatible:
                            break
                    if not compatible:
                        break
                if not compatible:
                    continue
                key = pair_label((open_key(a), fam[a]) for a in parts)
                if key not in glueable:
                    failures.append(SheafFailure(
                        u, cov, "G2",
                        {"family": {open_key(a): fam[a] for a in parts}}))
                    break
    return SheafReport(not failures, failures)


@dataclass
class BasisExtension:
    """A presheaf built from basis data by open-wise projective limits."""

    presheaf: Presheaf
    source: BasisPresheaf
    # per open U, the limit over basis opens inside U
    limits: dict[PointSet, LimitResult]

    def can(self, u: PointSet) -> ValueMorphism:
        """Canonical projection F′(U) → F(U) for a basis open; a bijection."""
        return self.limits[u].projections[open_key(u)]


def _basis_diagram(bp: BasisPresheaf, u: PointSet) -> Diagram:
    members = bp.basis.members_within(u)
    names = {open_key(v): v for v in members}
    poset = Poset.from_pairs(
        names.keys(),
        [(open_key(a), open_key(b)) for a in members for b in members if a < b])
    arrows = {
        (i, j): bp.restrict(names[i], names[j])
        for (i, j) in poset.pairs_below()
    }
    return Diagram(poset, {i: bp.sections[names[i]] for i in names}, arrows,
                   category_hint=bp.category)


def extend_from_basis(bp: BasisPresheaf) -> BasisExtension:
    """F′(U) = limit of sections over basis opens inside U.

    The canonical projection at a basis open is always a bijection; if the
    basis data passes ``check_F0`` the extension passes ``check_sheaf``.
    """
    if not bp.validate():
        raise ValueMismatch("basis presheaf fails functoriality")
    space = bp.basis.space
    limits: dict[PointSet, LimitResult] = {}
    diagrams: dict[PointSet, Diagram] = {}
    for u in space.opens:
        diagrams[u] = _basis_diagram(bp, u)
        limits[u] = limit(diagrams[u])
    sections = {u: limits[u].object for u in space.opens}
    res: dict[tuple[PointSet, PointSet], ValueMorphism] = {}
    for u in space.opens:
        for v in space.opens:
            if not u <= v:
                continue
            # restriction = mediating morphism of the subfamily cone
            table = {}
            for label, fam in limits[v].families.items():
                sub = {i: fam[i] for i in diagrams[u].index.elements}
                table[label] = pair_label(sub.items())
            res[(u, v)] = ValueMorphism(sections[v], sections[u], table)
    return BasisExtension(Presheaf(space, bp.category, sections, res), bp, limits)


def extend_morphism_from_basis(
    components: Mapping[PointSet, ValueMorphism],
    source: BasisExtension,
    target: BasisExtension,
) -> PresheafMorphism:
    """Extend a basis-indexed family of maps to the whole extension.

    The family must commute with basis restrictions; the result is the
    unique morphism agreeing with it under the canonical identifications.
    """
    bs, bt = source.source, target.source
    members = bs.basis.sorted_members()
    for b in members:
        if b not in components:
            raise IncompatibleFamily(f"family misses basis open {open_key(b)!r}")
    for u in members:
        for v in members:
            if u <= v:
                left = compose(components[u], bs.restrict(u, v))
                right = compose(bt.restrict(u, v), components[v])
                if left.map != right.map:
                    raise IncompatibleFamily(
                        f"family square fails at {open_key(u)!r} ⊆ {open_key(v)!r}")
    space = bs.basis.space
    out = {}
    for w in space.opens:
        table = {}
        for label, fam in source.limits[w].families.items():
            image = {i: components[_open_of_key(i)].map[fam[i]] for i in fam}
            table[label] = pair_label(image.items())
        out[w] = ValueMorphism(source.presheaf.sections[w], target.presheaf.sections[w], table)
    return PresheafMorphism(source.presheaf, target.presheaf, out)


def morphism_determined_by_basis(
    u: PresheafMorphism, v: PresheafMorphism, basis: Basis
) -> bool:
    """True iff the morphisms agree on every basis open.

    For morphisms of sheaves, agreement on a basis forces agreement
    everywhere; that stronger fact is asserted here when it applies.
    """
    agree = all(u.components[b].map == v.components[b].map for b in basis.members)
    if agree and is_sheaf(u.source) and is_sheaf(u.target):
        if not morphisms_equal(u, v):
            raise AssertionError(
                "sheaf morphisms agree on a basis but differ on some open; "
                "this contradicts basis determination")
    return agree


# -- round trips and nested bases -------------------------------------------

def basis_round_trip(p: Presheaf, basis: Basis) -> tuple[BasisExtension, PresheafMorphism, PresheafMorphism]:
    """Restrict a sheaf to a basis, extend back, and return (ext, θ, ψ).

    θ sends a section to its family of basis restrictions; ψ glues a
    compatible family back to the unique section restricting to it.  Both
    composites are identities when ``p`` is a sheaf.
    """
    bp = restrict_to_basis(p, basis)
    ext = extend_from_basis(bp)
    theta_comp, psi_comp = {}, {}
    for u in p.space.opens:
        members = basis.members_within(u)
        theta_table = {}
        for s in p.sections[u].elements:
            fam = {open_key(v): p.restrict(v, u).map[s] for v in members}
            theta_table[s] = pair_label(fam.items())
        theta_comp[u] = ValueMorphism(p.sections[u], ext.presheaf.sections[u], theta_table)
        psi_table = {}
        for label, fam in ext.limits[u].families.items():
            matches = [
                s for s in p.sections[u].elements
                if all(p.restrict(v, u).map[s] == fam[open_key(v)] for v in members)
            ]
            if len(matches) != 1:
                raise NotASheaf(
                    f"family over {open_key(u)!r} glues to {len(matches)} sections")
            psi_table[label] = matches[0]
        psi_comp[u] = ValueMorphism(ext.presheaf.sections[u], p.sections[u], psi_table)
    theta = PresheafMorphism(p, ext.presheaf, theta_comp)
    psi = PresheafMorphism(ext.presheaf, p, psi_comp)
    return ext, theta, psi


def nested_basis_comparison(
    bp: BasisPresheaf, subbasis: Basis
) -> tuple[BasisExtension, BasisExtension, PresheafMorphism, PresheafMorphism]:
    """Extensions along a basis and a sub-basis of it, with the ζ/ξ pair.

    ζ drops a compatible family to the sub-basis; ξ rebuilds the dropped
    components by gluing over sub-basis coverings, which needs the basis
    data to satisfy the gluing condition.
    """
    if not subbasis.members <= bp.basis.members:
        raise ValueMismatch("second basis is not contained in the first")
    if not check_F0(bp).verdict:
        raise ValueMismatch("basis data fails the gluing condition")
    sub_bp = BasisPresheaf(
        subbasis,
        {b: bp.sections[b] for b in subbasis.members},
        {(u, v): bp.res[(u, v)]
         for u in subbasis.members for v in subbasis.members if u <= v})
    big = extend_from_basis(bp)
    small = extend_from_basis(sub_bp)
    space = bp.basis.space
    zeta_comp, xi_comp = {}, {}
    for w in space.opens:
        sub_members = subbasis.members_within(w)
        zeta_table = {}
        for label, fam in big.limits[w].families.items():
            sub = {open_key(v): fam[open_key(v)] for v in sub_members}
            zeta_table[label] = pair_label(sub.items())
        zeta_comp[w] = ValueMorphism(
            big.presheaf.sections[w], small.presheaf.sections[w], zeta_table)
        xi_table = {}
        big_members = bp.basis.members_within(w)
        for label, fam in small.limits[w].families.items():
            rebuilt = {}
            for v in big_members:
                candidates = [
                    s for s in bp.sections[v].elements
                    if all(bp.restrict(x, v).map[s] == fam[open_key(x)]
                           for x in subbasis.members_within(v))
                ]
                if len(candidates) != 1:
                    raise ValueMismatch(
                        f"sub-basis family over {open_key(w)!r} lifts to "
                        f"{len(candidates)} sections at {open_key(v)!r}")
                rebuilt[open_key(v)] = candidates[0]
            xi_table[label] = pair_label(rebuilt.items())
        xi_comp[w] = ValueMorphism(
            small.presheaf.sections[w], big.presheaf.sections[w], xi_table)
    zeta = PresheafMorphism(big.presheaf, small.presheaf, zeta_comp)
    xi = PresheafMorphism(small.presheaf, big.presheaf, xi_comp)
    return big, small, zeta, xi


# -- projective limits of sheaves --------------------------------------------

@dataclass
class SheafDiagram:
    """A poset-indexed system of sheaves on one space."""

    index: Poset
    sheaves: dict[str, Presheaf]
    arrows: dict[tuple[str, str], PresheafMorphism]

    def __post_init__(self):
        spaces = {s.space for s in self.sheaves.values()}
        if len(spaces) > 1:
            raise MalformedDiagram("sheaves live on different spaces")
        for i in self.index.elements:
            if i not in self.sheaves:
                raise MalformedDiagram(f"no sheaf at index {i!r}")
        for (i, j), arr in self.arrows.items():
            if i == j and not morphisms_equal(arr, identity_morphism(self.sheaves[i])):
                raise MalformedDiagram(f"explicit arrow at ({i!r}, {i!r}) is not the identity")
        for (i, j) in self.index.pairs_below():
            if (i, j) not in self.arrows:
                raise MalformedDiagram(f"missing arrow for {i!r} <= {j!r}")
            arr = self.arrows[(i, j)]
            if arr.source is not self.sheaves[j] or arr.target is not self.sheaves[i]:
                if not (presheaves_equal(arr.source, self.sheaves[j])
                        and presheaves_equal(arr.target, self.sheaves[i])):
                    raise MalformedDiagram(f"arrow at ({i!r}, {j!r}) connects wrong sheaves")
        for (i, j) in self.index.pairs_below():
            for k in self.index.elements:
                if k != i and k != j and self.index.leq(i, k) and self.index.leq(k, j):
                    via = compose_morphisms(self.arrows[(i, k)], self.arrows[(k, j)])
                    if not morphisms_equal(via, self.arrows[(i, j)]):
                        raise MalformedDiagram(
                            f"composite through {k!r} disagrees on ({i!r}, {j!r})")
        for i, s in self.sheaves.items():
            if not is_sheaf(s):
                raise MalformedDiagram(f"node {i!r} is not a sheaf")


@dataclass
class SheafLimit:
    presheaf: Presheaf
    projections: dict[str, PresheafMorphism]
    limits: dict[PointSet, LimitResult]
    diagram: SheafDiagram


def limit_of_sheaves(d: SheafDiagram) -> SheafLimit:
    """Open-wise projective limit; the result is again a sheaf."""
    space = next(iter(d.sheaves.values())).space if d.sheaves else None
    if space is None:
        raise MalformedDiagram("empty sheaf diagram needs a space; supply one sheaf")
    category = next(iter(d.sheaves.values())).category
    limits: dict[PointSet, LimitResult] = {}
    for u in space.opens:
        dg = Diagram(
            d.index,
            {i: d.sheaves[i].sections[u] for i in d.index.elements},
            {(i, j): d.arrows[(i, j)].components[u] for (i, j) in d.index.pairs_below()})
        limits[u] = limit(dg)
    sections = {u: limits[u].object for u in space.opens}
    res = {}
    for u in space.opens:
        for v in space.opens:
            if not u <= v:
                continue
            table = {}
            for label, fam in limits[v].families.items():
                image = {i: d.sheaves[i].restrict(u, v).map[fam[i]]
                         for i in d.index.elements}
                table[label] = pair_label(image.items())
            res[(u, v)] = ValueMorphism(sections[v], sections[u], table)
    out = Presheaf(space, category, sections, res)
    projections = {
        i: PresheafMorphism(
            out, d.sheaves[i],
            {u: limits[u].projections[i] for u in space.opens})
        for i in d.index.elements
    }
    return SheafLimit(out, projections, limits, d)


def mediating_sheaf_morphism(lim: SheafLimit, cone: Mapping[str, PresheafMorphism]) -> PresheafMorphism:
    """The unique morphism into a sheaf limit factoring a commuting cone."""
    d = lim.diagram
    if set(cone) != set(d.index.elements):
        raise IncompatibleFamily("cone must give one morphism per index")
    tip = next(iter(cone.values())).source
    for (i, j) in d.index.pairs_below():
        if not morphisms_equal(compose_morphisms(d.arrows[(i, j)], cone[j]), cone[i]):
            raise IncompatibleFamily(f"cone does not commute over ({i!r}, {j!r})")
    comp = {}
    for u in tip.space.opens:
        table = {}
        for t in tip.sections[u].elements:
            fam = {i: cone[i].components[u].map[t] for i in d.index.elements}
            table[t] = pair_label(fam.items())
        comp[u] = ValueMorphism(tip.sections[u], lim.presheaf.sections[u], table)
    return PresheafMorphism(tip, lim.presheaf, comp)


def enumerate_presheaf_morphisms(p: Presheaf, q: Presheaf,
                                 max_homs: int = 10 ** 6) -> list[PresheafMorphism]:
    """All presheaf morphisms p → q, deterministically ordered.

    The candidate count is the product of the per-open Hom sizes; going
    over ``max_homs`` raises rather than silently sampling.
    """
    if p.space != q.space:
        raise ValueMismatch("presheaves live on different spaces")
    opens = p.space.sorted_opens()
    per_open = {}
    total = 1
    for u in opens:
        per_open[u] = enumerate_morphisms(p.sections[u], q.sections[u],
                                          max_homs=max_homs)
        total *= max(1, len(per_open[u]))
        if total > max_homs:
            raise CapExceeded(f"Hom enumeration exceeds cap {max_homs}")
    out: list[PresheafMorphism] = []

    def extend(i: int, chosen: dict[PointSet, ValueMorphism]):
        if i == len(opens):
            out.append(PresheafMorphism(p, q, dict(chosen)))
            return
        u = opens[i]
        for cand in per_open[u]:
            ok = True
            for v in opens[:i + 1]:
                if v <= u:
                    small = chosen.get(v, cand if v == u else None)
                    if small is None:
                        continue
                    left = compose(small, p.restrict(v, u))
                    right = compose(q.restrict(v, u), cand)
                    if left.map != right.map:
                        ok = False
                        break
                elif u <= v:
                    big = chosen[v]
                    left = compose(cand, p.restrict(u, v))
                    right = compose(q.restrict(u, v), big)
                    if left.map != right.map:
                        ok = False
                        break
            if ok:
                chosen[u] = cand
                extend(i + 1, chosen)
                del chosen[u]

    extend(0, {})
    return out


# -- constant presheaves and the irreducible-space equivalence ---------------

def is_constant_presheaf(p: Presheaf) -> bool:
    """Restrictions from the whole space to nonempty opens are all bijective."""
    if not validate_presheaf(p):
        raise ValueMismatch("presheaf fails functoriality")
    total = p.space.points
    return all(
        p.restrict(u, total).is_bijective()
        for u in p.space.opens if u)


@dataclass
class SimpleCheckReport:
    is_constant: bool
    sheaf_when_constant: bool | None
    unit_iso_when_constant: bool | None
    locally_simple: bool
    constant_forced: bool | None
    verdict: bool


def check_simple_equivalence(p: Presheaf) -> SimpleCheckReport:
    """On an irreducible space: constant ⇒ sheaf with iso unit, and
    locally simple ⇒ constant; both verified exhaustively on the instance."""
    from .topology import is_irreducible
    from .functors import sheafify

    if not is_irreducible(p.space):
        raise NotIrreducible("space is empty or has disjoint nonempty opens")
    constant = is_constant_presheaf(p)
    sheaf_ok = unit_iso = None
    if constant:
        sheaf_ok = is_sheaf(p)
        inv = sheafify(p)
        unit_iso = inv.unit.is_isomorphism()
    locally = True
    for x in sorted(p.space.points):
        has = False
        for u in p.space.sorted_opens():
            if x not in u:
                continue
            restricted = restrict_to_open(p, u)
            # nonempty opens of an irreducible space are irreducible, so
            # "simple on u" reduces to "constant and a sheaf on u"
            if is_constant_presheaf(restricted) and is_sheaf(restricted):
                has = True
                break
        if not has:
            locally = False
            break
    forced = None
    if locally and p.space.points:
        forced = constant
    verdict = True
    if constant and not (sheaf_ok and unit_iso):
        verdict = False
    if locally and forced is False:
        verdict = False
    return SimpleCheckReport(constant, sheaf_ok, unit_iso, locally, forced, verdict)
