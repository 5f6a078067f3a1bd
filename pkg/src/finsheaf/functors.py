"""Direct and inverse images, the adjunction calculus, and sheafification.

The inverse image is built concretely: a section over an open U of the
source is a family of germs, one per point, that locally comes from a
single section downstairs.  On finite spaces membership reduces to a
propagation rule along minimal opens; the verbatim exists-(V,W,t)
definition is kept as the oracle for that rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .canon import open_key, pair_label
from .errors import (
    IncompatibleFamily,
    NotASheaf,
    NotContinuous,
    NotInverseImagePair,
    WrongCategory,
)
from .presheaf import (
    Presheaf,
    PresheafMorphism,
    compose_morphisms,
    enumerate_presheaf_morphisms,
    identity_morphism,
    is_sheaf,
    morphisms_equal,
    restrict_to_open,
    validate_presheaf,
)
from .stalks import stalk, support
from .topology import (
    ContinuousMap,
    PointSet,
    closure,
    identity_map,
    minimal_open,
    require_continuous as _require_continuous,
)
from .values import FINAB, FINSET, ValueMorphism, ValueObject, compose


# -- direct image -------------------------------------------------------------

def pushforward(psi: ContinuousMap, f: Presheaf) -> Presheaf:
    """The presheaf U ↦ F(ψ⁻¹(U)) on the target; sheaf in, sheaf out."""
    _require_continuous(psi)
    if f.space != psi.source:
        raise NotContinuous("presheaf does not live on the map's source")
    y = psi.target
    sections = {u: f.sections[psi.preimage(u)] for u in y.opens}
    res = {
        (u, v): f.res[(psi.preimage(u), psi.preimage(v))]
        for u in y.opens for v in y.opens if u <= v
    }
    return Presheaf(y, f.category, sections, res)


def pushforward_morphism(psi: ContinuousMap, u: PresheafMorphism) -> PresheafMorphism:
    """Componentwise direct image of a morphism; functorial."""
    _require_continuous(psi)
    return PresheafMorphism(
        pushforward(psi, u.source), pushforward(psi, u.target),
        {v: u.components[psi.preimage(v)] for v in psi.target.opens})


def stalk_comparison(psi: ContinuousMap, f: Presheaf, x: str) -> ValueMorphism:
    """The canonical map (ψ_*F)_{ψ(x)} → F_x.

    Realized on minimal opens this is the restriction from the preimage of
    the minimal open at ψ(x) down to the minimal open at x.
    """
    _require_continuous(psi)
    psi.source.require_point(x)
    m_x = minimal_open(psi.source, x)
    n_y = minimal_open(psi.target, psi(x))
    return f.restrict(m_x, psi.preimage(n_y))


def is_homeomorphism_onto_image(psi: ContinuousMap) -> bool:
    """Injective, and every source open is the preimage of a target open."""
    if len(set(psi.assignment.values())) != len(psi.source.points):
        return False
    return all(
        any(psi.preimage(u) == v for u in psi.target.opens)
        for v in psi.source.opens)


def stalk_comparison_inverse(psi: ContinuousMap, f: Presheaf, x: str) -> ValueMorphism:
    """Two-sided inverse of the stalk comparison for embeddings.

    Exists whenever ψ is a homeomorphism onto its image; there the
    preimage of the minimal open at ψ(x) is exactly the minimal open at x
    and both composites are identities.
    """
    if not is_homeomorphism_onto_image(psi):
        raise NotContinuous("map is not a homeomorphism onto its image")
    return stalk_comparison(psi, f, x).inverse()


def pushforward_support_bound(psi: ContinuousMap, f: Presheaf) -> bool:
    """Checks Supp(ψ_*F) ⊆ closure(ψ(Supp F)) and returns the verdict."""
    if f.category != FINAB:
        raise WrongCategory("support bound needs a FinAb presheaf")
    _require_continuous(psi)
    s = support(f)
    bound = closure(psi.target, psi.image(s))
    return support(pushforward(psi, f)) <= bound


# -- ψ-morphisms --------------------------------------------------------------

@dataclass
class PsiMorphism:
    """A morphism G → ψ_*(F), i.e. a map of presheaves across ψ."""

    psi: ContinuousMap
    source: Presheaf  # G, on the target space of psi
    target: Presheaf  # F, on the source space of psi
    body: PresheafMorphism  # G -> pushforward(psi, F)

    def pair_component(self, u: PointSet, v: PointSet) -> ValueMorphism:
        """u_{U,V}: G(V) → F(U) for ψ(U) ⊆ V, via the body and restriction."""
        return compose(self.target.restrict(u, self.psi.preimage(v)),
                       self.body.components[v])


def psi_morphism_from_family(
    psi: ContinuousMap,
    g: Presheaf,
    f: Presheaf,
    family: dict[tuple[PointSet, PointSet], ValueMorphism],
    bases: tuple | None = None,
) -> PsiMorphism:
    """Assemble a ψ-morphism from maps u_{U,V}: G(V) → F(U), ψ(U) ⊆ V.

    With ``bases`` = (basis of X, basis of Y) the family only covers basis
    pairs and F, G must be sheaves; sections are then glued through the
    basis identifications.  Without it the family must cover all pairs
    and the morphism is read off as u_V = u_{ψ⁻¹(V), V}.
    """
    _require_continuous(psi)
    x_space, y_space = psi.source, psi.target

    def check_square(u, v, u2, v2):
        # (U2,V2) below (U,V): restrict after vs before
        left = compose(f.restrict(u2, u), family[(u, v)])
        right = compose(family[(u2, v2)], g.restrict(v2, v))
        if left.map != right.map:
            raise IncompatibleFamily(
                f"square fails at ({open_key(u)!r},{open_key(v)!r}) ⊇ "
                f"({open_key(u2)!r},{open_key(v2)!r})")

    if bases is None:
        pairs = [(u, v) for u in x_space.sorted_opens() for v in y_space.sorted_opens()
                 if psi.image(u) <= v]
        for (u, v) in pairs:
            if (u, v) not in family:
                raise IncompatibleFamily(
                    f"family misses pair ({open_key(u)!r}, {open_key(v)!r})")
        for (u, v) in pairs:
            for (u2, v2) in pairs:
                if u2 <= u and v2 <= v:
                    check_square(u, v, u2, v2)
        components = {v: family[(psi.preimage(v), v)] for v in y_space.opens}
        body = PresheafMorphism(g, pushforward(psi, f), components)
        return PsiMorphism(psi, g, f, body)

    basis_x, basis_y = bases
    if not (is_sheaf(f) and is_sheaf(g)):
        raise NotASheaf("the basis variant needs sheaves on both sides")
    pairs = [(u, v) for u in basis_x.sorted_members() for v in basis_y.sorted_members()
             if psi.image(u) <= v]
    for pv in pairs:
        if pv not in family:
            raise IncompatibleFamily(
                f"family misses basis pair ({open_key(pv[0])!r}, {open_key(pv[1])!r})")
    for (u, v) in pairs:
        for (u2, v2) in pairs:
            if u2 <= u and v2 <= v:
                check_square(u, v, u2, v2)
    pf = pushforward(psi, f)
    components = {}
    for w in y_space.sorted_opens():
        table = {}
        for s in g.sections[w].elements:
            # double gluing: first over basis opens of X inside each
            # preimage, then over basis opens of Y inside w
            candidates = [
                t for t in f.sections[psi.preimage(w)].elements
                if all(
                    f.restrict(u, psi.preimage(w)).map[t]
                    == family[(u, v)].map[g.restrict(v, w).map[s]]
                    for (u, v) in pairs if v <= w
                )
            ]
            if len(candidates) != 1:
                raise IncompatibleFamily(
                    f"family does not glue at {open_key(w)!r}: "
                    f"{len(candidates)} candidates for {s!r}")
            table[s] = candidates[0]
        components[w] = ValueMorphism(g.sections[w], pf.sections[w], table)
    body = PresheafMorphism(g, pf, components)
    return PsiMorphism(psi, g, f, body)


# -- inverse image ------------------------------------------------------------

@dataclass
class InverseImage:
    """An inverse-image pair: the sheaf upstairs plus its unit ψ-morphism.

    ``families`` maps each open's section labels back to the underlying
    germ families; it is populated by ``pullback`` and absent on pairs
    assembled by hand.
    """

    psi: ContinuousMap
    source: Presheaf          # G on Y
    sheaf: Presheaf           # ψ*G on X
    unit: PresheafMorphism    # G -> ψ_*(ψ*G), a morphism on Y
    families: dict[PointSet, dict[str, dict[str, str]]] | None = None

    def as_psi_morphism(self) -> PsiMorphism:
        return PsiMorphism(self.psi, self.source, self.sheaf, self.unit)


def _germ_family_label(fam: dict[str, str]) -> str:
    return pair_label(fam.items())


def pullback_section_valid(psi: ContinuousMap, g: Presheaf, u: PointSet,
                           fam: dict[str, str]) -> bool:
    """Fast membership test: germs propagate along minimal opens.

    ``fam[x]`` is a germ at ψ(x), labeled by its value over the minimal
    open there.  The family is a section iff for every x the germ of its
    canonical representative matches the family at every point of the
    minimal open of x.
    """
    x_space = psi.source
    for x in u:
        m_x = minimal_open(x_space, x)
        v_x = minimal_open(psi.target, psi(x))
        for z in m_x:
            v_z = minimal_open(psi.target, psi(z))
            if fam[z] != g.restrict(v_z, v_x).map[fam[x]]:
                return False
    return True


def pullback_section_valid_oracle(psi: ContinuousMap, g: Presheaf, u: PointSet,
                                  fam: dict[str, str]) -> bool:
    """Verbatim membership: for each point an (open V, open W, section t)
    must exist with the germs of t matching the family throughout W."""
    x_space, y_space = psi.source, psi.target
    for x in u:
        found = False
        for v in y_space.sorted_opens():
            if psi(x) not in v:
                continue
            for w in x_space.sorted_opens():
                if x not in w or not w <= (u & psi.preimage(v)):
                    continue
                for t in g.sections[v].elements:
                    if all(
                        fam[z] == g.restrict(minimal_open(y_space, psi(z)), v).map[t]
                        for z in w
                    ):
                        found = True
                        break
                if found:
                    break
            if found:
                break
        if not found:
            return False
    return True


def pullback(psi: ContinuousMap, g: Presheaf) -> InverseImage:
    """The inverse image sheaf of G along ψ, with its unit.

    Sections over U are the locally-germ-coherent families (one germ at
    ψ(x) per x ∈ U); restrictions drop coordinates; the unit sends a
    section downstairs to its family of germs.
    """
    _require_continuous(psi)
    if g.space != psi.target:
        raise NotContinuous("presheaf does not live on the map's target")
    if not validate_presheaf(g):
        raise NotASheaf("inverse image needs a functorial presheaf downstairs")
    x_space = psi.source
    stalk_objects = {x: stalk(g, psi(x)).object for x in x_space.points}

    section_families: dict[PointSet, dict[str, dict[str, str]]] = {}
    sections: dict[PointSet, ValueObject] = {}
    for u in x_space.sorted_opens():
        pts = sorted(u)
        families = {}
        for combo in product(*[stalk_objects[x].elements for x in pts]):
            fam = dict(zip(pts, combo))
            if pullback_section_valid(psi, g, u, fam):
                families[_germ_family_label(fam)] = fam
        section_families[u] = families
        labels = tuple(sorted(families))
        if g.category == FINAB:
            add = {}
            for la, lb in product(labels, repeat=2):
                s = {
                    x: stalk_objects[x].add[(families[la][x], families[lb][x])]
                    for x in pts
                }
                add[(la, lb)] = _germ_family_label(s)
            zero = _germ_family_label({x: stalk_objects[x].zero for x in pts})
            sections[u] = ValueObject(FINAB, labels, add=add, zero=zero)
        else:
            sections[u] = ValueObject(FINSET, labels)

    res = {}
    for u in x_space.opens:
        for v in x_space.opens:
            if not u <= v:
                continue
            table = {}
            for label, fam in section_families[v].items():
                table[label] = _germ_family_label({x: fam[x] for x in u})
            res[(u, v)] = ValueMorphism(sections[v], sections[u], table)
    sheaf = Presheaf(x_space, g.category, sections, res)

    # unit: a section downstairs goes to its germ at ψ(x) for each x upstairs
    pf = pushforward(psi, sheaf)
    unit_components = {}
    for v in psi.target.opens:
        pre = psi.preimage(v)
        table = {}
        for s in g.sections[v].elements:
            fam = {
                x: g.restrict(minimal_open(psi.target, psi(x)), v).map[s]
                for x in pre
            }
            table[s] = _germ_family_label(fam)
        unit_components[v] = ValueMorphism(g.sections[v], pf.sections[v], table)
    unit = PresheafMorphism(g, pf, unit_components)
    return InverseImage(psi, g, sheaf, unit, section_families)


def sheafify(g: Presheaf) -> InverseImage:
    """The sheaf associated to a presheaf: pullback along the identity."""
    return pullback(identity_map(g.space), g)


# -- the adjunction calculus ---------------------------------------------------

def _require_sheaf(f: Presheaf) -> Presheaf:
    verdict = getattr(f, "_sheaf_memo", None)
    if verdict is None:
        verdict = is_sheaf(f)
        f._sheaf_memo = verdict
    if not verdict:
        raise NotASheaf("operation needs a sheaf here")
    return f


def sharp(u: PsiMorphism, inv: InverseImage) -> PresheafMorphism:
    """Transpose a ψ-morphism G → F across the inverse-image pair.

    Produces the unique ν: ψ*G → F with ψ_*(ν) ∘ unit = u, by gluing the
    images of canonical germ representatives over minimal opens.  Pairs
    without recorded germ families go through the stalkwise route.
    """
    if inv.families is None:
        return _sharp_generic(u, inv)
    f = _require_sheaf(u.target)
    psi = u.psi
    x_space = psi.source
    components = {}
    for w in x_space.sorted_opens():
        table = {}
        for label in inv.sheaf.sections[w].elements:
            fam = inv.families[w][label]
            pieces = {}
            for p in sorted(w):
                v_p = minimal_open(psi.target, psi(p))
                w_p = minimal_open(x_space, p)
                t_p = fam[p]  # canonical representative over v_p
                pieces[p] = compose(
                    f.restrict(w_p, psi.preimage(v_p)), u.body.components[v_p]
                ).map[t_p]
            candidates = [
                t for t in f.sections[w].elements
                if all(f.restrict(minimal_open(x_space, p), w).map[t] == pieces[p]
                       for p in sorted(w))
            ]
            if len(candidates) != 1:
                raise NotASheaf(
                    f"germ pieces over {open_key(w)!r} glue to {len(candidates)} sections")
            table[label] = candidates[0]
        components[w] = ValueMorphism(inv.sheaf.sections[w], f.sections[w], table)
    return PresheafMorphism(inv.sheaf, f, components)


def flat(nu: PresheafMorphism, inv: InverseImage) -> PsiMorphism:
    """The other transposition: ν ↦ ψ_*(ν) ∘ unit."""
    body = compose_morphisms(pushforward_morphism(inv.psi, nu), inv.unit)
    return PsiMorphism(inv.psi, inv.source, nu.target, body)


def pullback_of_morphism(psi: ContinuousMap, u: PresheafMorphism,
                         source_inv: InverseImage | None = None,
                         target_inv: InverseImage | None = None) -> PresheafMorphism:
    """ψ*(u) for u: G₁ → G₂, as sharp of (unit₂ ∘ u)."""
    src = source_inv or pullback(psi, u.source)
    tgt = target_inv or pullback(psi, u.target)
    composite = PsiMorphism(
        psi, u.source, tgt.sheaf, compose_morphisms(tgt.unit, u))
    return sharp(composite, src)


def counit(f: Presheaf, psi: ContinuousMap,
           inv: InverseImage | None = None) -> PresheafMorphism:
    """σ_F = (identity of ψ_*F)♯ : ψ*ψ_*F → F."""
    _require_sheaf(f)
    pf = pushforward(psi, f)
    inv = inv or pullback(psi, pf)
    ident = PsiMorphism(psi, pf, f, identity_morphism(pf))
    return sharp(ident, inv)


@dataclass
class AdjunctionWitness:
    forward: dict[str, str]   # label of ν ∈ Hom_X(ψ*G, F) -> label of ν♭
    backward: dict[str, str]  # label of u ∈ Hom_Y(G, ψ_*F) -> label of u♯
    hom_upstairs: int
    hom_downstairs: int
    verdict: bool


def check_adjunction(psi: ContinuousMap, g: Presheaf, f: Presheaf,
                     naturality_probe: PresheafMorphism | None = None,
                     max_homs: int = 10 ** 6) -> AdjunctionWitness:
    """Enumerate both Hom-sets and verify ♭ and ♯ are mutually inverse.

    ``naturality_probe`` is a morphism F → F₂ of sheaves used to check the
    transposition commutes with postcomposition.
    """
    _require_sheaf(f)
    inv = pullback(psi, g)
    upstairs = enumerate_presheaf_morphisms(inv.sheaf, f, max_homs=max_homs)
    downstairs = enumerate_presheaf_morphisms(g, pushforward(psi, f), max_homs=max_homs)
    down_labels = {m.label(): m for m in downstairs}
    up_labels = {m.label(): m for m in upstairs}
    forward, backward = {}, {}
    verdict = True
    for nu in upstairs:
        image = flat(nu, inv).body
        lbl = image.label()
        forward[nu.label()] = lbl
        if lbl not in down_labels:
            verdict = False
    for u in downstairs:
        image = sharp(PsiMorphism(psi, g, f, u), inv)
        lbl = image.label()
        backward[u.label()] = lbl
        if lbl not in up_labels:
            verdict = False
    if verdict:
        verdict = (
            len(upstairs) == len(downstairs)
            and all(backward[forward[k]] == k for k in forward)
            and all(forward[backward[k]] == k for k in backward)
        )
    if verdict and naturality_probe is not None:
        w = naturality_probe
        _require_sheaf(w.target)
        for nu in upstairs:
            left = flat(compose_morphisms(w, nu), inv).body
            right = compose_morphisms(pushforward_morphism(psi, w), flat(nu, inv).body)
            if not morphisms_equal(left, right):
                verdict = False
                break
    return AdjunctionWitness(forward, backward, len(upstairs), len(downstairs), verdict)


# -- canonical comparisons ------------------------------------------------------

def _sharp_generic(u: PsiMorphism, pair: InverseImage) -> PresheafMorphism:
    """Transpose across an arbitrary claimed inverse-image pair.

    Works stalkwise: the pair's fiber identification β_x must be
    bijective; the image section is then the unique one with the
    transported germs.  Raises when the pair fails to behave like an
    inverse image.
    """
    f = _require_sheaf(u.target)
    psi = pair.psi
    x_space = psi.source
    h = pair.sheaf
    beta: dict[str, ValueMorphism] = {}
    for x in sorted(x_space.points):
        n = minimal_open(psi.target, psi(x))
        m = minimal_open(x_space, x)
        # β_x = (germ at x) ∘ (unit at the minimal open downstairs)
        bx = compose(h.restrict(m, psi.preimage(n)), pair.unit.components[n])
        if not bx.is_bijective():
            raise NotInverseImagePair(
                f"fiber identification at {x!r} is not bijective")
        beta[x] = bx
    components = {}
    for w in x_space.sorted_opens():
        table = {}
        for s in h.sections[w].elements:
            target_germs = {}
            for x in sorted(w):
                m = minimal_open(x_space, x)
                n = minimal_open(psi.target, psi(x))
                germ_here = h.restrict(m, w).map[s]
                g_elem = beta[x].inverse().map[germ_here]
                target_germs[x] = compose(
                    f.restrict(m, psi.preimage(n)), u.body.components[n]
                ).map[g_elem]
            candidates = [
                t for t in f.sections[w].elements
                if all(
                    f.restrict(minimal_open(x_space, x), w).map[t] == target_germs[x]
                    for x in sorted(w))
            ]
            if len(candidates) != 1:
                raise NotInverseImagePair(
                    f"transported germs over {open_key(w)!r} match "
                    f"{len(candidates)} sections")
            table[s] = candidates[0]
        components[w] = ValueMorphism(h.sections[w], f.sections[w], table)
    return PresheafMorphism(h, f, components)


def canonical_comparison(first: InverseImage, second: InverseImage) -> PresheafMorphism:
    """The unique isomorphism ζ between two inverse images of one presheaf
    with ψ_*(ζ) ∘ unit₁ = unit₂; both composites are verified."""
    if first.psi.assignment != second.psi.assignment:
        raise NotInverseImagePair("pairs pull back along different maps")
    zeta = _sharp_generic(second.as_psi_morphism(), first)
    xi = _sharp_generic(first.as_psi_morphism(), second)
    if not (morphisms_equal(compose_morphisms(xi, zeta), identity_morphism(first.sheaf))
            and morphisms_equal(compose_morphisms(zeta, xi), identity_morphism(second.sheaf))):
        raise NotInverseImagePair("comparison morphisms are not mutually inverse")
    expected = compose_morphisms(pushforward_morphism(first.psi, zeta), first.unit)
    if not morphisms_equal(expected, second.unit):
        raise NotInverseImagePair("comparison does not intertwine the units")
    return zeta


def composition_iso(psi: ContinuousMap, psi2: ContinuousMap, h: Presheaf) -> PresheafMorphism:
    """ψ*(ψ′*(H)) against the direct pullback along ψ′∘ψ.

    The composite pair uses the unit ψ′_*(ρ_{ψ′*H}) ∘ ρ_H; the returned
    morphism is the canonical isomorphism between the two constructions.
    """
    from .topology import compose_maps

    _require_continuous(psi)
    _require_continuous(psi2)
    inner = pullback(psi2, h)              # ψ′*H on Y
    outer = pullback(psi, inner.sheaf)     # ψ*ψ′*H on X
    combined = compose_maps(psi2, psi)
    composite_unit = compose_morphisms(
        pushforward_morphism(psi2, outer.unit), inner.unit)
    first = InverseImage(combined, h, outer.sheaf, composite_unit)
    second = pullback(combined, h)
    return canonical_comparison(first, second)


def pullback_stalk_iso(psi: ContinuousMap, g: Presheaf, x: str,
                       inv: InverseImage | None = None) -> ValueMorphism:
    """The fiber identification G_{ψ(x)} → (ψ*G)_x.

    Sends a germ, represented over the minimal open at ψ(x), to the germ
    family of that representative, restricted to the minimal open at x.
    """
    _require_continuous(psi)
    psi.source.require_point(x)
    inv = inv or pullback(psi, g)
    n = minimal_open(psi.target, psi(x))
    m = minimal_open(psi.source, x)
    source_obj = stalk(g, psi(x)).object
    target_obj = stalk(inv.sheaf, x).object
    table = {}
    for s in source_obj.elements:
        fam = {
            z: g.restrict(minimal_open(psi.target, psi(z)), n).map[s]
            for z in m
        }
        table[s] = _germ_family_label(fam)
    out = ValueMorphism(source_obj, target_obj, table)
    if not out.is_bijective():
        raise NotInverseImagePair(f"fiber identification at {x!r} is not bijective")
    return out


def open_embedding_pullback_matches_restriction(
    psi: ContinuousMap, g: Presheaf
) -> PresheafMorphism:
    """For an open inclusion j: U ↪ Y with G a sheaf, exhibits the canonical
    iso pullback(j, G) ≅ G|_U (both are inverse images of G along j)."""
    _require_sheaf(g)
    if any(psi(x) != x for x in psi.source.points):
        raise NotContinuous("inclusion must keep point labels")
    u_points = psi.target.require_open(frozenset(psi.assignment.values()))
    restricted = restrict_to_open(g, u_points)
    pf = pushforward(psi, restricted)
    # (j_* G|_U)(V) = G(V ∩ U), so the unit is plain restriction
    comp = {v: g.restrict(v & u_points, v) for v in psi.target.opens}
    unit = PresheafMorphism(g, pf, comp)
    first = InverseImage(psi, g, restricted, unit)
    second = pullback(psi, g)
    return canonical_comparison(first, second)
