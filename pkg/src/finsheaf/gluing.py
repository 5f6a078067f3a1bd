"""Gluing sheaves from cocycle data over a covering.

The construction follows the choice-function route: pick for every open
inside the covering the least part containing it, transport restrictions
through the cocycle, and extend the resulting basis presheaf by limits.
Least-label choice replaces the axiom of choice; independence from the
choice is verified by tests rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .canon import open_key, pair_label
from .errors import CocycleViolation, IncompatibleFamily, NotAGluing, NotAnOpen
from .presheaf import (
    BasisExtension,
    BasisPresheaf,
    Presheaf,
    PresheafMorphism,
    compose_morphisms,
    extend_from_basis,
    is_sheaf,
    morphisms_equal,
    presheaves_equal,
    restrict_morphism,
    restrict_to_open,
)
from .topology import Basis, FiniteSpace, PointSet, subspace
from .values import ValueMorphism, compose, identity


@dataclass
class GluingDatum:
    """Sheaves on the parts of a covering plus overlap isomorphisms.

    ``cocycle[(lam, mu)]`` maps part ``mu`` to part ``lam`` over their
    overlap.  A missing direction is derived as the inverse of the given
    one (the two directions are listed separately in principle; deriving
    one is a recorded convention).
    """

    space: FiniteSpace
    covering: dict[str, PointSet]
    parts: dict[str, Presheaf]
    cocycle: dict[tuple[str, str], PresheafMorphism]

    def __post_init__(self):
        union: PointSet = frozenset()
        for lam, u in self.covering.items():
            self.space.require_open(u)
            union = union | u
        if union != self.space.points:
            raise NotAGluing("covering does not cover the space")
        for lam, u in self.covering.items():
            if lam not in self.parts:
                raise NotAGluing(f"no part for index {lam!r}")
            if self.parts[lam].space != subspace(self.space, u):
                raise NotAGluing(f"part {lam!r} does not live on its covering open")
        for lam in self.covering:
            key = (lam, lam)
            if key not in self.cocycle:
                self.cocycle[key] = _identity_on_overlap(self, lam, lam)
        for lam in self.covering:
            for mu in self.covering:
                if (lam, mu) not in self.cocycle:
                    if (mu, lam) in self.cocycle:
                        self.cocycle[(lam, mu)] = self.cocycle[(mu, lam)].inverse()
                    else:
                        raise NotAGluing(f"no cocycle entry for ({lam!r}, {mu!r})")

    def indices(self) -> list[str]:
        return sorted(self.covering)

    def overlap(self, lam: str, mu: str) -> PointSet:
        return self.covering[lam] & self.covering[mu]

    def part_on_overlap(self, lam: str, mu: str) -> Presheaf:
        """parts[lam] restricted to the overlap with mu."""
        return restrict_to_open(self.parts[lam], self.overlap(lam, mu))


def _identity_on_overlap(d: GluingDatum, lam: str, mu: str) -> PresheafMorphism:
    p = d.part_on_overlap(lam, mu)
    return PresheafMorphism(p, p, {u: identity(p.sections[u]) for u in p.space.opens})


@dataclass
class CocycleReport:
    verdict: bool
    violations: list[dict]


def check_cocycle(d: GluingDatum) -> CocycleReport:
    """θ_{λλ} = id, every θ an isomorphism between the right restrictions,
    and θ′_{λν} = θ′_{λμ} ∘ θ′_{μν} on triple overlaps."""
    violations: list[dict] = []
    idx = d.indices()
    for lam in idx:
        for mu in idx:
            th = d.cocycle[(lam, mu)]
            want_src = d.part_on_overlap(mu, lam)
            want_tgt = d.part_on_overlap(lam, mu)
            if not (presheaves_equal(th.source, want_src)
                    and presheaves_equal(th.target, want_tgt)):
                violations.append({"pair": [lam, mu], "kind": "WrongRestriction"})
                continue
            if not th.is_isomorphism():
                violations.append({"pair": [lam, mu], "kind": "NotIso"})
            if lam == mu and not morphisms_equal(th, _identity_on_overlap(d, lam, lam)):
                violations.append({"pair": [lam, mu], "kind": "NotIdentity"})
    for lam in idx:
        for mu in idx:
            for nu in idx:
                triple = d.covering[lam] & d.covering[mu] & d.covering[nu]
                left = restrict_morphism(d.cocycle[(lam, nu)], triple)
                right = compose_morphisms(
                    restrict_morphism(d.cocycle[(lam, mu)], triple),
                    restrict_morphism(d.cocycle[(mu, nu)], triple))
                if not morphisms_equal(left, right):
                    violations.append({
                        "triple": [lam, mu, nu],
                        "kind": "TripleOverlap",
                        "overlap": open_key(triple),
                    })
    return CocycleReport(not violations, violations)


@dataclass
class GluedSheaf:
    """A sheaf glued from parts, with the identifications η_λ.

    Instances built by ``glue`` also carry their construction data
    (basis, extension, choice function); hand-assembled candidates for
    ``glued_uniqueness`` may leave those unset.
    """

    sheaf: Presheaf
    isos: dict[str, PresheafMorphism]  # η_λ: sheaf|_{U_λ} → parts[λ]
    extension: BasisExtension | None = None
    basis: Basis | None = None
    tau: dict[PointSet, str] | None = None


def default_choice(d: GluingDatum) -> Callable[[PointSet], str]:
    """Least index (by label order) whose part contains the open."""
    def tau(v: PointSet) -> str:
        for lam in d.indices():
            if v <= d.covering[lam]:
                return lam
        raise NotAnOpen(f"{open_key(v)!r} is inside no covering part")
    return tau


def glue(d: GluingDatum, choice: Callable[[PointSet], str] | None = None) -> GluedSheaf:
    """Build the glued sheaf and its part identifications η_λ.

    Basis = opens inside some part; sections over a basis open are taken
    from the chosen part, restrictions transported through the cocycle;
    the sheaf is the basis extension.
    """
    report = check_cocycle(d)
    if not report.verdict:
        raise CocycleViolation(f"{len(report.violations)} cocycle violations")
    for lam in d.indices():
        if not is_sheaf(d.parts[lam]):
            raise NotAGluing(f"part {lam!r} is not a sheaf")
    tau_fn = choice or default_choice(d)
    members = [v for v in d.space.sorted_opens()
               if any(v <= u for u in d.covering.values())]
    tau = {v: tau_fn(v) for v in members}
    for v, lam in tau.items():
        if not v <= d.covering[lam]:
            raise NotAGluing(f"choice sends {open_key(v)!r} outside its part")
    basis = Basis(d.space, frozenset(members))
    sections = {v: d.parts[tau[v]].sections[v] for v in members}
    res = {}
    for v in members:
        for w in members:
            if not v <= w:
                continue
            inner = d.parts[tau[w]].restrict(v, w)
            transport = d.cocycle[(tau[v], tau[w])].components[v]
            res[(v, w)] = compose(transport, inner)
    bp = BasisPresheaf(basis, sections, res)
    ext = extend_from_basis(bp)
    isos = {}
    for lam in d.indices():
        u_lam = d.covering[lam]
        comp = {}
        for v in d.parts[lam].space.opens:
            can_v = ext.can(v)
            comp[v] = compose(d.cocycle[(lam, tau[v])].components[v], can_v)
        isos[lam] = PresheafMorphism(
            restrict_to_open(ext.presheaf, u_lam), d.parts[lam], comp)
    return GluedSheaf(ext.presheaf, isos, ext, basis, tau)


def check_glued_invariant(d: GluingDatum, g: GluedSheaf) -> bool:
    """θ_{λμ} = η′_λ ∘ (η′_μ)⁻¹ as table equality on every overlap open."""
    for lam in d.indices():
        for mu in d.indices():
            o = d.overlap(lam, mu)
            eta_l = restrict_morphism(g.isos[lam], o)
            eta_m = restrict_morphism(g.isos[mu], o)
            composite = compose_morphisms(eta_l, eta_m.inverse())
            if not morphisms_equal(composite, d.cocycle[(lam, mu)]):
                return False
    return True


def glued_uniqueness(d: GluingDatum, candidate: GluedSheaf,
                     result: GluedSheaf | None = None) -> PresheafMorphism:
    """The unique isomorphism Φ: candidate.sheaf → glue(d).sheaf with
    ζ_λ = η_λ ∘ Φ|_{U_λ} for every part."""
    if not is_sheaf(candidate.sheaf):
        raise NotAGluing("candidate is not a sheaf")
    for lam in d.indices():
        iso = candidate.isos[lam]
        if not iso.is_isomorphism():
            raise NotAGluing(f"candidate iso at {lam!r} is not an isomorphism")
    if not check_glued_invariant(d, candidate):
        raise NotAGluing("candidate does not satisfy the gluing invariant")
    result = result or glue(d)
    g = candidate.sheaf
    phi_comp = {}
    for u in d.space.sorted_opens():
        table = {}
        members = result.basis.members_within(u)
        for s in g.sections[u].elements:
            fam = {}
            for v in members:
                phi_v = candidate.isos[result.tau[v]].components[v]
                fam[open_key(v)] = phi_v.map[g.restrict(v, u).map[s]]
            table[s] = pair_label(fam.items())
        phi_comp[u] = ValueMorphism(
            g.sections[u], result.sheaf.sections[u], table)
    phi = PresheafMorphism(g, result.sheaf, phi_comp)
    if not phi.is_isomorphism():
        raise NotAGluing("comparison with the glued sheaf is not bijective")
    for lam in d.indices():
        left = candidate.isos[lam]
        right = compose_morphisms(
            result.isos[lam],
            restrict_morphism(phi, d.covering[lam]))
        if not morphisms_equal(left, right):
            raise NotAGluing(f"comparison does not intertwine the isos at {lam!r}")
    return phi


def glue_morphisms(d: GluingDatum, e: GluingDatum,
                   family: Mapping[str, PresheafMorphism],
                   d_result: GluedSheaf | None = None,
                   e_result: GluedSheaf | None = None) -> PresheafMorphism:
    """Glue per-part morphisms u_λ: F_λ → G_λ into one on the glued sheaves.

    Each u_λ must intertwine the two cocycles on every overlap; the glued
    morphism is the unique one restricting to the family through the η/ζ
    identifications.
    """
    if sorted(d.covering) != sorted(e.covering) or any(
            d.covering[k] != e.covering[k] for k in d.covering):
        raise IncompatibleFamily("data do not share one covering")
    for lam in d.indices():
        if lam not in family:
            raise IncompatibleFamily(f"family misses index {lam!r}")
    for lam in d.indices():
        for mu in d.indices():
            o = d.overlap(lam, mu)
            left = compose_morphisms(
                restrict_morphism(family[lam], o), d.cocycle[(lam, mu)])
            right = compose_morphisms(
                e.cocycle[(lam, mu)], restrict_morphism(family[mu], o))
            if not morphisms_equal(left, right):
                raise IncompatibleFamily(
                    f"square fails on overlap of ({lam!r}, {mu!r})")
    dr = d_result or glue(d)
    er = e_result or glue(e)
    comp = {}
    for u in d.space.sorted_opens():
        table = {}
        members = dr.basis.members_within(u)
        for s in dr.sheaf.sections[u].elements:
            fam = {}
            for v in members:
                lam = dr.tau[v]
                restricted = dr.sheaf.restrict(v, u).map[s]
                in_part = dr.extension.can(v).map[restricted]
                mapped = family[lam].components[v].map[in_part]
                # transport into the part e's choice picked for v
                moved = e.cocycle[(er.tau[v], lam)].components[v].map[mapped]
                fam[open_key(v)] = moved
            table[s] = pair_label(fam.items())
        comp[u] = ValueMorphism(
            dr.sheaf.sections[u], er.sheaf.sections[u], table)
    return PresheafMorphism(dr.sheaf, er.sheaf, comp)


def morphism_to_family(d: GluingDatum, e: GluingDatum, u: PresheafMorphism,
                       d_result: GluedSheaf, e_result: GluedSheaf
                       ) -> dict[str, PresheafMorphism]:
    """Restrict a glued morphism back to the parts: λ ↦ ζ_λ ∘ u|_λ ∘ η_λ⁻¹."""
    out = {}
    for lam in d.indices():
        u_lam = d.covering[lam]
        out[lam] = compose_morphisms(
            e_result.isos[lam],
            compose_morphisms(
                restrict_morphism(u, u_lam),
                d_result.isos[lam].inverse()))
    return out


def restrict_gluing(d: GluingDatum, v: Iterable[str]) -> GluingDatum:
    """The induced datum on an open: covering, parts and cocycle restricted."""
    sv = d.space.require_open(v)
    sub = subspace(d.space, sv)
    covering = {lam: u & sv for lam, u in d.covering.items()}
    parts = {
        lam: restrict_to_open(d.parts[lam], covering[lam])
        for lam in d.covering
    }
    cocycle = {}
    for (lam, mu), th in d.cocycle.items():
        cocycle[(lam, mu)] = restrict_morphism(th, covering[lam] & covering[mu])
    return GluingDatum(sub, covering, parts, cocycle)
