"""JSON file formats for spaces, presheaves, maps, gluing data, diagrams.

One format family, canonical on write: object keys sorted, set-like
arrays sorted, a trailing newline, no timing or other run-dependent data.
Open sets are keyed by their canonical sorted-label string ("a,b"; the
empty string for the empty set).  FinAb tables are stored as arrays of
triples [x, y, x+y].
"""

from __future__ import annotations

import json
import os
from typing import Any

from .canon import canonical_json, open_key
from .errors import CrossReferenceError, ParseError
from .gluing import GluingDatum
from .presheaf import BasisPresheaf, Presheaf, PresheafMorphism, SheafDiagram
from .topology import Basis, ContinuousMap, FiniteSpace, PointSet, subspace
from .values import FINAB, FINSET, Poset, ValueMorphism, ValueObject, group_from_triples

SPACE_SCHEMA = "finsheaf.space/1"
PRESHEAF_SCHEMA = "finsheaf.presheaf/1"
MAP_SCHEMA = "finsheaf.map/1"
GLUING_SCHEMA = "finsheaf.gluing/1"
DIAGRAM_SCHEMA = "finsheaf.diagram/1"
REPORT_SCHEMA = "finsheaf.report/1"


def _open_of_key(key: str) -> PointSet:
    return frozenset(key.split(",")) if key else frozenset()


def _sorted_open(u: PointSet) -> list[str]:
    return sorted(u)


# -- spaces -------------------------------------------------------------------

def space_to_payload(space: FiniteSpace) -> dict:
    return {
        "schema": SPACE_SCHEMA,
        "points": sorted(space.points),
        "opens": sorted([_sorted_open(u) for u in space.opens]),
    }


def space_from_payload(payload: dict) -> FiniteSpace:
    try:
        points = payload["points"]
        if "opens" in payload:
            return FiniteSpace(points, payload["opens"])
        if "basis" in payload:
            from .topology import space_from_basis

            return space_from_basis(points, payload["basis"])[0]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad space payload: {exc}") from exc
    raise ParseError("space payload needs 'opens' or 'basis'")


# -- value objects ------------------------------------------------------------

def value_to_payload(obj: ValueObject):
    if obj.category == FINSET:
        return sorted(obj.elements)
    triples = sorted([x, y, obj.add[(x, y)]] for x in obj.elements for y in obj.elements)
    return {"elements": sorted(obj.elements), "zero": obj.zero, "add": triples}


def value_from_payload(payload, category: str) -> ValueObject:
    try:
        if category == FINSET:
            return ValueObject(FINSET, tuple(payload))
        return group_from_triples(payload["elements"], payload["add"],
                                  payload["zero"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad value object: {exc}") from exc


# -- presheaves ---------------------------------------------------------------

def presheaf_to_payload(p: Presheaf | BasisPresheaf, inline_space: bool = True) -> dict:
    if isinstance(p, BasisPresheaf):
        space = p.basis.space
        opens = p.basis.sorted_members()
        pairs = [(u, v) for u in opens for v in opens if u < v]
        payload_extra = {"basis": sorted([_sorted_open(b) for b in opens])}
    else:
        space = p.space
        opens = space.sorted_opens()
        pairs = [(u, v) for u in opens for v in opens if u < v]
        payload_extra = {}
    restrictions: dict[str, dict[str, dict[str, str]]] = {}
    for (u, v) in pairs:
        table = p.res[(u, v)].map
        restrictions.setdefault(open_key(v), {})[open_key(u)] = dict(table)
    # non-identity self-restrictions are kept so corrupted data round-trips
    for u in opens:
        r = p.res[(u, u)].map
        if any(r[a] != a for a in r):
            restrictions.setdefault(open_key(u), {})[open_key(u)] = dict(r)
    payload = {
        "schema": PRESHEAF_SCHEMA,
        "category": p.category,
        "space": space_to_payload(space),
        "sections": {open_key(u): value_to_payload(p.sections[u]) for u in opens},
        "restrictions": restrictions,
    }
    payload.update(payload_extra)
    return payload


def _resolve_space(payload, base_dir: str) -> FiniteSpace:
    if isinstance(payload, str):
        path = payload if os.path.isabs(payload) else os.path.join(base_dir, payload)
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CrossReferenceError(f"cannot resolve space reference {payload!r}: {exc}")
        return space_from_payload(doc)
    if isinstance(payload, dict):
        return space_from_payload(payload)
    raise ParseError("space must be inline or a file reference")


def presheaf_from_payload(payload: dict, base_dir: str = ".") -> Presheaf | BasisPresheaf:
    try:
        category = payload["category"]
        space = _resolve_space(payload["space"], base_dir)
        raw_sections = payload["sections"]
        raw_restrictions = payload.get("restrictions", {})
        basis_arr = payload.get("basis")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad presheaf payload: {exc}") from exc
    if category not in (FINSET, FINAB):
        raise ParseError(f"unknown category {category!r}")

    if basis_arr is not None:
        members = frozenset(frozenset(b) for b in basis_arr)
        basis = Basis(space, members)
        opens = sorted(members, key=lambda u: tuple(sorted(u)))
    else:
        basis = None
        opens = space.sorted_opens()

    sections: dict[PointSet, ValueObject] = {}
    for u in opens:
        key = open_key(u)
        if key not in raw_sections:
            raise CrossReferenceError(f"no sections for open {key!r}")
        sections[u] = value_from_payload(raw_sections[key], category)

    res: dict[tuple[PointSet, PointSet], ValueMorphism] = {}
    for u in opens:
        for v in opens:
            if not u <= v:
                continue
            table = raw_restrictions.get(open_key(v), {}).get(open_key(u))
            if table is None:
                if u == v:
                    table = {a: a for a in sections[u].elements}
                else:
                    raise CrossReferenceError(
                        f"no restriction {open_key(v)!r} -> {open_key(u)!r}")
            try:
                res[(u, v)] = ValueMorphism(sections[v], sections[u], dict(table))
            except (ValueError, KeyError) as exc:
                raise ParseError(
                    f"bad restriction {open_key(v)!r} -> {open_key(u)!r}: {exc}") from exc
    if basis is not None:
        return BasisPresheaf(basis, sections, res)
    return Presheaf(space, category, sections, res)


# -- continuous maps ----------------------------------------------------------

def map_to_payload(m: ContinuousMap) -> dict:
    return {
        "schema": MAP_SCHEMA,
        "source": space_to_payload(m.source),
        "target": space_to_payload(m.target),
        "assignment": {x: m.assignment[x] for x in sorted(m.source.points)},
    }


def map_from_payload(payload: dict, base_dir: str = ".") -> ContinuousMap:
    try:
        source = _resolve_space(payload["source"], base_dir)
        target = _resolve_space(payload["target"], base_dir)
        return ContinuousMap(source, target, dict(payload["assignment"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad map payload: {exc}") from exc


# -- morphism tables ----------------------------------------------------------

def morphism_tables(m: PresheafMorphism) -> dict[str, dict[str, str]]:
    return {
        open_key(u): dict(m.components[u].map)
        for u in m.source.space.sorted_opens()
    }


# -- gluing data --------------------------------------------------------------

def gluing_to_payload(d: GluingDatum) -> dict:
    parts = {}
    for lam in d.indices():
        doc = presheaf_to_payload(d.parts[lam])
        doc.pop("space")
        doc.pop("schema")
        parts[lam] = doc
    cocycle: dict[str, dict[str, dict]] = {}
    for (lam, mu), th in sorted(d.cocycle.items()):
        if lam == mu:
            continue
        tables = {
            open_key(u): dict(th.components[u].map)
            for u in th.source.space.sorted_opens()
        }
        cocycle.setdefault(lam, {})[mu] = tables
    return {
        "schema": GLUING_SCHEMA,
        "space": space_to_payload(d.space),
        "covering": {lam: _sorted_open(u) for lam, u in d.covering.items()},
        "parts": parts,
        "cocycle": cocycle,
    }


def gluing_from_payload(payload: dict, base_dir: str = ".") -> GluingDatum:
    from .presheaf import restrict_to_open

    try:
        space = _resolve_space(payload["space"], base_dir)
        covering = {lam: frozenset(pts) for lam, pts in payload["covering"].items()}
        parts: dict[str, Presheaf] = {}
        for lam, doc in payload["parts"].items():
            local = dict(doc)
            local["schema"] = PRESHEAF_SCHEMA
            local["space"] = space_to_payload(subspace(space, covering[lam]))
            part = presheaf_from_payload(local, base_dir)
            if isinstance(part, BasisPresheaf):
                raise ParseError("gluing parts must be full presheaves")
            parts[lam] = part
        cocycle: dict[tuple[str, str], PresheafMorphism] = {}
        for lam, row in payload.get("cocycle", {}).items():
            for mu, tables in row.items():
                overlap = covering[lam] & covering[mu]
                src = restrict_to_open(parts[mu], overlap)
                tgt = restrict_to_open(parts[lam], overlap)
                comps = {}
                for u in src.space.opens:
                    table = tables.get(open_key(u))
                    if table is None:
                        raise CrossReferenceError(
                            f"cocycle ({lam!r},{mu!r}) misses open {open_key(u)!r}")
                    comps[u] = ValueMorphism(src.sections[u], tgt.sections[u], dict(table))
                cocycle[(lam, mu)] = PresheafMorphism(src, tgt, comps)
        return GluingDatum(space, covering, parts, cocycle)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad gluing payload: {exc}") from exc


# -- sheaf diagrams -----------------------------------------------------------

def diagram_to_payload(d: SheafDiagram) -> dict:
    arrows: dict[str, dict[str, dict]] = {}
    for (i, j) in d.index.pairs_below():
        arrows.setdefault(i, {})[j] = morphism_tables(d.arrows[(i, j)])
    return {
        "schema": DIAGRAM_SCHEMA,
        "index": {
            "elements": list(d.index.elements),
            "le": sorted([a, b] for (a, b) in d.index.le if a != b),
        },
        "sheaves": {i: presheaf_to_payload(d.sheaves[i]) for i in d.index.elements},
        "arrows": arrows,
    }


def diagram_from_payload(payload: dict, base_dir: str = ".") -> SheafDiagram:
    try:
        poset = Poset.from_pairs(
            payload["index"]["elements"],
            [tuple(p) for p in payload["index"].get("le", [])])
        sheaves = {}
        for i in poset.elements:
            p = presheaf_from_payload(payload["sheaves"][i], base_dir)
            if isinstance(p, BasisPresheaf):
                raise ParseError("diagram nodes must be full presheaves")
            sheaves[i] = p
        arrows = {}
        for (i, j) in poset.pairs_below():
            tables = payload["arrows"].get(i, {}).get(j)
            if tables is None:
                raise CrossReferenceError(f"diagram misses arrow ({i!r}, {j!r})")
            comps = {}
            for u in sheaves[j].space.opens:
                table = tables.get(open_key(u))
                if table is None:
                    raise CrossReferenceError(
                        f"arrow ({i!r},{j!r}) misses open {open_key(u)!r}")
                comps[u] = ValueMorphism(
                    sheaves[j].sections[u], sheaves[i].sections[u], dict(table))
            arrows[(i, j)] = PresheafMorphism(sheaves[j], sheaves[i], comps)
        return SheafDiagram(poset, sheaves, arrows)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad diagram payload: {exc}") from exc


# -- file helpers ---------------------------------------------------------------

def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path!r}: {exc}") from exc


def dump_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(payload))
