"""Shared small spaces, maps and presheaves used by tests and shipped files.

SIERP is the two-point space whose only nontrivial open is {1}; DISC2 the
two-point discrete space; PC4 the four-point pseudocircle; PT the point.
"""

from __future__ import annotations

from .presheaf import Presheaf, presheaf_from_function
from .topology import Basis, ContinuousMap, FiniteSpace, space_from_basis, subspace
from .values import FINAB, FINSET, ValueObject, cyclic_group, finset, zero_group


def sierpinski() -> tuple[FiniteSpace, Basis]:
    return space_from_basis(["0", "1"], [["1"], ["0", "1"]])


def disc2() -> tuple[FiniteSpace, Basis]:
    return space_from_basis(["1", "2"], [["1"], ["2"]])


def pseudocircle() -> tuple[FiniteSpace, Basis]:
    return space_from_basis(
        ["a", "b", "x", "y"],
        [["a"], ["b"], ["a", "b", "x"], ["a", "b", "y"]])


def point_space(label: str = "p") -> FiniteSpace:
    return space_from_basis([label], [[label]])[0]


def disc2_to_pt() -> ContinuousMap:
    return ContinuousMap(disc2()[0], point_space(), {"1": "p", "2": "p"})


def sierp_to_pt() -> ContinuousMap:
    return ContinuousMap(sierpinski()[0], point_space(), {"0": "p", "1": "p"})


def pt_to_sierp() -> ContinuousMap:
    return ContinuousMap(point_space(), sierpinski()[0], {"p": "0"})


def pc4_to_sierp() -> ContinuousMap:
    return ContinuousMap(
        pseudocircle()[0], sierpinski()[0],
        {"a": "1", "b": "1", "x": "0", "y": "0"})


def closed_point_into_sierp() -> ContinuousMap:
    """The closed embedding {0} ↪ SIERP."""
    space = sierpinski()[0]
    return ContinuousMap(point_space("0"), space, {"0": "0"})


def open_point_into_sierp() -> ContinuousMap:
    """The open embedding {1} ↪ SIERP."""
    space = sierpinski()[0]
    return ContinuousMap(subspace(space, frozenset({"1"})), space, {"1": "1"})


def sierp_two_section_sheaf() -> Presheaf:
    """F(X) = {s,t}, F({1}) = {u}, terminal empty sections; a sheaf."""
    space = sierpinski()[0]
    whole, one = frozenset({"0", "1"}), frozenset({"1"})
    objs = {whole: finset(["s", "t"]), one: finset(["u"]), frozenset(): finset(["*"])}

    def res(u, v):
        return {a: objs[u].elements[0] if len(objs[u]) == 1 else a
                for a in objs[v].elements}

    return presheaf_from_function(space, FINSET, lambda u: objs[u], res)


def disc2_g2_failure() -> Presheaf:
    """F(X)={s}, F({1})={a}, F({2})={b,b'}: too few global sections."""
    space = disc2()[0]
    whole, one, two = frozenset({"1", "2"}), frozenset({"1"}), frozenset({"2"})
    objs = {
        whole: finset(["s"]),
        one: finset(["a"]),
        two: finset(["b", "b'"]),
        frozenset(): finset(["*"]),
    }
    tables = {
        (one, whole): {"s": "a"},
        (two, whole): {"s": "b"},
        (frozenset(), whole): {"s": "*"},
        (frozenset(), one): {"a": "*"},
        (frozenset(), two): {"b": "*", "b'": "*"},
    }

    def res(u, v):
        if u == v:
            return {a: a for a in objs[u].elements}
        return tables[(u, v)]

    return presheaf_from_function(space, FINSET, lambda u: objs[u], res)


def constant_two(space: FiniteSpace) -> Presheaf:
    """The constant presheaf with value {0,1} (not generally a sheaf)."""
    from .presheaf import constant_presheaf

    return constant_presheaf(space, finset(["0", "1"]))


def sierp_z2_skyscraper() -> Presheaf:
    """FinAb sheaf on SIERP: Z/2 globally, zero over the open point."""
    space = sierpinski()[0]
    whole, one = frozenset({"0", "1"}), frozenset({"1"})
    z2, z0 = cyclic_group(2), zero_group()
    objs = {whole: z2, one: z0, frozenset(): z0}

    def res(u, v):
        if u == v:
            return {a: a for a in objs[u].elements}
        if v == whole and len(objs[u]) == 1:
            return {a: "0" for a in z2.elements}
        return {a: "0" for a in objs[v].elements}

    return presheaf_from_function(space, FINAB, lambda u: objs[u], res)


def locally_constant_sheaf(space: FiniteSpace, value: ValueObject) -> Presheaf:
    """The sheafification of the constant presheaf, as a standalone sheaf."""
    from .functors import sheafify
    from .presheaf import constant_presheaf

    return sheafify(constant_presheaf(space, value)).sheaf
