"""Law-level property tests over randomly sampled small instances.

Pools are enumerated up front (deterministically) and hypothesis picks
indices into them, so shrinking stays meaningful and no strategy has to
build categorical structures from scratch.
"""

from hypothesis import given, settings, strategies as st

from finsheaf.functors import pullback, pushforward, sheafify
from finsheaf.oracles import enumerate_presheaves, enumerate_topologies
from finsheaf.presheaf import (
    compose_morphisms,
    enumerate_presheaf_morphisms,
    is_sheaf,
    morphisms_equal,
    validate_presheaf,
)
from finsheaf.stalks import neighborhood_colimit, stalk
from finsheaf.topology import (
    ContinuousMap,
    check_continuous,
    compose_maps,
    enumerate_antichain_coverings,
    minimal_open,
)
from finsheaf import fixtures as fx

TOPOLOGIES = enumerate_topologies(["1", "2"]) + enumerate_topologies(["1", "2", "3"])

# a deterministic slice of presheaves per topology, capped for speed
PRESHEAF_POOL = []
for _sp in TOPOLOGIES:
    for _i, _p in enumerate(enumerate_presheaves(_sp, max_size=2, min_size=1)):
        if _i >= 40:
            break
        PRESHEAF_POOL.append(_p)

presheaf_indices = st.integers(min_value=0, max_value=len(PRESHEAF_POOL) - 1)


@given(presheaf_indices)
@settings(max_examples=60, deadline=None)
def test_sheafify_always_yields_a_sheaf_with_unit_iso_iff_input_was(ix):
    p = PRESHEAF_POOL[ix]
    inv = sheafify(p)
    assert is_sheaf(inv.sheaf)
    assert inv.unit.is_isomorphism() == is_sheaf(p)


@given(presheaf_indices)
@settings(max_examples=60, deadline=None)
def test_stalk_shortcut_matches_colimit(ix):
    p = PRESHEAF_POOL[ix]
    for x in sorted(p.space.points):
        short = stalk(p, x)
        general, colim = neighborhood_colimit(p, x)
        assert len(short.object) == len(general.object)
        m = minimal_open(p.space, x)
        for label, members in colim.classes.items():
            assert sum(1 for key, _ in members
                       if frozenset(key.split(",")) == m) == 1


@given(presheaf_indices)
@settings(max_examples=40, deadline=None)
def test_verdict_is_covering_order_independent(ix):
    p = PRESHEAF_POOL[ix]

    def backwards(space, u):
        return list(reversed(enumerate_antichain_coverings(space, u)))

    assert is_sheaf(p) == is_sheaf(p, coverings=backwards)


@given(presheaf_indices)
@settings(max_examples=30, deadline=None)
def test_functoriality_of_enumerated_presheaves(ix):
    assert validate_presheaf(PRESHEAF_POOL[ix])


MAPS = []
for _src in TOPOLOGIES[:8]:
    for _tgt in TOPOLOGIES[:8]:
        from itertools import product as _ip

        pts_s, pts_t = sorted(_src.points), sorted(_tgt.points)
        if not pts_t or len(pts_s) > 2:
            continue
        for _imgs in _ip(pts_t, repeat=len(pts_s)):
            m = ContinuousMap(_src, _tgt, dict(zip(pts_s, _imgs)))
            if check_continuous(m):
                MAPS.append(m)
        if len(MAPS) > 60:
            break
    if len(MAPS) > 60:
        break


@given(st.integers(min_value=0, max_value=len(MAPS) - 1),
       st.integers(min_value=0, max_value=len(MAPS) - 1))
@settings(max_examples=60, deadline=None)
def test_composition_of_continuous_maps_is_continuous(i, j):
    f, g = MAPS[i], MAPS[j]
    if f.target != g.source:
        return
    assert check_continuous(compose_maps(g, f))


@given(st.integers(min_value=0, max_value=len(MAPS) - 1), presheaf_indices)
@settings(max_examples=40, deadline=None)
def test_pushforward_preserves_sheaves(mi, pi):
    psi = MAPS[mi]
    p = PRESHEAF_POOL[pi]
    if p.space != psi.source or not is_sheaf(p):
        return
    assert is_sheaf(pushforward(psi, p))


@given(st.integers(min_value=0, max_value=len(MAPS) - 1), presheaf_indices)
@settings(max_examples=25, deadline=None)
def test_pullback_always_yields_sheaf(mi, pi):
    psi = MAPS[mi]
    p = PRESHEAF_POOL[pi]
    if p.space != psi.target:
        return
    inv = pullback(psi, p)
    assert is_sheaf(inv.sheaf)


def test_morphism_composition_is_associative():
    f = fx.sierp_two_section_sheaf()
    pool = enumerate_presheaf_morphisms(f, f)
    for a in pool:
        for b in pool:
            for c in pool[:3]:
                left = compose_morphisms(a, compose_morphisms(b, c))
                right = compose_morphisms(compose_morphisms(a, b), c)
                assert morphisms_equal(left, right)
