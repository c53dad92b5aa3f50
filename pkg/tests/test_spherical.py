"""Spherical systems, Sigma-sets, disjointness, and structure searches."""

import pytest

from beauville.groups import make_group
from beauville.spherical import (
    RamificationStructure,
    SphericalSystem,
    are_disjoint,
    enumerate_systems,
    exists_unmixed_structure,
    exists_unmixed_structure_of_size,
    has_disjoint_partner,
    is_hyperbolic,
    is_spherical_system,
    normalize_type,
    parse_system,
    serialize_system,
    sigma_set,
)


def brute_sigma_ids(G, ids):
    out = {G.identity}
    for x in ids:
        y = x
        while y != G.identity:
            for g in range(G.order):
                out.add(G.conj(g, y))
            y = G.mul(y, x)
    return frozenset(out)


def test_normalize_type():
    assert normalize_type([3, 2, 2]) == (2, 2, 3)
    with pytest.raises(ValueError):
        normalize_type([1, 2, 2])
    with pytest.raises(ValueError):
        normalize_type([2, 2])


def test_is_hyperbolic():
    assert is_hyperbolic((2, 3, 7))
    assert is_hyperbolic((5, 5, 5))
    assert not is_hyperbolic((2, 3, 6))
    assert not is_hyperbolic((2, 2, 100))


def test_enumeration_counts_and_validity():
    G = make_group("ab:5,5")
    systems = list(enumerate_systems(G, (5, 5, 5)))
    assert len(systems) == 480
    for T in systems[:20]:
        T.validate()
        assert T.type_vector == (5, 5, 5)
    # every ordered system appears exactly once
    assert len({T.ids for T in systems}) == 480


def test_enumeration_agrees_with_direct_scan():
    G = make_group("sym:4")
    direct = 0
    for x in range(G.order):
        for y in range(G.order):
            z = G.inv(G.mul(x, y))
            ids = (x, y, z)
            if any(i == G.identity for i in ids):
                continue
            if sorted(G.element_order(i) for i in ids) != [2, 3, 4]:
                continue
            if G.generates(ids):
                direct += 1
    assert direct == len(list(enumerate_systems(G, (2, 3, 4))))


def test_sigma_sets_match_brute_force():
    for spec, tau in [("sym:4", (2, 3, 4)), ("dih:6", (2, 2, 6)),
                      ("ab:5,5", (5, 5, 5))]:
        G = make_group(spec)
        for k, T in enumerate(enumerate_systems(G, tau)):
            if k >= 10:
                break
            assert T.sigma_ids == brute_sigma_ids(G, T.ids)
            assert sigma_set(G, T) == {G.enc_of(i) for i in T.sigma_ids}


def test_disjointness_matches_brute_force():
    G = make_group("ab:5,5")
    systems = list(enumerate_systems(G, (5, 5, 5)))[:40]
    for T1 in systems[:12]:
        for T2 in systems[:12]:
            brute = (T1.sigma_ids & T2.sigma_ids) == {G.identity}
            assert are_disjoint(T1, T2) == brute


def test_is_spherical_system():
    G = make_group("sym:3")
    a = next(x for x in range(G.order) if G.element_order(x) == 2)
    b = next(x for x in range(G.order) if G.element_order(x) == 3)
    c = G.inv(G.mul(a, b))
    ok, tau = is_spherical_system(G, [G.enc_of(a), G.enc_of(b), G.enc_of(c)])
    assert ok and tau == (2, 2, 3)
    bad, _ = is_spherical_system(G, [G.enc_of(a), G.enc_of(a), G.enc_of(b)])
    assert not bad  # product is not the identity


def test_serialize_round_trip():
    G = make_group("sym:4")
    T = next(iter(enumerate_systems(G, (2, 3, 4))))
    back = parse_system(G, serialize_system(T))
    assert back.ids == T.ids


def test_exists_beauville_known_answers():
    # A4, S4, A5 admit none; S5 and (Z/5)^2 do
    for spec, expect in [("alt:4", False), ("sym:4", False),
                         ("alt:5", False), ("sym:5", True), ("ab:5,5", True)]:
        G = make_group(spec)
        res = exists_unmixed_structure_of_size(G, 3, 3)
        assert res.found == expect, spec
        if res.found:
            res.structure.validate()
            assert res.structure.is_beauville


def test_exists_typed_search():
    G = make_group("ab:5,5")
    res = exists_unmixed_structure(G, (5, 5, 5), (5, 5, 5))
    assert res.found
    res.structure.validate()
    none = exists_unmixed_structure(make_group("ab:3,3"), (3, 3, 3), (3, 3, 3))
    assert none.certified_none


def test_randomized_search_finds_easy_structure():
    G = make_group("ab:5,5")
    res = exists_unmixed_structure(G, (5, 5, 5), (5, 5, 5),
                                   mode="randomized", trials=20000, seed=3)
    assert res.found
    res.structure.validate()


def test_has_disjoint_partner_certificate():
    G = make_group("dih:5")
    for T in enumerate_systems(G, (2, 2, 5), up_to_inner=True):
        assert has_disjoint_partner(G, T) is None
    G2 = make_group("ab:5,5")
    T1 = next(iter(enumerate_systems(G2, (5, 5, 5))))
    T2 = has_disjoint_partner(G2, T1)
    assert T2 is not None and are_disjoint(T1, T2)


def test_structure_validation_rejects_overlap():
    G = make_group("ab:3,3")
    systems = list(enumerate_systems(G, (3, 3, 3)))
    T1 = systems[0]
    T2 = next(T for T in systems if T.signature & T1.signature)
    with pytest.raises(ValueError):
        RamificationStructure(T1, T2).validate()


def test_size_search_matches_typed_loop():
    # the size-based search and the per-type loop agree on small groups
    import itertools

    for spec in ["sym:3", "alt:4", "dih:4", "z2semi:2,2"]:
        G = make_group(spec)
        orders = sorted(set(int(x) for x in G.element_orders) - {1})
        typed_found = False
        for tau1 in itertools.combinations_with_replacement(orders, 3):
            for tau2 in itertools.combinations_with_replacement(orders, 3):
                if exists_unmixed_structure(G, tau1, tau2).found:
                    typed_found = True
                    break
            if typed_found:
                break
        sized = exists_unmixed_structure_of_size(G, 3, 3)
        assert sized.found == typed_found, spec
