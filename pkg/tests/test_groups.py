"""Group construction, arithmetic, classes, and automorphisms."""

import pytest

from beauville.groups import (
    GroupSpec,
    InvalidSpecError,
    make_group,
    registry,
)

KNOWN_ORDERS = {
    "sym:3": 6,
    "sym:4": 24,
    "alt:4": 12,
    "alt:5": 60,
    "psl2:5": 60,
    "psl2:7": 168,
    "psl2:13": 1092,
    "dih:6": 12,
    "ab:5,5": 25,
    "ab:2,2,2": 8,
    "z2semi:3,4": 24,
}


@pytest.mark.parametrize("spec,order", sorted(KNOWN_ORDERS.items()))
def test_orders(spec, order):
    G = make_group(spec)
    assert G.order == order
    assert GroupSpec.parse(spec).order == order


def test_spec_parse_errors():
    for bad in ["", "sym", "sym:", "psl2:4", "psl2:9", "ab:",
                "dih:0", "z2semi:2", "nope:3"]:
        with pytest.raises(InvalidSpecError):
            GroupSpec.parse(bad)


def test_group_axioms_sampled():
    for spec in ["sym:4", "psl2:5", "z2semi:2,3", "ab:2,4"]:
        G = make_group(spec)
        ids = range(G.order)
        for a in ids:
            assert G.mul(a, G.identity) == a
            assert G.mul(G.inv(a), a) == G.identity
        for a in range(0, G.order, 3):
            for b in range(0, G.order, 5):
                for c in range(0, G.order, 7):
                    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


def test_element_orders_lagrange():
    for spec in registry(60):
        G = make_group(spec)
        for x in range(G.order):
            m = G.element_order(x)
            assert G.order % m == 0
            # x^m = identity, x^k != identity for k < m
            y = G.identity
            for _ in range(m - 1):
                y = G.mul(y, x)
                assert y != G.identity
            assert G.mul(y, x) == G.identity


def test_classes_partition():
    for spec in ["sym:4", "psl2:5", "dih:6", "z2semi:2,4"]:
        G = make_group(spec)
        seen = set()
        for cls in G.classes:
            members = G.class_members[cls.class_id]
            assert len(members) == cls.size
            assert not (set(members) & seen)
            seen.update(members)
            assert all(int(G.class_of[m]) == cls.class_id for m in members)
        assert len(seen) == G.order
        # class sizes divide the group order
        assert all(G.order % c.size == 0 for c in G.classes)


def test_class_of_conjugation_invariant():
    G = make_group("sym:4")
    for x in range(G.order):
        for g in range(0, G.order, 5):
            assert int(G.class_of[G.conj(g, x)]) == int(G.class_of[x])


KNOWN_AUT = {
    # (aut_order, out_order)
    "sym:3": (6, 1),
    "sym:4": (24, 1),
    "alt:4": (24, 2),
    "alt:5": (120, 2),
    "psl2:5": (120, 2),
    "psl2:7": (336, 2),
    "ab:5,5": (480, 480),
    "ab:3,3": (48, 48),
}


def test_aut_unavailable_for_high_rank_abelian():
    from beauville.groups import AutUnavailableError

    G = make_group("ab:2,2,2")
    with pytest.raises(AutUnavailableError):
        G.aut_generator_perms()


@pytest.mark.parametrize("spec,expected", sorted(KNOWN_AUT.items()))
def test_aut_orders(spec, expected):
    G = make_group(spec)
    assert (G.aut_order, G.out_order) == expected
    assert G.aut_order == G.inn_order * G.out_order


def test_aut_perms_are_automorphisms():
    for spec in ["sym:4", "psl2:5", "ab:3,3"]:
        G = make_group(spec)
        for perm in G.aut_generator_perms():
            assert sorted(int(v) for v in perm) == list(range(G.order))
            for a in range(0, G.order, 4):
                for b in range(0, G.order, 3):
                    assert int(perm[G.mul(a, b)]) == \
                        G.mul(int(perm[a]), int(perm[b]))


def test_generates_and_closure():
    G = make_group("sym:4")
    assert not G.generates([G.identity])
    full = [x for x in range(G.order)]
    assert G.generates(full)
    # a single 4-cycle generates a cyclic subgroup of size 4
    four = next(x for x in range(G.order) if G.element_order(x) == 4)
    assert len(G.subgroup_closure([four])) == 4


def test_registry_is_bounded():
    for spec in registry(60):
        assert spec.order <= 60
    assert len(registry(60)) >= 15
