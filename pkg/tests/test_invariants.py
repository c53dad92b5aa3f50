"""Exact surface invariants and their identities."""

from fractions import Fraction

import pytest

from beauville.groups import make_group
from beauville.invariants import (
    NonRealizableError,
    check_genus_ge_2,
    chi_bounds_ok,
    genus_rh,
    mu,
    structure_invariants,
    surface_invariants,
)
from beauville.spherical import exists_unmixed_structure


def test_prototype_ab55():
    inv = surface_invariants(25, (5, 5, 5), (5, 5, 5))
    assert (inv.chi, inv.k2, inv.euler, inv.genus1, inv.genus2) == \
        (1, 8, 4, 6, 6)
    assert inv.pg == 0


def test_identities_hold_generally():
    cases = [(25, (5, 5, 5), (5, 5, 5)),
             (49, (7, 7, 7), (7, 7, 7)),
             (1092, (2, 3, 13), (7, 7, 7)),
             (120, (3, 6, 6), (4, 4, 5))]
    for n, t1, t2 in cases:
        inv = surface_invariants(n, t1, t2)
        assert inv.k2 == 8 * inv.chi            # K^2 = 8 chi
        assert inv.euler == 4 * inv.chi         # Zeuthen-Segre for q = 0
        assert inv.pg == inv.chi - 1
        assert inv.genus1 >= 2 and inv.genus2 >= 2
        assert chi_bounds_ok(n, t1, t2, inv.chi)
        # Riemann-Hurwitz consistency per factor curve
        g1, ok1 = genus_rh(n, 0, t1)
        g2, ok2 = genus_rh(n, 0, t2)
        assert ok1 and ok2
        assert (g1, g2) == (inv.genus1, inv.genus2)


def test_mu():
    assert mu((2, 3, 7)) == Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 7)


def test_non_realizable_raises():
    with pytest.raises(NonRealizableError):
        surface_invariants(2, (2, 2, 2), (2, 2, 2))  # genus < 2
    with pytest.raises(NonRealizableError):
        surface_invariants(60, (2, 3, 7), (2, 3, 7))  # chi not integral


def test_structure_invariants_from_search():
    G = make_group("ab:5,5")
    res = exists_unmixed_structure(G, (5, 5, 5), (5, 5, 5))
    inv = structure_invariants(res.structure)
    assert (inv.chi, inv.k2, inv.euler) == (1, 8, 4)
    assert check_genus_ge_2(res.structure)


def test_genus_rh_integrality_flag():
    g, ok = genus_rh(25, 0, (5, 5, 5))
    assert ok and g == 6
    _, ok_bad = genus_rh(7, 0, (2, 2, 3))
    assert not ok_bad
