"""Abelian classification, counting laws, and explicit constructions."""

from fractions import Fraction

import pytest

from beauville.groups import make_group
from beauville import invariants
from beauville.abelian import (
    AbelianProfile,
    admits_structure,
    all_abelian_profiles,
    construct_structure_zpzr,
    count_Np,
    count_h_zpzr_bounds,
    exhaustive_exists,
    hurwitz_bounds_rank2,
    pair_search,
)


def test_profile_normalization():
    # invariant-factor chain from arbitrary factor lists
    assert AbelianProfile.from_any_factors([2, 3]).factors == (6,)
    assert AbelianProfile.from_any_factors([2, 2, 3]).factors == (2, 6)
    assert AbelianProfile.from_any_factors([4, 6]).factors == (2, 12)
    assert AbelianProfile.from_any_factors([5, 5]).factors == (5, 5)


def test_admits_structure_landmarks():
    # trivial and cyclic groups never admit one
    assert not admits_structure([1], 3, 3)[0]
    assert not admits_structure([12], 5, 5)[0]
    # (Z/5)^2 needs r1, r2 >= 3
    assert admits_structure([5, 5], 3, 3)[0]
    # (Z/2)^3: r1, r2 >= 5 and not both odd
    assert not admits_structure([2, 2, 2], 5, 5)[0]
    assert admits_structure([2, 2, 2], 5, 6)[0]
    assert admits_structure([2, 2, 2], 6, 6)[0]
    assert not admits_structure([2, 2, 2], 4, 6)[0]
    # (Z/3)^2: r1, r2 >= 4
    assert not admits_structure([3, 3], 3, 3)[0]
    assert admits_structure([3, 3], 4, 4)[0]
    # n_t = n_{t-1} is necessary: Z/2 x Z/4 never works
    assert not admits_structure([2, 4], 5, 6)[0]
    # symmetric in (r1, r2)
    for factors in ([2, 2, 2], [3, 3], [5, 5], [2, 6, 6]):
        for r1 in range(3, 7):
            for r2 in range(3, 7):
                assert admits_structure(factors, r1, r2)[0] == \
                    admits_structure(factors, r2, r1)[0]


def test_admits_matches_exhaustive_small():
    for profile in all_abelian_profiles(32):
        for r1 in (3, 4, 5):
            for r2 in (r1, 5):
                predicted, _ = admits_structure(profile, r1, r2)
                assert predicted == exhaustive_exists(profile, r1, r2), \
                    (profile.factors, r1, r2)


def test_pair_search_returns_valid_structures():
    from beauville.spherical import RamificationStructure, SphericalSystem

    for factors, r1, r2 in [((5, 5), 3, 3), ((3, 3), 4, 4), ((2, 2, 2), 5, 6)]:
        G = make_group("ab:" + ",".join(map(str, factors)))
        pair = pair_search(G, r1, r2)
        assert pair is not None
        struct = RamificationStructure(SphericalSystem(G, pair[0]),
                                       SphericalSystem(G, pair[1]))
        struct.validate()
        assert struct.sizes == (r1, r2)


def test_count_Np_law():
    for p in (5, 7, 11):
        N, quads = count_Np(p)
        assert N == (p - 1) * (p - 2) * (p - 3) * (p - 4)
        assert len(set(quads)) == N


def test_hurwitz_bounds_rank2():
    assert hurwitz_bounds_rank2(25) == (15000, Fraction(625, 3), 2500)
    N5 = hurwitz_bounds_rank2(5)[0]
    assert N5 == 24
    # multiplicative in prime powers: N_{p^k} = p^{4k-4} N_p
    assert hurwitz_bounds_rank2(25)[0] == 5**4 * N5
    with pytest.raises(ValueError):
        hurwitz_bounds_rank2(15)  # gcd(n, 6) != 1


def test_zpzr_bounds_sane():
    b = count_h_zpzr_bounds(7, 2)
    assert 0 < b.aut_orbit_lower <= b.aut_orbit_upper
    assert 0 < b.h_lower <= b.h_upper
    with pytest.raises(ValueError):
        count_h_zpzr_bounds(5, 3)


def test_construct_structure_zpzr():
    for p, r in [(5, 2), (7, 2), (7, 3), (11, 2)]:
        struct = construct_structure_zpzr(p, r)
        struct.validate()
        assert struct.sizes == (r + 1, r + 1)
        assert struct.types == ((p,) * (r + 1), (p,) * (r + 1))
        assert invariants.check_genus_ge_2(struct)


def test_classification_certificates_on_non_existence():
    # groups rejected by the classification truly have no structure
    for factors, r1, r2 in [((3, 3), 3, 3), ((2, 2, 2), 5, 5),
                            ((2, 4), 5, 5), ((7,), 3, 3)]:
        G = make_group("ab:" + ",".join(map(str, factors)))
        assert pair_search(G, r1, r2) is None
