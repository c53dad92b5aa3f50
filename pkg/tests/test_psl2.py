"""Trace sets and closed-form counts for PSL(2,p)."""

from fractions import Fraction

import pytest

from beauville.groups import make_group
from beauville import psl2
from beauville.psl2 import (
    HypothesisViolationError,
    d_prime,
    d_prime_closed,
    h_upper_bound,
    order_of_trace,
    phi,
    trace_set,
)


def test_phi():
    assert [phi(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]


def test_trace_set_case_split_small_primes():
    for p in (5, 7, 11, 13, 17):
        half = [(p - 1) // 2, (p + 1) // 2]
        for l in range(2, p + 2):
            ts = trace_set(p, l)  # internal assert checks the size law
            if l == p:
                assert ts.traces == {2 % p, (p - 2) % p}
            elif l == 2:
                assert ts.traces == {0}
            elif any(h % l == 0 for h in half):
                assert len(ts.traces) == phi(l)
            else:
                assert not ts.traces


def test_trace_set_rejects_bad_input():
    with pytest.raises(ValueError):
        trace_set(9, 2)
    with pytest.raises(ValueError):
        trace_set(7, 1)


def test_traces_match_group_element_orders():
    # cross-check against the actual PSL(2,p) group: the order of an element
    # equals the scan's order for (a representative with) its trace
    p = 7
    G = make_group("psl2:7")
    for x in range(G.order):
        if x == G.identity:
            continue  # trace +-2 mixes +-I with the unipotents
        a, b, c, d = G.enc_of(x)
        t = (a + d) % p
        assert order_of_trace(p, t) == G.element_order(x)


def test_d_prime_known_values():
    assert d_prime(7, (2, 3, 7)) == 1
    assert d_prime(11, (2, 3, 11)) == 1
    assert d_prime(13, (2, 3, 13)) == 1
    assert d_prime(13, (2, 3, 7)) == 3
    assert d_prime(13, (7, 7, 7)) == 10
    assert d_prime(13, (13, 13, 13)) == 1
    assert d_prime(7, (7, 7, 7)) == 1


def test_d_prime_zero_when_order_missing():
    assert d_prime(7, (2, 3, 11)) == 0  # no order-11 elements in PSL(2,7)


def test_d_prime_hypotheses():
    with pytest.raises(HypothesisViolationError):
        d_prime(7, (2, 2, 7))  # m > 2 required
    with pytest.raises(HypothesisViolationError):
        d_prime(7, (2, 3, 5))  # n > 5 required


def test_d_prime_closed_forms_agree_with_trace_count():
    for p in (7, 11, 13):
        for triple in [(2, 3, p), (p, p, p)]:
            closed, tag = d_prime_closed(p, triple)
            assert tag == "exact"
            assert closed == d_prime(p, triple)
    closed, tag = d_prime_closed(13, (7, 7, 7))
    assert (closed, tag) == (10, "exact")
    assert d_prime(13, (7, 7, 7)) == 10
    # 2 < l < m < n all dividing (p +- 1)/2
    closed, tag = d_prime_closed(13, (3, 6, 7))
    assert tag == "exact"
    assert closed == d_prime(13, (3, 6, 7))


def test_h_upper_bound_constant():
    c = h_upper_bound((2, 3, 7), (2, 3, 7))
    assert c == Fraction(phi(2) * phi(3) * phi(7) * phi(2) * phi(3) * phi(7),
                         16)
    assert h_upper_bound((7, 7, 7), (7, 7, 7)) == 2916  # 6^6 / 16
    with pytest.raises(ValueError):
        h_upper_bound((2, 3, 6), (7, 7, 7))  # not hyperbolic
