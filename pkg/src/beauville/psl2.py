"""Closed-form counting for PSL(2,p) via traces.

Trace sets T_l are computed by an exhaustive (vectorized) scan over all of
SL(2,p): for every matrix the order of its image in PSL(2,p) is found by
iterated powering, and traces are grouped by that order.  The scan is the
oracle; the classical case split (|T_p| = 2, |T_2| = 1, |T_r| = phi(r) when
r >= 3 divides (p +- 1)/2, else 0) is checked against it.

On top of the trace sets: the Macbeath-criterion count d', its closed forms,
and the p-independent upper bound for h(PSL(2,p)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .spherical import is_hyperbolic


class HypothesisViolationError(ValueError):
    pass


def phi(n: int) -> int:
    out = 0
    for k in range(1, n + 1):
        if gcd(k, n) == 1:
            out += 1
    return out


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class TraceSet:
    p: int
    l: int
    traces: frozenset[int]

    def __post_init__(self):
        assert all((-a) % self.p in self.traces for a in self.traces), \
            "trace set must be closed under negation"


@lru_cache(maxsize=None)
def _order_by_trace(p: int) -> dict[int, int]:
    """Map trace -> PSL(2,p) order, by scanning every matrix of SL(2,p)."""
    assert _is_odd_prime(p), f"p = {p} must be an odd prime"
    # enumerate all of SL(2,p): a != 0 with d forced, plus a = 0 with c forced
    a_rng = np.arange(1, p, dtype=np.int64)
    b_rng = np.arange(p, dtype=np.int64)
    c_rng = np.arange(p, dtype=np.int64)
    A, B, C = np.meshgrid(a_rng, b_rng, c_rng, indexing="ij")
    A, B, C = A.ravel(), B.ravel(), C.ravel()
    a_inv = np.array([0] + [pow(int(x), -1, p) for x in range(1, p)],
                     dtype=np.int64)
    D = (1 + B * C) % p * a_inv[A] % p
    b0 = np.arange(1, p, dtype=np.int64)
    c0 = np.array([pow(int(x), -1, p) * (p - 1) % p for x in b0],
                  dtype=np.int64)
    d0 = np.repeat(np.arange(p, dtype=np.int64), p - 1)
    A = np.concatenate([A, np.zeros((p - 1) * p, dtype=np.int64)])
    B = np.concatenate([B, np.tile(b0, p)])
    C = np.concatenate([C, np.tile(c0, p)])
    D = np.concatenate([D, d0])
    assert len(A) == p * (p * p - 1)

    trace = (A + D) % p
    order = np.zeros(len(A), dtype=np.int64)
    # M^1 = M: matrices that are already +-I have PSL order 1
    Pa, Pb, Pc, Pd = A.copy(), B.copy(), C.copy(), D.copy()

    def is_pm_identity(a, b, c, d):
        ident = (a == 1) & (d == 1) & (b == 0) & (c == 0)
        negid = (a == p - 1) & (d == p - 1) & (b == 0) & (c == 0)
        return ident | negid

    k = 1
    done = is_pm_identity(Pa, Pb, Pc, Pd)
    order[done] = 1
    while not done.all():
        k += 1
        assert k <= p + 1, "order scan failed to terminate"
        Qa = (Pa * A + Pb * C) % p
        Qb = (Pa * B + Pb * D) % p
        Qc = (Pc * A + Pd * C) % p
        Qd = (Pc * B + Pd * D) % p
        Pa, Pb, Pc, Pd = Qa, Qb, Qc, Qd
        hit = is_pm_identity(Pa, Pb, Pc, Pd) & ~done
        order[hit] = k
        done |= hit
    out: dict[int, int] = {}
    for t, o in zip(trace.tolist(), order.tolist()):
        prev = out.get(t)
        if prev is None:
            out[t] = o
        else:
            # all non-identity matrices of equal trace share one PSL order;
            # trace +-2 mixes +-I (order 1) with unipotents (order p)
            if {prev, o} == {1, p} or prev == o:
                out[t] = max(prev, o)
            else:
                raise AssertionError((p, t, prev, o))
    return out


def _expected_size(p: int, l: int) -> int:
    if l == p:
        return 2
    if l == 2:
        return 1
    if l >= 3 and ((p - 1) // 2 % l == 0 or (p + 1) // 2 % l == 0):
        return phi(l)
    return 0


def trace_set(p: int, l: int) -> TraceSet:
    if not _is_odd_prime(p):
        raise ValueError(f"p = {p} must be an odd prime")
    if l < 2:
        raise ValueError(f"order l = {l} must be >= 2")
    by_trace = _order_by_trace(p)
    traces = frozenset(t for t, o in by_trace.items() if o == l)
    assert len(traces) == _expected_size(p, l), (p, l, sorted(traces))
    return TraceSet(p, l, traces)


def _sign_pairs(p: int, traces: frozenset[int]) -> list[int]:
    """Representatives of the +-pairs, each taken in {0..(p-1)/2}."""
    return sorted({min(a, (p - a) % p) for a in traces})


def d_prime(p: int, triple: tuple[int, int, int]) -> int:
    """Number of PGL(2,p)-orbits of 3-systems of type (l,m,n), counted as
    sign-classes of trace triples passing the Macbeath criterion."""
    l, m, n = triple
    if not (2 <= l <= m <= n):
        raise HypothesisViolationError(f"need 2 <= l <= m <= n, got {triple}")
    if m <= 2 or n <= 5:
        raise HypothesisViolationError(
            f"need m > 2 and n > 5, got {triple}; use brute-force orbits"
        )
    pools = []
    for o in (l, m, n):
        ts = trace_set(p, o)
        if not ts.traces:
            return 0
        pools.append(_sign_pairs(p, ts.traces))
    # sign classes: one +-pair per position, unordered within equal orders
    import itertools as it

    combos: list[tuple[int, ...]] = [()]
    i = 0
    orders = (l, m, n)
    while i < 3:
        j = i
        while j < 3 and orders[j] == orders[i]:
            j += 1
        block = list(it.combinations_with_replacement(pools[i], j - i))
        combos = [c + b for c in combos for b in block]
        i = j
    count = 0
    for (al, be, ga) in combos:
        s = (al * al + be * be + ga * ga) % p
        t = (al * be * ga) % p
        if (s - t) % p != 4 % p or (s + t) % p != 4 % p:
            count += 1
    return count


def d_prime_closed(p: int, triple: tuple[int, int, int]) -> tuple[int, str]:
    """Closed-form d' (tag "exact") or the case-(vi) bound (tag "bound")."""
    l, m, n = sorted(triple)
    if not (2 <= l <= m <= n) or m <= 2 or n <= 5:
        raise HypothesisViolationError(
            f"closed forms need 2 <= l <= m <= n, m > 2, n > 5: {triple}"
        )
    if p < 5:
        raise HypothesisViolationError("closed forms stated for p >= 5")

    def divides_half(r: int) -> bool:
        return (p - 1) // 2 % r == 0 or (p + 1) // 2 % r == 0

    if (l, m, n) == (2, 3, p):
        return 1, "exact"
    if (l, m) == (2, 3) and n >= 7 and divides_half(n):
        return phi(n) // 2, "exact"
    if (l, m, n) == (p, p, p):
        return 1, "exact"
    if l == m == n and n >= 7 and divides_half(n):
        psi = phi(n) // 2
        return psi * (psi + 1) * (psi + 2) // 6, "exact"
    if 2 < l < m < n and all(divides_half(r) for r in (l, m, n)):
        return phi(l) * phi(m) * phi(n) // 8, "exact"
    return phi(l) * phi(m) * phi(n) // 8, "bound"


def h_upper_bound(tau1: tuple[int, int, int], tau2: tuple[int, int, int]
                  ) -> int:
    """Thm-level constant c = prod phi / 16 with h(PSL(2,p)) <= c, all p."""
    for tau in (tau1, tau2):
        if not is_hyperbolic(tau):
            raise ValueError(f"type {tau} is not hyperbolic")
    out = 1
    for r in tuple(tau1) + tuple(tau2):
        out *= phi(r)
    if out % 16:
        from fractions import Fraction

        return Fraction(out, 16)
    return out // 16


def order_of_trace(p: int, alpha: int) -> int:
    """PSL(2,p) order of (the image of) any SL(2,p) matrix of this trace."""
    return _order_by_trace(p)[alpha % p]
