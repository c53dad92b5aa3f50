"""Abelian groups: the classification of unmixed ramification structures,
exact quadruple counts for (Z/pZ)^2, Hurwitz-component bounds for (Z/nZ)^2
and (Z/pZ)^r, explicit witness construction, and a certified exhaustive
existence search.

The exhaustive search works on "socle lines": for x != 0 the lines of x are
the minimal subgroups of <x> (one per prime dividing ord x).  Two systems are
Sigma-disjoint iff their line sets are disjoint, so the search enumerates
r-tuples (sum zero, generating) by non-decreasing element id with a forced
last entry, pruned by sum-reachability and with memoized subgroup spans.
Non-existence shortcut certificates (forced line, (Z/2)^2 pigeonhole) are
themselves verified by exhausting constrained sub-searches, keeping the
search independent of the classification statement it is used to test.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Iterator, Optional, Sequence

from .groups import GroupHandle, GroupSpec, InvalidSpecError, make_group


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _is_prime(n: int) -> bool:
    return n >= 2 and _factorize(n) == {n: 1}


# ---------------------------------------------------------------------------
# profiles and the classification theorem


@dataclass(frozen=True)
class AbelianProfile:
    """Invariant factors n_1 | ... | n_t with the per-prime exponent table."""

    factors: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise InvalidSpecError(f"broken divisibility chain {self.factors}")
        if any(f < 2 for f in self.factors):
            raise InvalidSpecError(f"invariant factors must be >= 2: {self.factors}")

    @staticmethod
    def from_any_factors(factors: Sequence[int]) -> "AbelianProfile":
        """Normalize an arbitrary direct-product decomposition into invariant
        factors via the primary decomposition."""
        primary: dict[int, list[int]] = {}
        for f in factors:
            for p, e in _factorize(f).items():
                primary.setdefault(p, []).append(e)
        t = max((len(v) for v in primary.values()), default=0)
        chain = []
        for i in range(t):
            n = 1
            for p, es in primary.items():
                es_sorted = sorted(es, reverse=True)
                if i < len(es_sorted):
                    n *= p ** es_sorted[i]
            chain.append(n)
        return AbelianProfile(tuple(sorted(chain)))

    @property
    def t(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out

    def l(self, i: int, p: int) -> int:
        """Exponent of p in n_i (1-based); 0 for i <= 0."""
        if i <= 0:
            return 0
        n = self.factors[i - 1]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        return e


def admits_structure(profile: AbelianProfile | Sequence[int], r1: int, r2: int
                     ) -> tuple[bool, str]:
    """Decide existence of an unmixed ramification structure of size
    (r1, r2), with the failed condition as the reason string."""
    if not isinstance(profile, AbelianProfile):
        profile = AbelianProfile.from_any_factors(profile)
    if r1 < 3 or r2 < 3:
        raise ValueError(f"sizes must be >= 3, got ({r1}, {r2})")
    t = profile.t
    if t == 0:
        return False, "trivial group"
    if r1 < t + 1 or r2 < t + 1:
        return False, f"needs r1, r2 >= t + 1 = {t + 1}"
    if t < 2 or profile.factors[t - 1] != profile.factors[t - 2]:
        return False, "n_t = n_(t-1) fails (some primary part has cyclic top)"
    if profile.l(t - 1, 3) > profile.l(t - 2, 3):
        if r1 < 4 or r2 < 4:
            return False, "3-part forces r1, r2 >= 4"
    if profile.l(t - 1, 2) != profile.l(t - 2, 2):
        return False, "l_(t-1)(2) = l_(t-2)(2) fails"
    if profile.l(t - 2, 2) > profile.l(t - 3, 2):
        if r1 < 5 or r2 < 5:
            return False, "2-part forces r1, r2 >= 5"
        if r1 % 2 == 1 and r2 % 2 == 1:
            return False, "2-part forbids r1, r2 both odd"
    return True, "all conditions hold"


def all_abelian_profiles(max_order: int) -> list[AbelianProfile]:
    """Every abelian group of order 2..max_order, as invariant factors."""

    def partitions(n: int) -> Iterator[tuple[int, ...]]:
        def rec(n, maxpart):
            if n == 0:
                yield ()
                return
            for k in range(min(n, maxpart), 0, -1):
                for rest in rec(n - k, k):
                    yield (k,) + rest

        yield from rec(n, n)

    out = []
    for order in range(2, max_order + 1):
        fac = _factorize(order)
        primes = sorted(fac)
        choices = [list(partitions(fac[p])) for p in primes]
        for combo in itertools.product(*choices):
            flat = []
            for p, part in zip(primes, combo):
                flat.extend(p ** e for e in part)
            out.append(AbelianProfile.from_any_factors(flat))
    return out


# ---------------------------------------------------------------------------
# quadruples and bounds


def count_Np(p: int) -> tuple[int, list[tuple[int, int, int, int]]]:
    """Exhaustive scan of U^4 for the quadruple conditions
    a-b, a+c, c-d, b+d, a+c-b-d, ad-bc all units; checked against
    (p-1)(p-2)(p-3)(p-4)."""
    if not _is_prime(p) or p < 5:
        raise ValueError(f"p = {p} must be a prime >= 5")
    quads = []
    for a in range(1, p):
        for b in range(1, p):
            if a == b:
                continue
            for c in range(1, p):
                if (a + c) % p == 0:
                    continue
                for d in range(1, p):
                    if (c - d) % p == 0 or (b + d) % p == 0:
                        continue
                    if (a + c - b - d) % p == 0 or (a * d - b * c) % p == 0:
                        continue
                    quads.append((a, b, c, d))
    n_formula = (p - 1) * (p - 2) * (p - 3) * (p - 4)
    assert len(quads) == n_formula, (p, len(quads), n_formula)
    return len(quads), quads


def hurwitz_bounds_rank2(n: int) -> tuple[int, Fraction, Fraction]:
    """(N_n, N_n/72, N_n/6) for G = (Z/nZ)^2, tau = (n,n,n), gcd(n,6) = 1."""
    if n < 5 or gcd(n, 6) != 1:
        raise ValueError(f"need n >= 5 with gcd(n, 6) = 1, got {n}")
    N = 1
    for p, k in _factorize(n).items():
        N *= p ** (4 * k - 4) * (p - 1) * (p - 2) * (p - 3) * (p - 4)
    if _is_prime(n):
        assert N == count_Np(n)[0]
    return N, Fraction(N, 72), Fraction(N, 6)


def _gl_order(k: int, p: int) -> int:
    out = 1
    for i in range(k):
        out *= p**k - p**i
    return out


@dataclass(frozen=True)
class ZpZrBounds:
    aut_orbit_lower: int
    aut_orbit_upper: int
    h_lower: Fraction
    h_upper: Fraction


def count_h_zpzr_bounds(p: int, r: int) -> ZpZrBounds:
    """Bounds for G = (Z/pZ)^r, tau = (p,...,p) with r+1 entries: the
    Aut-orbit count of U is between the displayed product and |GL(r,p)|;
    the wreath action has orbits of sizes between (r+1)! and ((r+1)!)^2
    (doubled by the pair swap), giving the h bounds."""
    if r < 2:
        raise ValueError("rank r must be >= 2")
    if not _is_prime(p) or p <= 5:
        raise ValueError(f"p = {p} must be a prime > 5")
    lower = (_gl_order(r - 2, p) * p ** (2 * (r - 2))
             * ((p - 1) * (p - 2)) ** (r - 2)
             * (p * p - 3 * p + 1) * (p * p - 8 * p + 15))
    upper = _gl_order(r, p)
    f = factorial(r + 1)
    return ZpZrBounds(lower, upper, Fraction(lower, 2 * f * f),
                      Fraction(upper, f))


# ---------------------------------------------------------------------------
# socle-line machinery


class _LineData:
    def __init__(self, G: GroupHandle):
        self.G = G
        line_index: dict[int, int] = {}
        masks = [0] * G.order
        for x in range(G.order):
            if x == G.identity:
                continue
            o = G.element_order(x)
            m = 0
            for q in _prime_factors(o):
                y = self._scalar(G, x, o // q)
                # canonical line id: minimal element id on the line
                best, z = y, y
                for _ in range(1, q):
                    if z < best:
                        best = z
                    z = G.mul(z, y)
                lid = line_index.setdefault(best, len(line_index))
                m |= 1 << lid
            masks[x] = m
        self.masks = masks
        self.nlines = len(line_index)
        self.all_mask = (1 << self.nlines) - 1

    @staticmethod
    def _scalar(G: GroupHandle, x: int, k: int) -> int:
        out = G.identity
        for _ in range(k):
            out = G.mul(out, x)
        return out


_LINE_CACHE: dict[str, _LineData] = {}
_SPAN_CACHE: dict[str, tuple] = {}


def _line_data(G: GroupHandle) -> _LineData:
    key = str(G.spec)
    if key not in _LINE_CACHE:
        _LINE_CACHE[key] = _LineData(G)
    return _LINE_CACHE[key]


def _span_tools(G: GroupHandle):
    key = str(G.spec)
    if key not in _SPAN_CACHE:
        members = [frozenset([G.identity])]
        index = {members[0]: 0}
        ext: dict[tuple[int, int], int] = {}
        _SPAN_CACHE[key] = (members, index, ext)
    members, index, ext = _SPAN_CACHE[key]

    def extend(sid: int, x: int) -> int:
        k = (sid, x)
        got = ext.get(k)
        if got is not None:
            return got
        mult = [G.identity]
        z = x
        while z != G.identity:
            mult.append(z)
            z = G.mul(z, x)
        new = frozenset(G.mul(s, m) for s in members[sid] for m in mult)
        nid = index.get(new)
        if nid is None:
            nid = len(members)
            members.append(new)
            index[new] = nid
        ext[k] = nid
        return nid

    return extend, members


def _systems(G: GroupHandle, ld: _LineData, r: int, allowed_mask: int,
             tau: Optional[Sequence[int]] = None) -> Iterator[tuple[int, ...]]:
    """All r-entry spherical systems whose lines fall inside allowed_mask
    (each yielded once up to ordering: first r-1 entries non-decreasing)."""
    masks = ld.masks
    orders = G.element_orders
    allowed = [x for x in range(G.order)
               if x != G.identity and masks[x] & ~allowed_mask == 0]
    remaining: Optional[Counter] = None
    if tau is not None:
        remaining = Counter(tau)
        assert len(tau) == r
        allowed = [x for x in allowed if int(orders[x]) in remaining]
    if not allowed:
        return
    extend, members = _span_tools(G)
    sid_all = 0
    for x in allowed:
        sid_all = extend(sid_all, x)
    if len(members[sid_all]) != G.order:
        return
    allowed_set = set(allowed)
    reach = [{G.identity}]
    for _ in range(r):
        reach.append({G.mul(a, x) for a in reach[-1] for x in allowed})
    if G.identity not in reach[r]:
        return
    inv = G.inv
    n = len(allowed)
    prefix: list[int] = []

    def rec(start: int, depth: int, s: int, sid: int):
        if depth == r - 1:
            last = inv(s)
            if last == G.identity or last not in allowed_set:
                return
            if remaining is not None:
                left = next(k for k, v in remaining.items() if v > 0)
                if int(orders[last]) != left:
                    return
            fid = extend(sid, last)
            if len(members[fid]) == G.order:
                yield tuple(prefix) + (last,)
            return
        slots_left = r - depth - 1
        for i in range(start, n):
            x = allowed[i]
            o = int(orders[x])
            if remaining is not None and remaining[o] == 0:
                continue
            s2 = G.mul(s, x)
            if inv(s2) not in reach[slots_left]:
                continue
            if remaining is not None:
                remaining[o] -= 1
            prefix.append(x)
            yield from rec(i, depth + 1, s2, extend(sid, x))
            prefix.pop()
            if remaining is not None:
                remaining[o] += 1

    yield from rec(0, 0, G.identity, 0)


def _find_system(G, ld, r, allowed_mask, tau=None):
    return next(_systems(G, ld, r, allowed_mask, tau), None)


def _h2_subgroup(G: GroupHandle) -> Optional[list[int]]:
    """H_2 = 2^(k-1) G_2 where k is the 2-exponent of G; None if |G| is odd."""
    exp = G.spec.params[-1]
    k = 0
    while exp % 2 == 0:
        exp //= 2
        k += 1
    if k == 0:
        return None
    g2 = [x for x in range(G.order)
          if (G.element_order(x) & (G.element_order(x) - 1)) == 0]  # 2-power order
    mult = 1 << (k - 1)
    return sorted({_LineData._scalar(G, x, mult) for x in g2})


def _certified_none(G: GroupHandle, ld: _LineData, r1: int, r2: int) -> bool:
    """Sound non-existence certificates, each verified by exhausting a
    constrained sub-search (never by quoting the classification theorem)."""
    ALL = ld.all_mask

    def none_r(r: int, mask: int) -> bool:
        return _find_system(G, ld, r, mask) is None

    if none_r(r1, ALL) or (r2 != r1 and none_r(r2, ALL)):
        return True
    # forced line on both sides: every system's line set contains l
    for l in range(ld.nlines):
        mask = ALL & ~(1 << l)
        if none_r(r1, mask) and (r1 == r2 or none_r(r2, mask)):
            return True
    # (Z/2)^2 pigeonhole: if H_2 has exactly 3 lines and no system avoids
    # two of them, every pair of systems overlaps in an H_2 line
    h2 = _h2_subgroup(G)
    if h2 is not None and len(h2) == 4:
        bits = [ld.masks[x] for x in h2 if x != G.identity]
        pair_masks = [ALL & ~(b1 | b2)
                      for b1, b2 in itertools.combinations(bits, 2)]
        if all(none_r(r1, m) for m in pair_masks):
            if r1 == r2 or all(none_r(r2, m) for m in pair_masks):
                return True
    return False


_PAIR_CACHE: dict[tuple, Optional[tuple[tuple, tuple]]] = {}


def pair_search(G: GroupHandle, r1: int, r2: int,
                tau1: Optional[Sequence[int]] = None,
                tau2: Optional[Sequence[int]] = None
                ) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Exhaustive: a disjoint pair of systems of sizes (r1, r2) (optionally
    with prescribed types) as element-id tuples, or None (certified)."""
    assert G.is_abelian
    key = (str(G.spec), r1, r2,
           tuple(tau1) if tau1 is not None else None,
           tuple(tau2) if tau2 is not None else None)
    if key in _PAIR_CACHE:
        return _PAIR_CACHE[key]
    t = len(G.spec.params)
    result = None
    if r1 - 1 < t or r2 - 1 < t:
        # an r-system is generated by its first r-1 entries (the last is
        # determined), so t <= r-1 is necessary
        _PAIR_CACHE[key] = None
        return None
    ld = _line_data(G)
    untyped = tau1 is None and tau2 is None
    if untyped and _certified_none(G, ld, r1, r2):
        _PAIR_CACHE[key] = None
        return None
    seen: set[int] = set()
    for ids1 in _systems(G, ld, r1, ld.all_mask, tau1):
        sig = 0
        for x in ids1:
            sig |= ld.masks[x]
        if sig in seen:
            continue
        seen.add(sig)
        ids2 = _find_system(G, ld, r2, ld.all_mask & ~sig, tau2)
        if ids2 is not None:
            result = (ids1, ids2)
            break
    _PAIR_CACHE[key] = result
    return result


def exhaustive_exists(profile: AbelianProfile | Sequence[int], r1: int,
                      r2: int) -> bool:
    """Exhaustive-search oracle matching admits_structure's domain."""
    if not isinstance(profile, AbelianProfile):
        profile = AbelianProfile.from_any_factors(profile)
    G = make_group(GroupSpec("abelian", profile.factors))
    return pair_search(G, r1, r2) is not None


# ---------------------------------------------------------------------------
# explicit construction for (Z/pZ)^r


def _pattern_side(p: int, r: int, cycle: list[tuple[int, int]],
                  star_pool: list[tuple[int, int]],
                  last_tail: tuple[int, int]) -> Optional[list[tuple]]:
    """Standard-basis pattern: rows e_i + tail for i <= r-2, two pure-tail
    rows with (*,*) slots from star_pool, and the fixed final row
    (-1,...,-1 | last_tail).  Returns r+1 vectors of length r, or None."""

    def vec(head_one: Optional[int], tail: tuple[int, int],
            head_fill: int = 0) -> tuple:
        head = [head_fill % p] * (r - 2)
        if head_one is not None:
            head[head_one] = 1
        return tuple(head) + (tail[0] % p, tail[1] % p)

    fixed_tails = [cycle[i % len(cycle)] for i in range(r - 2)]
    need = (-(sum(t[0] for t in fixed_tails) + last_tail[0]) % p,
            -(sum(t[1] for t in fixed_tails) + last_tail[1]) % p)
    for s1 in star_pool:
        for s2 in star_pool:
            if ((s1[0] + s2[0]) % p, (s1[1] + s2[1]) % p) != need:
                continue
            if (s1[0] * s2[1] - s1[1] * s2[0]) % p == 0:
                continue  # the two pure-tail rows must be independent
            rows = [vec(i, fixed_tails[i]) for i in range(r - 2)]
            rows.append(vec(None, s1))
            rows.append(vec(None, s2))
            rows.append(vec(None, last_tail, head_fill=-1))
            if any(all(v == 0 for v in row) for row in rows):
                continue
            return rows
    return None


def construct_structure_zpzr(p: int, r: int):
    """A verified unmixed ramification structure for (Z/pZ)^r of type
    (p,...,p) with r+1 entries per side, from the standard-basis pattern and
    the first valid quadruple (a,b,c,d)."""
    from .spherical import RamificationStructure, system_from_encodings

    if r < 2:
        raise ValueError("rank r must be >= 2")
    if not _is_prime(p) or p < 5 or (p == 5 and r > 2):
        raise ValueError(f"need prime p > 5 (p = 5 allowed for r = 2), got {p}")
    G = make_group(GroupSpec("abelian", (p,) * r))
    x_rows = _pattern_side(
        p, r,
        cycle=[(1, 0), (0, 1), (-1, 0), (0, -1)],
        star_pool=[(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1)],
        last_tail=(-1, -1),
    )
    if x_rows is None:
        raise RuntimeError(f"construction failure on the x-side for p={p}, r={r}")
    _, quads = count_Np(p)
    for (a, b, c, d) in quads:
        y_rows = _pattern_side(
            p, r,
            cycle=[(a, b), (c, d), (-a, -b), (-c, -d)],
            star_pool=[(a, b), (-a, -b), (c, d), (-c, -d),
                       (a + c, b + d), (-a - c, -b - d)],
            last_tail=(-a - c, -b - d),
        )
        if y_rows is None:
            continue
        try:
            T1 = system_from_encodings(G, x_rows)
            T2 = system_from_encodings(G, y_rows)
            struct = RamificationStructure(T1, T2)
            struct.validate()
        except (ValueError, AssertionError):
            continue
        return struct
    raise RuntimeError(
        f"construction failure: no quadruple worked for p={p}, r={r}"
    )
