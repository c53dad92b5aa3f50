"""Spherical systems of generators, Sigma-sets, disjointness, and searches
for unmixed ramification structures.

A spherical r-system for G is a tuple (x_1,...,x_r) with x_1 * ... * x_r = 1
and <x_1,...,x_r> = G; its type is the sorted multiset of entry orders.  Two
systems are disjoint when their Sigma-sets (all conjugates of all powers of
the entries) meet only in the identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .groups import ForeignElementError, GroupError, GroupHandle

DEFAULT_ENUM_BUDGET = 10**8
DEFAULT_TRIALS = 10**6


class BudgetExceededError(GroupError):
    def __init__(self, bound, budget):
        super().__init__(f"enumeration bound {bound} exceeds budget {budget}")
        self.bound = bound
        self.budget = budget


class GroupMismatchError(GroupError):
    pass


def normalize_type(orders: Sequence[int]) -> tuple[int, ...]:
    tau = tuple(sorted(int(m) for m in orders))
    if len(tau) < 3:
        raise ValueError(f"type needs size >= 3, got {tau}")
    if any(m < 2 for m in tau):
        raise ValueError(f"type entries must be >= 2, got {tau}")
    return tau


def is_hyperbolic(triple: Sequence[int]) -> bool:
    r, s, t = triple
    if min(r, s, t) < 2:
        raise ValueError(f"triple entries must be >= 2, got {triple}")
    return Fraction(1, r) + Fraction(1, s) + Fraction(1, t) < 1


@dataclass(frozen=True)
class SphericalSystem:
    group: GroupHandle
    ids: tuple[int, ...]

    @cached_property
    def type_vector(self) -> tuple[int, ...]:
        return tuple(sorted(self.group.element_order(x) for x in self.ids))

    @property
    def encodings(self) -> tuple[tuple, ...]:
        return tuple(self.group.enc_of(x) for x in self.ids)

    @cached_property
    def signature(self) -> int:
        """Bitmask over nontrivial conjugacy-class ids of all entry powers."""
        m = 0
        for x in self.ids:
            m |= self.group.power_class_mask[x]
        return m

    @cached_property
    def sigma_ids(self) -> frozenset[int]:
        G = self.group
        out = {G.identity}
        mask = self.signature
        c = 0
        while mask:
            if mask & 1:
                out.update(G.class_members[c])
            mask >>= 1
            c += 1
        return frozenset(out)

    def validate(self) -> None:
        G = self.group
        if len(self.ids) < 3:
            raise ValueError(f"system length {len(self.ids)} < 3")
        prod = G.identity
        for x in self.ids:
            prod = G.mul(prod, x)
        if prod != G.identity:
            raise ValueError("product of entries is not the identity")
        if any(x == G.identity for x in self.ids):
            raise ValueError("identity entries are not allowed (orders must be >= 2)")
        if not G.generates(self.ids):
            raise ValueError("entries do not generate the group")


def system_from_encodings(G: GroupHandle, encs: Sequence, check: bool = True
                          ) -> SphericalSystem:
    T = SphericalSystem(G, tuple(G.id_of(e) for e in encs))
    if check:
        T.validate()
    return T


def is_spherical_system(G: GroupHandle, entries: Sequence
                        ) -> tuple[bool, Optional[tuple[int, ...]]]:
    """(flag, sorted type).  Entries are encodings; length must be >= 3."""
    ids = [G.id_of(e) for e in entries]
    if len(ids) < 3:
        raise ValueError(f"need at least 3 entries, got {len(ids)}")
    prod = G.identity
    for x in ids:
        prod = G.mul(prod, x)
    if prod != G.identity or any(x == G.identity for x in ids):
        return False, None
    if not G.generates(ids):
        return False, None
    return True, tuple(sorted(G.element_order(x) for x in ids))


def sigma_set(G: GroupHandle, T: SphericalSystem) -> set[tuple]:
    if T.group is not G:
        raise GroupMismatchError("system does not belong to this group")
    return {G.enc_of(i) for i in T.sigma_ids}


def are_disjoint(T1: SphericalSystem, T2: SphericalSystem) -> bool:
    if T1.group is not T2.group:
        raise GroupMismatchError("systems live in different groups")
    return (T1.signature & T2.signature) == 0


@dataclass(frozen=True)
class RamificationStructure:
    first: SphericalSystem
    second: SphericalSystem

    @property
    def group(self) -> GroupHandle:
        return self.first.group

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.first.ids), len(self.second.ids)

    @property
    def types(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.first.type_vector, self.second.type_vector

    def validate(self) -> None:
        if self.first.group is not self.second.group:
            raise GroupMismatchError("systems live in different groups")
        self.first.validate()
        self.second.validate()
        if not are_disjoint(self.first, self.second):
            raise ValueError("Sigma-sets are not disjoint")

    @property
    def is_beauville(self) -> bool:
        return self.sizes == (3, 3)


# ---------------------------------------------------------------------------
# enumeration


def _candidates_by_order(G: GroupHandle, orders: set[int]) -> dict[int, list[int]]:
    pools: dict[int, list[int]] = {m: [] for m in orders}
    for x in range(G.order):
        m = G.element_order(x)
        if m in pools:
            pools[m].append(x)
    return pools


def enumerate_systems(G: GroupHandle, tau: Sequence[int],
                      budget: int = DEFAULT_ENUM_BUDGET,
                      up_to_inner: bool = False,
                      allowed: Optional[Sequence[int]] = None,
                      ) -> Iterator[SphericalSystem]:
    """Yield every ordered system with sorted type tau exactly once.

    With up_to_inner the first entry only runs over conjugacy-class
    representatives, producing at least one member of each Inn(G)-orbit.
    `allowed` optionally restricts all entries to the given element ids.
    """
    tau = normalize_type(tau)
    r = len(tau)
    if G.order ** (r - 1) > budget:
        raise BudgetExceededError(G.order ** (r - 1), budget)
    pools = _candidates_by_order(G, set(tau))
    if allowed is not None:
        allow = set(allowed)
        pools = {m: [x for x in xs if x in allow] for m, xs in pools.items()}
    from collections import Counter

    remaining = Counter(tau)
    prefix: list[int] = []

    first_pool: dict[int, list[int]] | None = None
    if up_to_inner:
        first_pool = {
            m: sorted({G.classes[int(G.class_of[x])].rep for x in xs})
            for m, xs in pools.items()
        }
        if allowed is not None:
            # class reps may fall outside `allowed`; fall back to minimal
            # allowed member per class instead
            first_pool = {}
            for m, xs in pools.items():
                best: dict[int, int] = {}
                for x in xs:
                    c = int(G.class_of[x])
                    if c not in best or x < best[c]:
                        best[c] = x
                first_pool[m] = sorted(best.values())

    def rec(prod: int) -> Iterator[SphericalSystem]:
        depth = len(prefix)
        if depth == r - 1:
            last = G.inv(prod)
            if last == G.identity:
                return
            m = G.element_order(last)
            if remaining[m] != 1:
                return
            if allowed is not None and last not in pools.get(m, []):
                return
            ids = tuple(prefix) + (last,)
            if G.generates(ids):
                yield SphericalSystem(G, ids)
            return
        src = first_pool if (depth == 0 and first_pool is not None) else pools
        for m in sorted(remaining):
            if remaining[m] == 0:
                continue
            remaining[m] -= 1
            for x in src[m]:
                prefix.append(x)
                yield from rec(G.mul(prod, x))
                prefix.pop()
            remaining[m] += 1

    yield from rec(G.identity)


# ---------------------------------------------------------------------------
# structure search


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" | "none-exhaustive" | "none-inconclusive"
    structure: Optional[RamificationStructure] = None

    @property
    def found(self) -> bool:
        return self.status == "found"

    @property
    def certified_none(self) -> bool:
        return self.status == "none-exhaustive"


def _partner_allowed(G: GroupHandle, sig: int) -> list[int]:
    mask = G.power_class_mask
    return [x for x in range(G.order)
            if x != G.identity and (mask[x] & sig) == 0]


def exists_unmixed_structure(G: GroupHandle, tau1: Sequence[int],
                             tau2: Sequence[int], mode: str = "exhaustive",
                             budget: int = DEFAULT_ENUM_BUDGET,
                             trials: int = DEFAULT_TRIALS,
                             seed: int = 0) -> SearchResult:
    """Search for an unmixed ramification structure of type (tau1, tau2).

    Exhaustive mode returns a verified structure or a proof of non-existence;
    randomized mode returns found or an inconclusive none.
    """
    tau1 = normalize_type(tau1)
    tau2 = normalize_type(tau2)
    if mode == "exhaustive":
        if G.is_abelian:
            from . import abelian

            pair = abelian.pair_search(G, len(tau1), len(tau2),
                                       tau1=tau1, tau2=tau2)
            if pair is None:
                return SearchResult("none-exhaustive")
            struct = RamificationStructure(SphericalSystem(G, pair[0]),
                                           SphericalSystem(G, pair[1]))
            struct.validate()
            return SearchResult("found", struct)
        seen_sigs: set[int] = set()
        for T1 in enumerate_systems(G, tau1, budget=budget, up_to_inner=True):
            sig = T1.signature
            if sig in seen_sigs:
                continue
            seen_sigs.add(sig)
            allowed = _partner_allowed(G, sig)
            if not G.generates(allowed):
                continue
            for T2 in enumerate_systems(G, tau2, budget=budget,
                                        up_to_inner=True, allowed=allowed):
                struct = RamificationStructure(T1, T2)
                struct.validate()
                return SearchResult("found", struct)
        return SearchResult("none-exhaustive")
    if mode != "randomized":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    pools1 = _candidates_by_order(G, set(tau1))
    pools2 = _candidates_by_order(G, set(tau2))
    if any(not pools1[m] for m in tau1) or any(not pools2[m] for m in tau2):
        return SearchResult("none-inconclusive")

    def draw(tau, pools):
        orders = list(tau)
        rng.shuffle(orders)
        ids = []
        prod = G.identity
        for m in orders[:-1]:
            x = rng.choice(pools[m])
            ids.append(x)
            prod = G.mul(prod, x)
        last = G.inv(prod)
        if last == G.identity or G.element_order(last) != orders[-1]:
            return None
        ids.append(last)
        if not G.generates(ids):
            return None
        return SphericalSystem(G, tuple(ids))

    for _ in range(trials):
        T1 = draw(tau1, pools1)
        if T1 is None:
            continue
        T2 = draw(tau2, pools2)
        if T2 is None or not are_disjoint(T1, T2):
            continue
        struct = RamificationStructure(T1, T2)
        struct.validate()
        return SearchResult("found", struct)
    return SearchResult("none-inconclusive")


def _span_extend_tools(G: GroupHandle):
    """Interned subgroup spans: extend(sid, x) -> sid of <span(sid), x>."""
    spans: list[frozenset[int]] = [frozenset({G.identity})]
    index: dict[frozenset[int], int] = {spans[0]: 0}
    cache: dict[tuple[int, int], int] = {}

    def extend(sid: int, x: int) -> int:
        key = (sid, x)
        out = cache.get(key)
        if out is not None:
            return out
        base = spans[sid]
        if x in base:
            cache[key] = sid
            return sid
        new = set(base)
        new.add(x)
        frontier = [x]
        while frontier:
            cur = list(new)
            nxt = []
            for b in frontier:
                for a in cur:
                    for c in (G.mul(a, b), G.mul(b, a)):
                        if c not in new:
                            new.add(c)
                            nxt.append(c)
            frontier = nxt
        fs = frozenset(new)
        out = index.get(fs)
        if out is None:
            out = len(spans)
            spans.append(fs)
            index[fs] = out
        cache[key] = out
        return out

    def size(sid: int) -> int:
        return len(spans[sid])

    return extend, size


def _find_system_of_size(G: GroupHandle, pool: Sequence[int], r: int,
                         extend, size) -> Optional[tuple[int, ...]]:
    """Some spherical r-system with all entries in `pool`, or None.

    `pool` must be closed under conjugation; the first entry then only runs
    over class-minimal pool members (conjugating the found system stays in
    the pool), which is enough for existence.
    """
    if not pool or not G.generates(pool):
        return None
    allow = set(pool)
    first: dict[int, int] = {}
    for x in pool:
        c = int(G.class_of[x])
        if c not in first or x < first[c]:
            first[c] = x
    first_pool = sorted(first.values())

    prefix: list[int] = []

    def rec(start_pool, prod: int, sid: int) -> Optional[tuple[int, ...]]:
        if len(prefix) == r - 1:
            last = G.inv(prod)
            if last == G.identity or last not in allow:
                return None
            if size(extend(sid, last)) != G.order:
                return None
            return tuple(prefix) + (last,)
        for x in start_pool:
            prefix.append(x)
            got = rec(pool, G.mul(prod, x), extend(sid, x))
            if got is not None:
                return got
            prefix.pop()
        return None

    return rec(first_pool, G.identity, 0)


def exists_unmixed_structure_of_size(G: GroupHandle, r1: int, r2: int
                                     ) -> SearchResult:
    """Exhaustive search for an unmixed structure of size (r1, r2), any types.

    Enumerates candidate first systems with a monotone prune: the Sigma-mask
    of a prefix only grows, so once the complementary elements stop
    generating G the whole subtree is dead.  Partner searches are cached by
    the full Sigma-mask of the first system.
    """
    if r1 < 3 or r2 < 3:
        raise ValueError("sizes must be >= 3")
    if G.is_abelian:
        from . import abelian

        pair = abelian.pair_search(G, r1, r2)
        if pair is None:
            return SearchResult("none-exhaustive")
        struct = RamificationStructure(SphericalSystem(G, pair[0]),
                                       SphericalSystem(G, pair[1]))
        struct.validate()
        return SearchResult("found", struct)

    mask = G.power_class_mask
    extend, size = _span_extend_tools(G)

    pool_cache: dict[int, Optional[list[int]]] = {}

    def complement_pool(sig: int) -> Optional[list[int]]:
        if sig not in pool_cache:
            B = [y for y in range(G.order)
                 if y != G.identity and (mask[y] & sig) == 0]
            pool_cache[sig] = B if B and G.generates(B) else None
        return pool_cache[sig]

    partner_cache: dict[int, Optional[tuple[int, ...]]] = {}

    def partner(sig: int) -> Optional[tuple[int, ...]]:
        if sig not in partner_cache:
            B = complement_pool(sig)
            partner_cache[sig] = (None if B is None else
                                  _find_system_of_size(G, B, r2, extend, size))
        return partner_cache[sig]

    reps = sorted({G.classes[int(G.class_of[x])].rep
                   for x in range(G.order) if x != G.identity})
    prefix: list[int] = []

    def rec(start_pool, prod: int, sid: int, sig: int
            ) -> Optional[RamificationStructure]:
        if complement_pool(sig) is None:
            return None
        if len(prefix) == r1 - 1:
            last = G.inv(prod)
            if last == G.identity:
                return None
            full_sig = sig | mask[last]
            if size(extend(sid, last)) != G.order:
                return None
            T2_ids = partner(full_sig)
            if T2_ids is None:
                return None
            T1 = SphericalSystem(G, tuple(prefix) + (last,))
            T2 = SphericalSystem(G, T2_ids)
            struct = RamificationStructure(T1, T2)
            struct.validate()
            return struct
        everything = range(G.order) if prefix else start_pool
        for x in everything:
            if x == G.identity:
                continue
            prefix.append(x)
            got = rec(start_pool, G.mul(prod, x), extend(sid, x),
                      sig | mask[x])
            if got is not None:
                return got
            prefix.pop()
        return None

    struct = rec(reps, G.identity, 0, 0)
    if struct is not None:
        return SearchResult("found", struct)
    return SearchResult("none-exhaustive")


def has_disjoint_partner(G: GroupHandle, T1: SphericalSystem
                         ) -> Optional[SphericalSystem]:
    """A partner system of *some* size disjoint from T1, or None (certified).

    A partner exists iff the elements whose power-classes avoid Sigma(T1)
    generate G: given allowed generators g_1,...,g_k the tuple
    (g_1, g_1^-1, ..., g_k, g_k^-1) (padded to length >= 3 using powers of g_1
    when k = 1) is a spherical system whose Sigma-set avoids Sigma(T1), and
    conversely every partner consists of allowed elements.
    """
    allowed = _partner_allowed(G, T1.signature)
    if not G.generates(allowed):
        return None
    # greedy generating subset
    gens: list[int] = []
    for x in allowed:
        if G.generates(gens) and len(gens) >= 1:
            break
        trial = gens + [x]
        if len(G.subgroup_closure(trial)) > len(G.subgroup_closure(gens)):
            gens = trial
            if G.generates(gens):
                break
    assert G.generates(gens)
    ids: list[int] = []
    if len(gens) == 1:
        g = gens[0]
        m = G.element_order(g)
        if m < 3:
            # G = Z/2: a single allowed involution can never give product one
            # with all entries equal to it an odd number of times; use 4 copies
            ids = [g, g, g, g] if (m == 2) else []
            if not ids:
                return None
        else:
            ids = [g] * m
    else:
        for g in gens:
            ids.extend([g, G.inv(g)])
        while len(ids) < 3:
            ids.extend([gens[0], G.inv(gens[0])])
    T2 = SphericalSystem(G, tuple(ids))
    T2.validate()
    assert are_disjoint(T1, T2)
    return T2


# ---------------------------------------------------------------------------
# serialization


def serialize_system(T: SphericalSystem) -> str:
    spec = str(T.group.spec)
    tau = ",".join(str(m) for m in T.type_vector)
    encs = ";".join(",".join(str(v) for v in e) for e in T.encodings)
    return f"{spec}|{tau}|{encs}"


def parse_system(G: GroupHandle, line: str) -> SphericalSystem:
    spec, tau, encs = line.strip().split("|")
    if spec != str(G.spec):
        raise GroupMismatchError(f"record is for {spec}, group is {G.spec}")
    entries = [tuple(int(v) for v in e.split(",")) for e in encs.split(";")]
    T = system_from_encodings(G, entries)
    if ",".join(str(m) for m in T.type_vector) != tau:
        raise ValueError("type field does not match entries")
    return T
