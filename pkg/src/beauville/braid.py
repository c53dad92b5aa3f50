"""Braid-group and Aut(G) actions on spherical systems; orbit counting.

Implements the Artin generators acting on generating tuples,

    sigma_i : (..., x_i, x_{i+1}, ...) -> (..., x_i x_{i+1} x_i^-1, x_i, ...),

the exact counts d(G;tau) (braid orbits of 3-systems, computed as
G-conjugation orbits of unordered triples) and h(G;tau1,tau2) (orbits of
disjoint pairs under (B_r1 x B_r2) x Aut(G), with the extra pair swap when
tau1 = tau2), plus the class-tuple lower bound machinery.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .groups import GroupHandle, GroupSpec, UnsupportedSizeError, make_group
from .spherical import (
    BudgetExceededError,
    SphericalSystem,
    enumerate_systems,
    exists_unmixed_structure,
    normalize_type,
)

DEFAULT_STATE_BUDGET = 10**8


@dataclass(frozen=True)
class OrbitReport:
    group: str
    tau1: tuple[int, ...]
    tau2: Optional[tuple[int, ...]]
    count: int
    method: str  # exhaustive-orbit | closed-form | lower-bound
    histogram: tuple[int, ...] = ()  # orbit sizes, descending
    seconds: float = 0.0
    total_objects: int = 0

    def to_record(self) -> dict:
        return {
            "version": 1,
            "group": self.group,
            "tau1": list(self.tau1),
            "tau2": list(self.tau2) if self.tau2 is not None else None,
            "count": self.count,
            "method": self.method,
            "histogram": list(self.histogram),
            "seconds": round(self.seconds, 3),
        }


# ---------------------------------------------------------------------------
# braid moves


def braid_move_ids(G: GroupHandle, ids: tuple[int, ...], i: int,
                   inverse: bool = False) -> tuple[int, ...]:
    """Apply sigma_i (1-based, 1 <= i <= r-1) or its inverse to an id tuple."""
    r = len(ids)
    if not 1 <= i <= r - 1:
        raise IndexError(f"braid index {i} out of range for r = {r}")
    a, b = ids[i - 1], ids[i]
    if not inverse:
        new = (G.mul(G.mul(a, b), G.inv(a)), a)
    else:
        new = (b, G.mul(G.mul(G.inv(b), a), b))
    return ids[: i - 1] + new + ids[i + 1:]


def braid_move(T: SphericalSystem, i: int, inverse: bool = False
               ) -> SphericalSystem:
    return SphericalSystem(T.group, braid_move_ids(T.group, T.ids, i, inverse))


def braid_orbit_ids(G: GroupHandle, ids: tuple[int, ...],
                    budget: int = DEFAULT_STATE_BUDGET) -> set[tuple[int, ...]]:
    seen = {ids}
    frontier = [ids]
    r = len(ids)
    while frontier:
        nxt = []
        for t in frontier:
            for i in range(1, r):
                for inv in (False, True):
                    u = braid_move_ids(G, t, i, inv)
                    if u not in seen:
                        if len(seen) >= budget:
                            raise BudgetExceededError(len(seen) + 1, budget)
                        seen.add(u)
                        nxt.append(u)
        frontier = nxt
    return seen


def braid_orbit(T: SphericalSystem, budget: int = DEFAULT_STATE_BUDGET
                ) -> set[SphericalSystem]:
    return {
        SphericalSystem(T.group, ids)
        for ids in braid_orbit_ids(T.group, T.ids, budget)
    }


# ---------------------------------------------------------------------------
# d(G;tau)


def _three_systems_pairs(G: GroupHandle, tau: Sequence[int]
                         ) -> list[tuple[int, int]]:
    """All ordered 3-systems of sorted type tau, as (x, y) with z forced."""
    tau = normalize_type(tau)
    if len(tau) != 3:
        raise ValueError(f"d(G;tau) needs a size-3 type, got {tau}")
    orders = G.element_orders
    inv = G.inverses
    try:
        table = G.table
    except UnsupportedSizeError:
        table = None
    out = []
    if table is not None:
        xs = np.nonzero(np.isin(orders, list(set(tau))))[0]
        ys = xs
        prod = table[np.ix_(xs, ys)]
        z = inv[prod]
        oz = orders[z]
        ox = orders[xs][:, None]
        oy = orders[ys][None, :]
        want = np.sort(np.stack(np.broadcast_arrays(
            ox, np.broadcast_to(oy, prod.shape), oz), axis=-1), axis=-1)
        target = np.array(tau)
        mask = (want == target).all(axis=-1)
        cand = np.argwhere(mask)
        for ii, jj in cand:
            x, y = int(xs[ii]), int(ys[jj])
            z0 = int(z[ii, jj])
            if z0 == G.identity:
                continue
            if G.generates((x, y)):
                out.append((x, y))
        return out
    from collections import Counter

    want_c = Counter(tau)
    pool = [x for x in range(G.order) if int(orders[x]) in want_c]
    for x in pool:
        for y in pool:
            z0 = G.inv(G.mul(x, y))
            if z0 == G.identity:
                continue
            c = Counter((int(orders[x]), int(orders[y]), int(orders[z0])))
            if c != want_c:
                continue
            if G.generates((x, y)):
                out.append((x, y))
    return out


def _arrangements(G: GroupHandle, x: int, y: int) -> list[tuple[int, int]]:
    """First two entries of the six arrangements of the unordered triple
    T^un of (x, y, (xy)^-1)."""
    xy_inv = G.inv(G.mul(x, y))
    yx_inv = G.inv(G.mul(y, x))
    return [
        (x, y),
        (y, x),
        (x, yx_inv),
        (y, xy_inv),
        (xy_inv, x),
        (yx_inv, y),
    ]


def _conj_orbit_count(G: GroupHandle, pairs: list[tuple[int, int]],
                      extra_perms: Sequence[np.ndarray] = (),
                      ) -> tuple[int, list[int]]:
    """Orbits of unordered triples (as (x,y) states) under conjugation by G
    (generators suffice), the six arrangements, and optional extra
    automorphism permutations."""
    todo = set(pairs)
    gens = G.generators
    count = 0
    sizes = []
    while todo:
        seed = next(iter(todo))
        count += 1
        orbit = {seed}
        frontier = [seed]
        while frontier:
            nxt = []
            for (x, y) in frontier:
                neigh = _arrangements(G, x, y)
                for g in gens:
                    neigh.append((G.conj(g, x), G.conj(g, y)))
                for perm in extra_perms:
                    neigh.append((int(perm[x]), int(perm[y])))
                for s in neigh:
                    if s not in orbit:
                        orbit.add(s)
                        nxt.append(s)
            frontier = nxt
        sizes.append(len(orbit & todo))
        todo -= orbit
    return count, sorted(sizes, reverse=True)


def count_d(G: GroupHandle, tau: Sequence[int], verify: bool = False,
            budget: int = DEFAULT_STATE_BUDGET) -> OrbitReport:
    """d(G;tau): braid orbits of 3-systems of unordered type tau, computed
    as G-conjugation orbits of unordered triples.

    With verify=True the count is re-derived by direct braid BFS over all
    ordered systems and the two numbers are asserted equal.
    """
    t0 = time.monotonic()
    tau = normalize_type(tau)
    pairs = _three_systems_pairs(G, tau)
    if len(pairs) > budget:
        raise BudgetExceededError(len(pairs), budget)
    count, sizes = _conj_orbit_count(G, pairs)
    if verify:
        direct = _braid_orbit_count_direct(G, pairs)
        assert direct == count, (str(G.spec), tau, direct, count)
    return OrbitReport(
        group=str(G.spec), tau1=tau, tau2=None, count=count,
        method="exhaustive-orbit", histogram=tuple(sizes),
        seconds=time.monotonic() - t0, total_objects=len(pairs),
    )


def _braid_orbit_count_direct(G: GroupHandle, pairs: list[tuple[int, int]]
                              ) -> int:
    """Braid orbits of the *unordered* systems: closure of the six
    arrangements of each triple under sigma_1, sigma_2 and inverses."""
    todo = set(pairs)
    count = 0
    while todo:
        x, y = next(iter(todo))
        count += 1
        seeds = _arrangements(G, x, y)
        orbit = set(seeds)
        frontier = list(orbit)
        while frontier:
            nxt = []
            for (a, b) in frontier:
                c = G.inv(G.mul(a, b))
                moves = [
                    (G.mul(G.mul(a, b), G.inv(a)), a),       # sigma_1
                    (b, G.mul(G.mul(G.inv(b), a), b)),       # sigma_1^-1
                    (a, G.mul(G.mul(b, c), G.inv(b))),       # sigma_2
                    (a, c),                                   # sigma_2^-1 (new y)
                ]
                # sigma_2^-1: (a, b, c) -> (a, c, c^-1 b c); state keeps (a, c)
                for s in moves:
                    if s not in orbit:
                        orbit.add(s)
                        nxt.append(s)
            frontier = nxt
        todo -= orbit
    return count


def count_pgl_orbits(G: GroupHandle, tau: Sequence[int]) -> int:
    """For psl2(p): number of Aut(G) = PGL(2,p)-orbits of unordered
    3-systems of type tau, by brute-force orbit enumeration (equals d/2)."""
    pairs = _three_systems_pairs(G, tau)
    count, _ = _conj_orbit_count(G, pairs, extra_perms=G.aut_generator_perms())
    return count


# ---------------------------------------------------------------------------
# h(G;tau1,tau2)


def _aut_perms(G: GroupHandle) -> list[np.ndarray]:
    perms = list(G.aut_generator_perms())
    # conjugation by the group generators realizes Inn even when the family's
    # aut generators already include it; harmless to add
    for g in G.generators:
        perms.append(np.array([G.conj(g, x) for x in range(G.order)],
                              dtype=np.int32))
    return perms


def count_h(G: GroupHandle, tau1: Sequence[int], tau2: Sequence[int],
            budget: int = DEFAULT_STATE_BUDGET) -> OrbitReport:
    """h(G;tau1,tau2): orbits of disjoint pairs of systems under
    (B_r1 x B_r2) x Aut(G), plus pair swap when tau1 = tau2."""
    t0 = time.monotonic()
    tau1 = normalize_type(tau1)
    tau2 = normalize_type(tau2)
    if tau2 < tau1:
        tau1, tau2 = tau2, tau1
    swap = tau1 == tau2
    perms = _aut_perms(G)
    systems1 = [T.ids for T in enumerate_systems(G, tau1, budget=budget)]
    systems2 = (systems1 if swap
                else [T.ids for T in enumerate_systems(G, tau2, budget=budget)])
    sig = {}
    for ids in set(systems1) | set(systems2):
        m = 0
        for x in ids:
            m |= G.power_class_mask[x]
        sig[ids] = m
    states = set()
    for t1 in systems1:
        s1 = sig[t1]
        for t2 in systems2:
            if s1 & sig[t2]:
                continue
            states.add((t1, t2))
            if len(states) > budget:
                raise BudgetExceededError(len(states), budget)
    r1, r2 = len(tau1), len(tau2)
    todo = set(states)
    count = 0
    sizes = []
    while todo:
        seed = next(iter(todo))
        count += 1
        orbit = {seed}
        frontier = [seed]
        while frontier:
            nxt = []
            for (t1, t2) in frontier:
                neigh = []
                for i in range(1, r1):
                    neigh.append((braid_move_ids(G, t1, i), t2))
                    neigh.append((braid_move_ids(G, t1, i, True), t2))
                for i in range(1, r2):
                    neigh.append((t1, braid_move_ids(G, t2, i)))
                    neigh.append((t1, braid_move_ids(G, t2, i, True)))
                for perm in perms:
                    neigh.append((tuple(int(perm[x]) for x in t1),
                                  tuple(int(perm[x]) for x in t2)))
                if swap:
                    neigh.append((t2, t1))
                for s in neigh:
                    if s not in orbit:
                        orbit.add(s)
                        nxt.append(s)
            frontier = nxt
        sizes.append(len(orbit & todo))
        todo -= orbit
    return OrbitReport(
        group=str(G.spec), tau1=tau1, tau2=tau2, count=count,
        method="exhaustive-orbit", histogram=tuple(sorted(sizes, reverse=True)),
        seconds=time.monotonic() - t0, total_objects=len(states),
    )


# ---------------------------------------------------------------------------
# almost homogeneous classes and the class-tuple lower bound


def _shape_order(shape: dict[int, int]) -> int:
    from math import lcm

    out = 1
    for ln in shape:
        out = lcm(out, ln)
    return out


def _shape_sign_even(shape: dict[int, int]) -> bool:
    transpositions = sum((ln - 1) * k for ln, k in shape.items())
    return transpositions % 2 == 0


def choose_almost_homogeneous_classes(n: int, orders: Sequence[int], k: int = 1
                                      ) -> list[tuple[int, int]]:
    """Pick len(orders)*k cycle shapes (m^j, 1^f): order exactly m, even sign,
    all fixed-point counts pairwise distinct.  Returns (m, j) pairs; the
    fixed-point count is n - j*m.  First valid choice in decreasing-j order.
    """
    chosen: list[tuple[int, int]] = []
    used_f: set[int] = set()

    def options(m: int) -> Iterable[tuple[int, int]]:
        step = 2 if m % 2 == 0 else 1  # even m needs an even cycle count
        top = n // m
        if m % 2 == 0 and top % 2 == 1:
            top -= 1
        for j in range(top, 0, -step):
            yield (m, j)

    def rec(idx: int) -> bool:
        if idx == len(orders) * k:
            return True
        m = orders[idx // k]
        for (mm, j) in options(m):
            f = n - j * mm
            if f in used_f:
                continue
            chosen.append((mm, j))
            used_f.add(f)
            if rec(idx + 1):
                return True
            chosen.pop()
            used_f.remove(f)
        return False

    if not rec(0):
        lo = n + 1
        while lo <= 4 * max(orders) * (len(orders) * k + 1):
            if choose_ok(lo, orders, k):
                break
            lo += 1
        raise ValueError(
            f"n = {n} too small for {k} even shapes per order {tuple(orders)} "
            f"with distinct fixed points; minimal feasible n found: {lo}"
        )
    return chosen


def choose_ok(n: int, orders: Sequence[int], k: int) -> bool:
    try:
        choose_almost_homogeneous_classes(n, orders, k)
        return True
    except ValueError:
        return False


def _shape_of_ids(G: GroupHandle, x: int) -> tuple:
    """Cycle shape of a permutation-group element (sorted cycle lengths)."""
    p = G.enc_of(x)
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        j, ln = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j] - 1
            ln += 1
        out.append(ln)
    return tuple(sorted(out))


def _partition_power_shapes(part: tuple[int, ...]) -> set[tuple[int, ...]]:
    """Shapes of all nontrivial powers of a permutation with cycle type
    `part` (a tuple of cycle lengths summing to n)."""
    from math import gcd, lcm

    order = 1
    for ln in part:
        order = lcm(order, ln)
    out = set()
    for e in range(1, order):
        shape = []
        for ln in part:
            g = gcd(ln, e)
            shape.extend([ln // g] * g)
        s = tuple(sorted(x for x in shape))
        if any(x > 1 for x in s):
            out.add(s)
    return out


def _partition_sign_even(part: Iterable[int]) -> bool:
    return sum(ln - 1 for ln in part) % 2 == 0


def _even_partitions_of_order(n: int, m: int) -> list[tuple[int, ...]]:
    """Even cycle types of S_n with lcm exactly m (as sorted length tuples)."""
    from math import lcm

    divs = [d for d in range(1, m + 1) if m % d == 0]
    out = []

    def rec(remaining: int, maxlen: int, acc: list[int]):
        if remaining == 0:
            cur = [d for d in acc if d > 1]
            if not cur:
                return
            if lcm(*cur) == m and _partition_sign_even(acc):
                out.append(tuple(sorted(acc)))
            return
        for d in divs:
            if d > maxlen or d > remaining:
                continue
            acc.append(d)
            rec(remaining - d, d, acc)
            acc.pop()

    rec(n, max(divs), [])
    return sorted(set(out))


def _alt_witness(n: int, parts: Sequence[tuple[int, ...]], rng,
                 trials: int) -> bool:
    """Randomized search for a spherical system in A_n whose entries have the
    given cycle types (in order); generation checked with sympy."""
    import random as _random

    from sympy.combinatorics import Permutation, PermutationGroup

    def sample(part):
        pts = list(range(n))
        rng.shuffle(pts)
        img = list(range(n))
        pos = 0
        for ln in part:
            cyc = pts[pos:pos + ln]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
            pos += ln
        return tuple(img)

    def compose(a, b):  # left-to-right
        return tuple(b[x] for x in a)

    def inverse(a):
        out = [0] * n
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def shape(a):
        seen = [False] * n
        s = []
        for i in range(n):
            if seen[i]:
                continue
            j, ln = i, 0
            while not seen[j]:
                seen[j] = True
                j = a[j]
                ln += 1
            s.append(ln)
        return tuple(sorted(s))

    target_last = tuple(sorted(parts[-1]))
    for _ in range(trials):
        entries = [sample(p) for p in parts[:-1]]
        prod = tuple(range(n))
        for e in entries:
            prod = compose(prod, e)
        last = inverse(prod)
        if shape(last) != target_last:
            continue
        entries.append(last)
        perms = [Permutation(list(e)) for e in entries]
        Gp = PermutationGroup(perms)
        if Gp.order() == _alt_order(n):
            return True
    return False


def _alt_order(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out // 2


def class_tuple_lower_bound(G, tau1: Sequence[int], tau2: Sequence[int],
                            budget: int = 20000, seed: int = 0
                            ) -> int:
    """Certified lower bound for h(G;tau1,tau2) by counting tuples of
    Aut(G)-classes (matching orders, all r1+r2 classes distinct, power-class
    sets disjoint across the two sides) for which spherical-system witnesses
    exist.  Floored at 1 whenever a structure is known to exist.

    Accepts a GroupHandle or a GroupSpec; large alternating groups take a
    cycle-shape path that never materializes the group.
    """
    import random as _random

    tau1 = normalize_type(tau1)
    tau2 = normalize_type(tau2)
    rng = _random.Random(seed)
    if isinstance(G, GroupSpec) and G.family == "alternating" and G.params[0] >= 7:
        n = G.params[0]
        shapes = {m: _even_partitions_of_order(n, m)
                  for m in set(tau1) | set(tau2)}
        witnessed: dict[tuple, bool] = {}

        def side_ok(parts: tuple) -> bool:
            if parts not in witnessed:
                witnessed[parts] = _alt_witness(n, list(parts), rng,
                                                trials=budget)
            return witnessed[parts]

        def tuples_for(tau):
            import itertools as it

            pools = [shapes[m] for m in tau]
            for combo in it.product(*pools):
                if len(set(combo)) == len(combo):
                    yield combo

        count = 0
        sides2 = list(tuples_for(tau2))
        sig_cache: dict[tuple, frozenset] = {}

        def sig_of(parts):
            if parts not in sig_cache:
                s = set()
                for p in parts:
                    s |= _partition_power_shapes(p)
                sig_cache[parts] = frozenset(s)
            return sig_cache[parts]

        seen_pairs = set()
        same = tau1 == tau2
        for c1 in tuples_for(tau1):
            s1 = sig_of(c1)
            for c2 in sides2:
                k1, k2 = tuple(sorted(c1)), tuple(sorted(c2))
                key = tuple(sorted((k1, k2))) if same else (k1, k2)
                if key in seen_pairs:
                    continue
                if len(set(c1) | set(c2)) != len(c1) + len(c2):
                    continue
                if s1 & sig_of(c2):
                    continue
                if side_ok(c1) and side_ok(c2):
                    seen_pairs.add(key)
        return len(seen_pairs)

    if isinstance(G, GroupSpec):
        G = make_group(G)
    return _small_class_tuple_bound(G, tau1, tau2, budget)


def _small_class_tuple_bound(G: GroupHandle, tau1, tau2, budget: int) -> int:
    import itertools as it

    perms = G.aut_generator_perms()
    n_cls = len(G.classes)
    # Aut-classes: orbits of conjugacy classes under the aut generators
    parent = list(range(n_cls))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for perm in perms:
        for cls in G.classes:
            a = find(cls.class_id)
            b = find(int(G.class_of[int(perm[cls.rep])]))
            if a != b:
                parent[a] = b
    aut_cls_of = [find(c) for c in range(n_cls)]
    by_order: dict[int, list[int]] = {}
    reps = sorted(set(aut_cls_of))
    for c in reps:
        by_order.setdefault(G.classes[c].order, []).append(c)

    def class_sig(c: int) -> int:
        return G.power_class_mask[G.classes[c].rep]

    def aut_sig(ac: int) -> int:
        m = 0
        for c in range(n_cls):
            if aut_cls_of[c] == ac:
                m |= class_sig(c)
        return m

    sigs = {ac: aut_sig(ac) for ac in reps}

    def tuples_for(tau):
        pools = [by_order.get(m, []) for m in tau]
        for combo in it.product(*pools):
            if len(set(combo)) == len(combo):
                yield combo

    def witness(tau, combo) -> bool:
        want = sorted(combo)
        for T in enumerate_systems(G, tau, budget=budget, up_to_inner=True):
            have = sorted(aut_cls_of[int(G.class_of[x])] for x in T.ids)
            if have == want:
                return True
        return False

    wit_cache: dict[tuple, bool] = {}

    def side_ok(tau, combo):
        key = (tau, tuple(sorted(combo)))
        if key not in wit_cache:
            try:
                wit_cache[key] = witness(tau, combo)
            except BudgetExceededError:
                wit_cache[key] = False
        return wit_cache[key]

    count_pairs = set()
    same = tau1 == tau2
    for c1 in tuples_for(tau1):
        s1 = 0
        for ac in c1:
            s1 |= sigs[ac]
        for c2 in tuples_for(tau2):
            if len(set(c1) | set(c2)) != len(c1) + len(c2):
                continue
            s2 = 0
            for ac in c2:
                s2 |= sigs[ac]
            if s1 & s2:
                continue
            k1, k2 = tuple(sorted(c1)), tuple(sorted(c2))
            key = tuple(sorted((k1, k2))) if same else (k1, k2)
            if key in count_pairs:
                continue
            if side_ok(tau1, c1) and side_ok(tau2, c2):
                count_pairs.add(key)
    bound = len(count_pairs)
    if bound == 0:
        res = exists_unmixed_structure(G, tau1, tau2, mode="exhaustive",
                                       budget=budget)
        if res.found:
            bound = 1
    return bound
