"""Exact numerical invariants of the surface attached to a group together
with an unmixed ramification structure: curve genera via Riemann-Hurwitz,
chi, K^2, e, p_g, and the Zeuthen-Segre consistency check.

All arithmetic is exact (fractions.Fraction); non-integral intermediate
values are a reportable outcome (non-realizable), never rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class NonRealizableError(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class SurfaceInvariants:
    genus1: int
    genus2: int
    chi: int
    k2: int
    euler: int
    pg: int

    def to_record(self) -> dict:
        return {
            "genus1": self.genus1,
            "genus2": self.genus2,
            "chi": self.chi,
            "k2": self.k2,
            "euler": self.euler,
            "pg": self.pg,
        }


def mu(tau: Sequence[int]) -> Fraction:
    """mu = 1/m_1 + 1/m_2 + 1/m_3 for a size-3 type."""
    if len(tau) != 3:
        raise ValueError("mu is defined for size-3 types")
    return sum((Fraction(1, m) for m in tau), Fraction(0))


def _excess(tau: Sequence[int]) -> Fraction:
    """-2 + sum(1 - 1/m) over the type; positive iff the fibre data is
    hyperbolic in the relevant sense."""
    return Fraction(-2) + sum((1 - Fraction(1, m) for m in tau), Fraction(0))


def genus_rh(group_order: int, g_prime: int, orders: Sequence[int]
             ) -> tuple[Fraction, bool]:
    """Solve 2g - 2 = |G| (2g' - 2 + sum(1 - 1/m_i)) for g, exactly.

    Returns (g, integral flag); integrality of g is necessary for the cover
    to exist.
    """
    if any(m < 2 for m in orders):
        raise ValueError(f"branch orders must be >= 2, got {tuple(orders)}")
    rhs = group_order * (2 * g_prime - 2 + sum(
        (1 - Fraction(1, m) for m in orders), Fraction(0)))
    g = Fraction(rhs + 2, 2)
    return g, g.denominator == 1


def surface_invariants(group_order: int, tau1: Sequence[int],
                       tau2: Sequence[int]) -> SurfaceInvariants:
    """Invariants from 4 chi = |G| (-2 + sum(1-1/m_1k)) (-2 + sum(1-1/m_2k)),
    K^2 = 8 chi, e = 4 chi, p_g = chi - 1 (q = 0), genera via Riemann-Hurwitz
    over P^1."""
    e1, e2 = _excess(tau1), _excess(tau2)
    if e1 <= 0 or e2 <= 0:
        raise NonRealizableError(
            f"non-hyperbolic type data: excesses {e1}, {e2} must be positive"
        )
    four_chi = group_order * e1 * e2
    if four_chi.denominator != 1 or int(four_chi) % 4 != 0:
        raise NonRealizableError(f"4*chi = {four_chi} is not 4 * integer")
    chi = int(four_chi) // 4
    if chi <= 0:
        raise NonRealizableError(f"chi = {chi} not positive")
    g1, ok1 = genus_rh(group_order, 0, tau1)
    g2, ok2 = genus_rh(group_order, 0, tau2)
    if not (ok1 and ok2):
        raise NonRealizableError(f"non-integral genus: {g1}, {g2}")
    g1, g2 = int(g1), int(g2)
    if g1 < 2 or g2 < 2:
        raise NonRealizableError(f"genus < 2: ({g1}, {g2})")
    inv = SurfaceInvariants(genus1=g1, genus2=g2, chi=chi, k2=8 * chi,
                            euler=4 * chi, pg=chi - 1)
    # Zeuthen-Segre: e |G| = 4 (g1 - 1)(g2 - 1)
    assert inv.euler * group_order == 4 * (g1 - 1) * (g2 - 1), inv
    return inv


def chi_bounds_ok(group_order: int, tau1: Sequence[int], tau2: Sequence[int],
                  chi: int) -> bool:
    """Per-instance bounds |G|/(4*42^2) <= chi <= (r1-2)(r2-2)|G|/4."""
    r1, r2 = len(tau1), len(tau2)
    lo = Fraction(group_order, 4 * 42 * 42)
    hi = Fraction((r1 - 2) * (r2 - 2) * group_order, 4)
    return lo <= chi <= hi


def structure_invariants(structure) -> SurfaceInvariants:
    """Invariants of a RamificationStructure (duck-typed: .group, .types)."""
    tau1, tau2 = structure.types
    return surface_invariants(structure.group.order, tau1, tau2)


def check_genus_ge_2(structure) -> bool:
    """|G|(-2 + sum(1 - 1/m))/2 + 1 is an integer >= 2 for both systems."""
    n = structure.group.order
    for tau in structure.types:
        val = Fraction(n) * _excess(tau) / 2 + 1
        if val.denominator != 1 or val < 2:
            return False
    return True
