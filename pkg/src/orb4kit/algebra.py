"""Finitely generated abelian groups and graded (co)homology tables.

Groups are kept in invariant-factor form ``Z^r + Z_{d1} + ... + Z_{ds}`` with
``d1 | d2 | ... | ds``, so two groups are isomorphic exactly when their
``(rank, torsion)`` pairs are equal.

>>> h = lens_suspension_tables(5, 1)[0]
>>> print(h)
(Z, 0, Z_5, 0, Z)
>>> print(universal_coefficients_cohomology(h))
(Z, 0, 0, Z_5, Z)
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from math import gcd, lcm, prod
from typing import Iterable, Mapping, Optional, Union


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^rank + Z_{d1} + ... + Z_{ds} in invariant-factor form."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError(f"rank must be non-negative, got {self.rank}")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(
                    f"torsion {self.torsion} is not a divisibility chain; "
                    "use normalize_torsion() to build it"
                )

    @classmethod
    def free(cls, rank: int) -> "FgAbelianGroup":
        return cls(rank, ())

    @classmethod
    def cyclic(cls, order: int) -> "FgAbelianGroup":
        """Z_order; order 0 means Z, order 1 the trivial group."""
        if order == 0:
            return cls(1, ())
        if order == 1:
            return TRIVIAL
        return normalize_torsion([order])

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_torsion(self) -> bool:
        return self.rank == 0

    def torsion_part(self) -> "FgAbelianGroup":
        return FgAbelianGroup(0, self.torsion)

    def __add__(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        t = normalize_torsion(self.torsion + other.torsion).torsion
        return FgAbelianGroup(self.rank + other.rank, t)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return "+".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion), "text": str(self)}


TRIVIAL = FgAbelianGroup()
Z = FgAbelianGroup(1)


def normalize_torsion(orders: Iterable[int]) -> FgAbelianGroup:
    """Invariant-factor form of Z_{n1} + ... + Z_{nk}.

    Each new order is pushed down the current chain with gcd/lcm swaps,
    which keeps the group unchanged since Z_a + Z_b = Z_gcd + Z_lcm.
    """
    factors: list[int] = []
    for n in orders:
        n = int(n)
        if n < 2:
            raise ValueError(f"cyclic orders must be >= 2, got {n}")
        carry = n
        merged = []
        for f in reversed(factors):
            merged.append(lcm(f, carry))
            carry = gcd(f, carry)
        merged.append(carry)
        factors = sorted(x for x in merged if x > 1)
    return FgAbelianGroup(0, tuple(factors))


def elementary_divisors(g: FgAbelianGroup) -> list[int]:
    """Prime-power cyclic orders of the torsion subgroup, sorted."""
    out = []
    for d in g.torsion:
        n, p = d, 2
        while p * p <= n:
            if n % p == 0:
                q = 1
                while n % p == 0:
                    n //= p
                    q *= p
                out.append(q)
            p += 1
        if n > 1:
            out.append(n)
    return sorted(out)


_TERM = re.compile(r"^(?:Z(?:\^(\d+))?|Z_(\d+)|0)$")


def parse_group(text: str) -> FgAbelianGroup:
    """Parse ``"Z^2+Z_4+Z_6"``, ``"Z"``, ``"Z_5"`` or ``"0"``."""
    rank, orders = 0, []
    for term in text.replace(" ", "").split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse group term {term!r} in {text!r}")
        if term == "0":
            continue
        if m.group(2) is not None:
            n = int(m.group(2))
            if n == 0:
                rank += 1
            elif n > 1:
                orders.append(n)
        else:
            rank += int(m.group(1) or 1)
    return FgAbelianGroup(rank, normalize_torsion(orders).torsion)


@dataclass(frozen=True)
class GradedGroup:
    """Groups indexed by degree 0..dimension; other degrees are trivial."""

    dimension: int
    groups: tuple[FgAbelianGroup, ...] = field(default=())

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError("dimension must be non-negative")
        groups = tuple(self.groups)
        if len(groups) > self.dimension + 1:
            raise ValueError(
                f"{len(groups)} groups given for dimension {self.dimension}"
            )
        groups += (TRIVIAL,) * (self.dimension + 1 - len(groups))
        object.__setattr__(self, "groups", groups)

    @classmethod
    def of(cls, *groups: Union[FgAbelianGroup, str]) -> "GradedGroup":
        gs = tuple(parse_group(g) if isinstance(g, str) else g for g in groups)
        return cls(len(gs) - 1, gs)

    @classmethod
    def parse(cls, text: str) -> "GradedGroup":
        """Comma separated table such as ``"Z,0,Z_5,0,Z"``."""
        text = text.strip().strip("()")
        return cls.of(*(t for t in text.split(",")))

    def __getitem__(self, k: int) -> FgAbelianGroup:
        if 0 <= k <= self.dimension:
            return self.groups[k]
        return TRIVIAL

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(g.rank for g in self.groups)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.groups) + ")"

    def to_json(self) -> list[str]:
        return [str(g) for g in self.groups]


def euler_characteristic(g: GradedGroup) -> int:
    return sum((-1) ** k * grp.rank for k, grp in enumerate(g.groups))


def universal_coefficients_cohomology(homology: GradedGroup) -> GradedGroup:
    """Integral cohomology from integral homology.

    H^k = Hom(H_k, Z) + Ext(H_{k-1}, Z): free part of H_k plus the torsion
    of H_{k-1}.
    """
    if homology.dimension < 1:
        raise ValueError("homology must have dimension >= 1")
    groups = [
        FgAbelianGroup(homology[k].rank, homology[k - 1].torsion)
        for k in range(homology.dimension + 1)
    ]
    return GradedGroup(homology.dimension, tuple(groups))


def rational_cohomology_profile(n: int) -> GradedGroup:
    """Ranks (1, 0, n-2, 0, 1): a closed orientable simply connected
    4-space with Euler characteristic n, torsion dropped."""
    if n < 2:
        raise ValueError(f"Euler characteristic must be >= 2, got {n}")
    return GradedGroup(4, (Z, TRIVIAL, FgAbelianGroup.free(n - 2), TRIVIAL, Z))


def validate_theorem_top_profile(
    cohomology: GradedGroup, n: int, pi1orb_order: Optional[int]
) -> tuple[bool, str]:
    """Check the shape of H^*(|O|; Z) for a simply connected orientable
    4-orbifold with Euler characteristic ``n``.

    ``pi1orb_order=None`` stands for an infinite orbifold fundamental group,
    in which case the surjection clause cannot be tested and is skipped.
    For a finite group only the necessary condition ``|H^3|`` divides
    ``|pi1orb|`` is checked. Returns ``(ok, diagnostic)`` where the diagnostic
    names the first failing clause.
    """
    if cohomology.dimension != 4:
        raise ValueError(f"expected a dimension-4 table, got {cohomology.dimension}")
    if pi1orb_order is not None and pi1orb_order < 1:
        raise ValueError("pi1orb_order must be >= 1 or None for infinite")
    if n < 2:
        return False, f"euler characteristic: n = {n} < 2 is impossible here"
    if cohomology[0] != Z:
        return False, f"H^0: expected Z, got {cohomology[0]}"
    if cohomology[4] != Z:
        return False, f"H^4: expected Z, got {cohomology[4]}"
    if not cohomology[1].is_trivial:
        return False, f"H^1: expected 0, got {cohomology[1]}"
    if cohomology[2] != FgAbelianGroup.free(n - 2):
        return False, f"H^2: expected {FgAbelianGroup.free(n - 2)}, got {cohomology[2]}"
    tau = cohomology[3]
    if not tau.is_torsion:
        return False, f"H^3 torsion: expected a torsion group, got {tau}"
    if pi1orb_order is not None and pi1orb_order % tau.torsion_order:
        return False, (
            f"surjection bound: |H^3| = {tau.torsion_order} does not divide "
            f"|pi1orb| = {pi1orb_order}"
        )
    return True, "ok"


def rational_duality_check(homology: GradedGroup) -> bool:
    n = homology.dimension
    return all(homology[k].rank == homology[n - k].rank for k in range(n + 1))


@dataclass(frozen=True)
class DualityDefect:
    """Per-degree torsion discrepancy between H^{n-k} and H_k.

    ``defect[k]`` is the group built from the prime-power summands that occur
    in one of the two torsion subgroups but not the other (multiset symmetric
    difference), so it is trivial exactly when the torsion parts agree.
    """

    defect: Mapping[int, FgAbelianGroup]
    rank_mismatch: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return all(g.is_trivial for g in self.defect.values())


def integer_duality_defect(cohomology: GradedGroup, homology: GradedGroup) -> DualityDefect:
    if cohomology.dimension != homology.dimension:
        raise ValueError(
            f"dimension mismatch: cohomology {cohomology.dimension}, "
            f"homology {homology.dimension}"
        )
    n = homology.dimension
    defect = {}
    mismatch = []
    for k in range(n + 1):
        up, down = cohomology[n - k], homology[k]
        if up.rank != down.rank:
            mismatch.append(k)
        a = Counter(elementary_divisors(up))
        b = Counter(elementary_divisors(down))
        diff = list(((a - b) + (b - a)).elements())
        defect[k] = normalize_torsion(diff)
    return DualityDefect(defect, tuple(mismatch))


def lens_suspension_tables(p: int, q: int = 1) -> tuple[GradedGroup, GradedGroup]:
    """Homology and cohomology of the suspension of L(p; q)."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if gcd(q, p) != 1:
        raise ValueError(f"q = {q} is not coprime to p = {p}")
    zp = FgAbelianGroup.cyclic(p)
    homology = GradedGroup(4, (Z, TRIVIAL, zp, TRIVIAL, Z))
    cohomology = GradedGroup(4, (Z, TRIVIAL, TRIVIAL, zp, Z))
    return homology, cohomology

