"""Weighted projective planes CP^2[l0, l1, l2] = S^5 / S^1_lambda.

Circle subgroups of the residual torus are encoded by integer vectors
``m = (m0, m1, m2)`` acting as ``[z^m0 w0 : z^m1 w1 : z^m2 w2]``. Adding a
multiple of the weights to ``m`` changes nothing, since the diagonal lambda
circle acts trivially; every function below is invariant under
``m -> m + t * weights``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .algebra import TRIVIAL, Z, GradedGroup, euler_characteristic
from .quotgeo import (
    _check_tol,
    _unit_rows,
    chord_to_angle,
    comparison_angles,
    min_orbit_chord,
)


@dataclass(frozen=True)
class WeightTriple:
    l0: int
    l1: int
    l2: int

    def __post_init__(self):
        for w in self:
            if w < 1:
                raise ValueError(f"weights must be positive integers, got {tuple(self)}")
        g = gcd(gcd(self.l0, self.l1), self.l2)
        if g != 1:
            raise ValueError(
                f"weights {tuple(self)} have gcd {g}; call normalize_weights() "
                f"to divide by it"
            )

    def __iter__(self):
        return iter((self.l0, self.l1, self.l2))

    def __getitem__(self, i: int) -> int:
        return (self.l0, self.l1, self.l2)[i]

    def __str__(self) -> str:
        return f"CP^2[{self.l0},{self.l1},{self.l2}]"


def make_weights(a: int, b: int, c: int) -> WeightTriple:
    return WeightTriple(int(a), int(b), int(c))


def normalize_weights(a: int, b: int, c: int) -> WeightTriple:
    """Divide out the common factor; CP^2[g*l] and CP^2[l] coincide."""
    g = gcd(gcd(a, b), c)
    if g == 0:
        raise ValueError("weights must be positive")
    return make_weights(a // g, b // g, c // g)


def _minor(m: Sequence[int], lam: WeightTriple, j: int, k: int) -> int:
    return m[j] * lam[k] - m[k] * lam[j]


def _others(i: int) -> tuple[int, int]:
    j, k = (x for x in range(3) if x != i)
    return j, k


def is_trivial_action(lam: WeightTriple, m: Sequence[int]) -> bool:
    """True when m is a multiple of the weights, i.e. acts trivially."""
    return all(_minor(m, lam, j, k) == 0 for j, k in combinations(range(3), 2))


def circle_action(lam: WeightTriple, m: Sequence[int]) -> tuple[int, int, int]:
    m = tuple(int(x) for x in m)
    if len(m) != 3:
        raise ValueError(f"an action needs three integers, got {m}")
    if is_trivial_action(lam, m):
        raise ValueError(f"action {m} is a multiple of the weights {tuple(lam)} and acts trivially")
    return m


@dataclass(frozen=True)
class Stratum:
    """``locus`` is ``("vertex", i)``, ``("edge", i, j)`` or ``("regular",)``."""

    locus: tuple
    group_order: int

    @property
    def name(self) -> str:
        kind = self.locus[0]
        if kind == "vertex":
            return f"Vertex{self.locus[1]}"
        if kind == "edge":
            return f"Edge{self.locus[1]}{self.locus[2]}"
        return "Regular"


def stratification(lam: WeightTriple) -> list[Stratum]:
    """Singular strata with their cyclic orbifold group orders.

    The vertex ``[e_i]`` has group Z_{l_i}, the coordinate sphere through
    vertices i and j has Z_{gcd(l_i, l_j)}. Order-1 strata are dropped; the
    regular stratum is always listed last.
    """
    strata = [Stratum(("vertex", i), lam[i]) for i in range(3) if lam[i] > 1]
    for i, j in combinations(range(3), 2):
        g = gcd(lam[i], lam[j])
        if g > 1:
            strata.append(Stratum(("edge", i, j), g))
    strata.append(Stratum(("regular",), 1))
    return strata


def is_product_form(lam: WeightTriple) -> Optional[tuple[int, int, int]]:
    """Return (a, b, c) with (l0, l1, l2) = (ab, ac, bc), else None.

    If some ordering of the weights has this form then so does every
    ordering (with a, b, c permuted), so only the given order is searched:
    a runs over the common divisors of l0 and l1.
    """
    l0, l1, l2 = lam
    g = gcd(l0, l1)
    for a in range(1, g + 1):
        if g % a:
            continue
        b, c = l0 // a, l1 // a
        if b * c == l2:
            return a, b, c
    return None


def wps_cohomology(lam: WeightTriple) -> GradedGroup:
    """H^*(|CP^2[lambda]|; Z), always that of CP^2."""
    return GradedGroup(4, (Z, TRIVIAL, Z, TRIVIAL, Z))


@dataclass(frozen=True)
class FixedPointData:
    """Fixed set of a circle action.

    ``sphere`` is None for three isolated vertices; otherwise it is the index
    i of the pointwise fixed coordinate sphere {w_i = 0}, and vertex i is the
    remaining isolated fixed point.
    """

    sphere: Optional[int] = None

    @property
    def kind(self) -> str:
        return "ThreeVertices" if self.sphere is None else "VertexAndSphere"

    @property
    def isolated_vertices(self) -> tuple[int, ...]:
        return (0, 1, 2) if self.sphere is None else (self.sphere,)

    @property
    def euler_characteristic(self) -> int:
        # isolated points count 1 each, a 2-sphere counts 2
        return 3 if self.sphere is None else 1 + 2

    def to_json(self) -> dict:
        out = {"kind": self.kind, "isolated_vertices": list(self.isolated_vertices)}
        if self.sphere is not None:
            out["fixed_sphere"] = f"w{self.sphere}=0"
        return out


def fixed_point_set(lam: WeightTriple, m: Sequence[int]) -> FixedPointData:
    m = circle_action(lam, m)
    fixed = [i for i in range(3) if _minor(m, lam, *_others(i)) == 0]
    # two vanishing minors would force m to be proportional to lambda
    assert len(fixed) <= 1
    return FixedPointData(fixed[0] if fixed else None)


@dataclass(frozen=True, order=True)
class IsotropyRep:
    """phi_{k,l}: z acts on C^2 by (z^k, z^l); stored with 0 < k <= l."""

    k: int
    l: int

    def __post_init__(self):
        if not 0 < self.k <= self.l or gcd(self.k, self.l) != 1:
            raise ValueError(f"({self.k}, {self.l}) is not a normalized coprime pair")

    def __iter__(self):
        return iter((self.k, self.l))


def raw_isotropy(lam: WeightTriple, m: Sequence[int], i: int) -> tuple[int, int]:
    m = circle_action(lam, m)
    if i not in (0, 1, 2):
        raise ValueError(f"vertex index must be 0, 1 or 2, got {i}")
    j, k = _others(i)
    return m[j] * lam[i] - m[i] * lam[j], m[k] * lam[i] - m[i] * lam[k]


def isotropy_weights(lam: WeightTriple, m: Sequence[int], i: int) -> IsotropyRep:
    """Isotropy representation of the circle at the fixed vertex ``[e_i]``.

    In the chart w_i = 1 the action on (w_j, w_k) has weights
    ``(m_j l_i - m_i l_j, m_k l_i - m_i l_k)`` up to the ineffective kernel;
    dividing by the gcd makes it effective.
    """
    p, q = raw_isotropy(lam, m, i)
    if p == 0 or q == 0:
        raise ValueError(
            f"vertex {i} is not an isolated fixed point of action {tuple(m)} "
            f"(raw weights {(p, q)})"
        )
    g = gcd(p, q)
    p, q = sorted((abs(p) // g, abs(q) // g))
    return IsotropyRep(p, q)


def kobayashi_check(lam: WeightTriple, m: Sequence[int]) -> bool:
    fixed = fixed_point_set(lam, m)
    return fixed.euler_characteristic == euler_characteristic(wps_cohomology(lam))


def wps_distances(lam: WeightTriple, ps, qs, tol: float = 1e-6) -> np.ndarray:
    """Row-wise quotient distances on S^5 / S^1_lambda."""
    _check_tol(tol)
    ps = _unit_rows(ps, 3, "p")
    qs = _unit_rows(qs, 3, "q")
    if ps.shape != qs.shape:
        raise ValueError("p and q batches must have the same shape")
    chord, _ = min_orbit_chord(ps, qs, np.array(tuple(lam)))
    return chord_to_angle(chord)


def wps_distance(lam: WeightTriple, p, q, tol: float = 1e-6) -> float:
    """min over theta of the angle between p and theta * q in S^5."""
    return float(wps_distances(lam, p, q, tol)[0])


@dataclass(frozen=True)
class ToponogovWitness:
    distances: tuple[float, float, float]
    angles: tuple[float, float, float]

    @property
    def angle_sum(self) -> float:
        return float(sum(self.angles))

    def to_json(self) -> dict:
        return {
            "distances": {"l01": self.distances[0], "l12": self.distances[1], "l20": self.distances[2]},
            "angles": {"vertex0": self.angles[0], "vertex1": self.angles[1], "vertex2": self.angles[2]},
            "angle_sum": self.angle_sum,
        }


def toponogov_witness(lam: WeightTriple, m: Sequence[int], tol: float = 1e-6) -> ToponogovWitness:
    """Comparison angles of the triangle spanned by three isolated fixed points.

    The angle at vertex i is the curvature-1 model angle opposite the side
    joining the other two vertices.
    """
    if fixed_point_set(lam, m).sphere is not None:
        raise ValueError(f"action {tuple(m)} on {lam} does not have three isolated fixed points")
    e = np.eye(3, dtype=complex)
    d = wps_distances(lam, e[[0, 1, 2]], e[[1, 2, 0]], tol)
    l01, l12, l20 = (float(x) for x in d)
    if min(d) < tol:
        raise ValueError(f"degenerate triangle, side lengths {tuple(d)}")
    if l01 > l12 + l20 + tol or l12 > l01 + l20 + tol or l20 > l01 + l12 + tol:
        raise ValueError(f"side lengths {tuple(d)} violate the triangle inequality")
    # vertex 0 faces l12, vertex 1 faces l20, vertex 2 faces l01
    a0, a1, a2 = comparison_angles((l12, l20, l01), slack=tol)
    return ToponogovWitness((l01, l12, l20), (a0, a1, a2))


def default_generic_action(lam: WeightTriple) -> tuple[int, int, int]:
    """Smallest non-negative action (by max entry, then lexicographic) with
    three isolated fixed points."""
    for r in range(1, 64):
        for m in product(range(r + 1), repeat=3):
            if max(m) == r and not is_trivial_action(lam, m):
                if fixed_point_set(lam, m).sphere is None:
                    return m
    raise RuntimeError(f"no generic action found for {lam}")
