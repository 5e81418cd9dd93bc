"""Orbit metrics on sphere quotients by torus circles.

The unit sphere S^3 in C^2 carries the angle metric. A coprime pair (k, l)
defines the circle theta -> (e^{ik theta}, e^{il theta}); its orbit space
X_kl gets the metric

    d_kl(x, y) = min_theta angle(x, theta * y),

and a finite cyclic subgroup of the torus acts on X_kl by isometries, giving
the further quotient with d~_kl(x, y) = min over the group of d_kl(x, g y).

Every distance here reduces to minimizing the chord length
``|x - e^{i w theta} y|`` over theta for an integer weight vector ``w``. That
objective is a trigonometric polynomial in theta, so a uniform grid plus the
bound ``|f''| <= sum_j w_j^2 |x_j y_j|`` on its real part tells exactly which
grid cells can hold the global minimum; each such cell is then refined by
golden-section search. Everything is vectorized over batches of pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, pi
from typing import Optional, Sequence

import numpy as np

UNIT_TOL = 1e-9
# below this the golden-section refinement cannot resolve the chord in double precision
MIN_TOL = 1e-10
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
_REFINE_STEPS = 60
_CHUNK = 2048


def _unit_rows(z, width: int, name: str) -> np.ndarray:
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    if z.shape[-1] != width:
        raise ValueError(f"{name} must have {width} complex coordinates, got shape {z.shape}")
    norms = np.linalg.norm(z, axis=-1)
    bad = np.abs(norms - 1.0) > UNIT_TOL
    if np.any(bad):
        raise ValueError(f"{name} is not a unit vector (norm {norms[bad][0]!r})")
    return z


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if tol < MIN_TOL:
        raise ValueError(f"tol = {tol} is below the certifiable floor {MIN_TOL}")


def _chord2(x, y, weights, theta):
    """|x - e^{i w theta} y|^2 row-wise; theta has shape (B,) or (B, K)."""
    phase = np.exp(1j * theta[..., None] * weights)
    if theta.ndim == 2:
        diff = x[:, None, :] - phase * y[:, None, :]
    else:
        diff = x - phase * y
    return np.sum(diff.real**2 + diff.imag**2, axis=-1)


def min_orbit_chord(x, y, weights) -> tuple[np.ndarray, np.ndarray]:
    """Minimize ``|x - e^{i w theta} y|`` over theta for each row.

    ``x`` and ``y`` are (B, m) complex arrays, ``weights`` an integer vector of
    length m. Returns the minimal chord lengths and the minimizing angles.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    w = np.asarray(weights, dtype=float)
    speed = max(1.0, float(np.max(np.abs(w))))
    n_grid = int(max(64, 32 * speed))
    step = 2 * pi / n_grid
    grid = step * np.arange(n_grid)

    chords = np.empty(len(x))
    thetas = np.empty(len(x))
    for lo in range(0, len(x), _CHUNK):
        xs, ys = x[lo:lo + _CHUNK], y[lo:lo + _CHUNK]
        coeff = np.conj(xs) * ys
        overlap = (coeff @ np.exp(1j * np.outer(w, grid))).real
        best = overlap.max(axis=1)
        # any cell holding a point above the grid max has its nearest node
        # within curvature * step^2 / 8 of it
        curvature = np.abs(coeff) @ (w**2)
        margin = curvature * step**2 / 8 + 1e-13
        rows, cols = np.nonzero(overlap >= (best - margin)[:, None])

        a = grid[cols] - step
        b = grid[cols] + step
        cx, cy = xs[rows], ys[rows]
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        fc = _chord2(cx, cy, w, c)
        fd = _chord2(cx, cy, w, d)
        for _ in range(_REFINE_STEPS):
            left = fc < fd
            b = np.where(left, d, b)
            a = np.where(left, a, c)
            new_c = b - _GOLDEN * (b - a)
            new_d = a + _GOLDEN * (b - a)
            fc, fd = (
                np.where(left, _chord2(cx, cy, w, new_c), fd),
                np.where(left, fc, _chord2(cx, cy, w, new_d)),
            )
            c, d = new_c, new_d
        theta = 0.5 * (a + b)
        val = _chord2(cx, cy, w, theta)

        # per-row minimum over candidates, also against the raw grid nodes
        node = grid[np.argmax(overlap, axis=1)]
        row_best = _chord2(xs, ys, w, node)
        row_theta = node.copy()
        order = np.lexsort((val, rows))
        first = np.ones(len(order), dtype=bool)
        first[1:] = rows[order][1:] != rows[order][:-1]
        pick = order[first]
        improve = val[pick] < row_best[rows[pick]]
        row_best[rows[pick][improve]] = val[pick][improve]
        row_theta[rows[pick][improve]] = theta[pick][improve]

        chords[lo:lo + _CHUNK] = np.sqrt(np.maximum(row_best, 0.0))
        thetas[lo:lo + _CHUNK] = np.mod(row_theta, 2 * pi)
    return chords, thetas


def chord_to_angle(chord):
    return 2.0 * np.arcsin(np.clip(np.asarray(chord) / 2.0, 0.0, 1.0))


def ambient_angle(v, w) -> float:
    """Angle between unit vectors of C^2 viewed as R^4.

    Equals ``arccos(Re<v, w>)``; evaluated through the chord so that small
    angles keep full precision.
    """
    v = _unit_rows(v, 2, "v")[0]
    w = _unit_rows(w, 2, "w")[0]
    return float(chord_to_angle(np.linalg.norm(v - w)))


@dataclass(frozen=True)
class QuotientModel:
    """X_kl = S^3 / S^1_{k,l}, further divided by the cyclic group generated by
    ``(e^{2 pi i a/n}, e^{2 pi i b/n})`` with ``n = gamma_order`` and
    ``(a, b) = gamma_exponents``."""

    k: int
    l: int
    gamma_order: int = 1
    gamma_exponents: tuple[int, int] = (1, 1)

    def __post_init__(self):
        if self.k == 0 or self.l == 0:
            raise ValueError("k and l must be nonzero")
        if gcd(abs(self.k), abs(self.l)) != 1:
            raise ValueError(f"k = {self.k} and l = {self.l} are not coprime")
        if self.gamma_order < 1:
            raise ValueError("gamma_order must be >= 1")
        object.__setattr__(self, "gamma_exponents", tuple(int(e) for e in self.gamma_exponents))
        if len(self.gamma_exponents) != 2:
            raise ValueError("gamma_exponents must be a pair")

    @property
    def weights(self) -> np.ndarray:
        return np.array([self.k, self.l])

    def group_phases(self) -> np.ndarray:
        """(n, 2) array of the torus elements of the finite group."""
        j = np.arange(self.gamma_order)[:, None]
        e = np.array(self.gamma_exponents)[None, :]
        return np.exp(2j * pi * j * e / self.gamma_order)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "gamma_order": self.gamma_order,
            "gamma_exponents": list(self.gamma_exponents),
        }


def orbit_distances(model: QuotientModel, xs, ys, tol: float = 1e-6) -> np.ndarray:
    """Vectorized :func:`orbit_distance` over rows of ``xs`` and ``ys``."""
    _check_tol(tol)
    xs = _unit_rows(xs, 2, "x")
    ys = _unit_rows(ys, 2, "y")
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have the same shape")
    phases = model.group_phases()
    n, b = len(phases), len(xs)
    x_rep = np.repeat(xs, n, axis=0)
    y_rep = (ys[:, None, :] * phases[None, :, :]).reshape(b * n, 2)
    chord, _ = min_orbit_chord(x_rep, y_rep, model.weights)
    return chord_to_angle(chord.reshape(b, n).min(axis=1))


def orbit_distance(model: QuotientModel, x, y, tol: float = 1e-6) -> float:
    return float(orbit_distances(model, x, y, tol)[0])


def sample_sphere_triples(seed: int, trials: int, dim: int = 2) -> np.ndarray:
    """(trials, 3, dim) uniform points on the unit sphere of C^dim.

    Trial ``i`` uses its own PCG64 stream seeded with ``[seed, i]`` and
    normalizes a standard 2*dim-dimensional Gaussian, so any trial can be
    regenerated on its own and results do not depend on evaluation order.
    """
    out = np.empty((trials, 3, dim), dtype=complex)
    for i in range(trials):
        g = np.random.default_rng([seed, i]).standard_normal((3, 2 * dim))
        z = g[:, :dim] + 1j * g[:, dim:]
        out[i] = z / np.linalg.norm(z, axis=1, keepdims=True)
    return out


def triangle_perimeters(model: QuotientModel, triples, tol: float = 1e-6) -> np.ndarray:
    triples = np.asarray(triples, dtype=complex)
    x1, x2, x3 = triples[:, 0], triples[:, 1], triples[:, 2]
    xs = np.concatenate([x1, x2, x3])
    ys = np.concatenate([x2, x3, x1])
    d = orbit_distances(model, xs, ys, tol).reshape(3, len(triples))
    return d.sum(axis=0)


@dataclass
class PerimeterReport:
    model: QuotientModel
    trials: int
    seed: int
    tol: float
    bound: float
    max_perimeter: float
    witness: np.ndarray
    passed: bool

    @property
    def max_violation(self) -> float:
        return self.max_perimeter - self.bound

    def to_json(self) -> dict:
        return {
            "model": self.model.to_json(),
            "max_perimeter": self.max_perimeter,
            "bound": self.bound,
            "margin": 3 * self.tol,
            "witness": [[[z.real, z.imag] for z in p] for p in self.witness],
        }


def verify_perimeter_bound(
    model: QuotientModel,
    trials: int,
    seed: int = 0,
    tol: float = 1e-6,
    bound: float = pi,
) -> PerimeterReport:
    """Largest orbit-triangle perimeter over ``trials`` random triples.

    Passes when the maximum stays below ``bound + 3 * tol``; the slack covers
    one distance error per side.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _check_tol(tol)
    triples = sample_sphere_triples(seed, trials)
    per = triangle_perimeters(model, triples, tol)
    i = int(np.argmax(per))
    best = float(per[i])
    return PerimeterReport(
        model=model,
        trials=trials,
        seed=seed,
        tol=tol,
        bound=bound,
        max_perimeter=best,
        witness=triples[i],
        passed=best <= bound + 3 * tol,
    )


def comparison_angle(a: float, b: float, c: float, slack: float = 1e-12) -> float:
    """Angle opposite side ``a`` in the unit-sphere triangle with sides a, b, c.

    Spherical law of cosines. ``slack`` is how far the triangle inequality may
    be violated before the sides are rejected.
    """
    eps = 1e-9
    for name, s in (("a", a), ("b", b), ("c", c)):
        if not 0 < s < pi:
            raise ValueError(f"side {name} = {s} is outside (0, pi)")
    if b < eps or c < eps or b > pi - eps or c > pi - eps:
        raise ValueError(f"degenerate adjacent sides b = {b}, c = {c}")
    if a > b + c + slack or b > a + c + slack or c > a + b + slack:
        raise ValueError(f"sides ({a}, {b}, {c}) violate the triangle inequality")
    if a + b + c > 2 * pi + slack:
        raise ValueError(f"sides ({a}, {b}, {c}) exceed the spherical perimeter 2*pi")
    cos_alpha = (np.cos(a) - np.cos(b) * np.cos(c)) / (np.sin(b) * np.sin(c))
    return float(np.arccos(np.clip(cos_alpha, -1.0, 1.0)))


def comparison_angles(sides: Sequence[float], slack: float = 1e-12) -> tuple[float, float, float]:
    """Angles opposite each of three sides."""
    a, b, c = sides
    return (
        comparison_angle(a, b, c, slack),
        comparison_angle(b, c, a, slack),
        comparison_angle(c, a, b, slack),
    )


def great_circle_triple(model: Optional[QuotientModel] = None) -> np.ndarray:
    """Three points of X_11 at mutual distance pi/3 (perimeter exactly pi)."""
    if model is not None and (abs(model.k), abs(model.l)) != (1, 1):
        raise ValueError("the great-circle triple is defined for the (1, 1) model")
    angles = np.array([0.0, pi / 3, 2 * pi / 3])
    return np.stack([np.cos(angles), np.sin(angles)], axis=1).astype(complex)
