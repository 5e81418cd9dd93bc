"""S^4 as traceless symmetric unit-norm 3x3 matrices, with SO(3) acting by
conjugation.

Suspension coordinates write such a matrix as

    [[-h/2 + t,  b,        c],
     [ b,       -h/2 - t,  d],
     [ c,        d,        h]]

with ``t^2 + b^2 + c^2 + d^2 = (2 - 3h^2)/4``, so every level ``h`` in the open
interval ``(-2/sqrt6, 2/sqrt6)`` is a round 3-sphere in (t, b, c, d) and the
two endpoints are single points.

The circle of rotations about the third axis fixes h, turns (t, b) by twice
the rotation angle and (c, d) by the angle itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import hypot, pi, sqrt

import numpy as np

ALG_TOL = 1e-9
H_MAX = 2 / sqrt(6)
SINGULAR_TYPE = (-2 / sqrt(6), 1 / sqrt(6), 1 / sqrt(6))


@dataclass(frozen=True)
class HitchinPoint:
    t: float
    b: float
    c: float
    d: float
    h: float

    def __post_init__(self):
        if abs(self.h) > H_MAX + ALG_TOL:
            raise ValueError(f"h = {self.h} is outside [-2/sqrt6, 2/sqrt6]")
        lhs = self.t**2 + self.b**2 + self.c**2 + self.d**2
        rhs = (2 - 3 * self.h**2) / 4
        if abs(lhs - rhs) > ALG_TOL:
            raise ValueError(
                f"t^2+b^2+c^2+d^2 = {lhs!r} but (2-3h^2)/4 = {rhs!r}"
            )

    @classmethod
    def on_level(cls, h: float, direction) -> "HitchinPoint":
        """Point at height h in the direction of a nonzero 4-vector."""
        direction = np.asarray(direction, dtype=float)
        r = sqrt(max(0.0, (2 - 3 * h * h) / 4))
        t, b, c, d = r * direction / np.linalg.norm(direction)
        return cls(float(t), float(b), float(c), float(d), float(h))

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.b, self.c, self.d, self.h])


def check_sym_traceless(m, tol: float = ALG_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.T)) > tol:
        raise ValueError("matrix is not symmetric")
    if abs(np.trace(m)) > tol:
        raise ValueError(f"trace {np.trace(m)!r} is not zero")
    if abs(np.linalg.norm(m) - 1.0) > tol:
        raise ValueError(f"Frobenius norm {np.linalg.norm(m)!r} is not one")
    return m


def embed(p: HitchinPoint) -> np.ndarray:
    t, b, c, d, h = p.t, p.b, p.c, p.d, p.h
    m = np.array(
        [
            [-h / 2 + t, b, c],
            [b, -h / 2 - t, d],
            [c, d, h],
        ]
    )
    return check_sym_traceless(m)


def coordinates(m) -> HitchinPoint:
    """Inverse of :func:`embed`."""
    m = check_sym_traceless(m)
    return HitchinPoint(
        t=(m[0, 0] - m[1, 1]) / 2, b=m[0, 1], c=m[0, 2], d=m[1, 2], h=m[2, 2]
    )


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def s1_act(theta: float, m) -> np.ndarray:
    r = rotation(theta)
    return r @ np.asarray(m, dtype=float) @ r.T


def fixed_points() -> tuple[np.ndarray, np.ndarray]:
    """The two circle-fixed matrices, one on each singular SO(3)-orbit."""
    a = 1 / sqrt(6)
    return np.diag([a, a, -2 * a]), np.diag([-a, -a, 2 * a])


@dataclass(frozen=True)
class HitchinOrbifoldTag:
    """Which singular RP^2 carries the Z_k orbifold group of H_k.

    ``side="positive"`` is the orbit of diag(1, 1, -2)/sqrt6 (repeated
    positive eigenvalue), ``"negative"`` that of diag(-1, -1, 2)/sqrt6.
    """

    k: int
    side: str = "positive"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.side not in ("positive", "negative"):
            raise ValueError(f"side must be 'positive' or 'negative', got {self.side!r}")

    @property
    def pi1orb_order(self) -> int:
        return 1 if self.k % 2 else 2

    def representative(self) -> np.ndarray:
        pos, neg = fixed_points()
        return pos if self.side == "positive" else neg

    def to_json(self) -> dict:
        return {"k": self.k, "side": self.side, "pi1orb_order": self.pi1orb_order}


def _jacobi_eigenvalues(m: np.ndarray, sweeps: int = 50) -> np.ndarray:
    a = np.array(m, dtype=float)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(sweeps):
        off = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
        if sqrt(off) <= 1e-17 * scale:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            if a[p, q] == 0.0:
                continue
            tau = (a[q, q] - a[p, p]) / (2 * a[p, q])
            t = np.sign(tau) / (abs(tau) + hypot(1.0, tau)) if tau != 0 else 1.0
            c = 1 / sqrt(1 + t * t)
            s = t * c
            j = np.eye(3)
            j[p, p] = j[q, q] = c
            j[p, q], j[q, p] = s, -s
            a = j.T @ a @ j
    return np.sort(np.diag(a))


def eigenvalue_type(m) -> tuple[float, float, float]:
    """Ascending eigenvalues of a symmetric 3x3 matrix.

    Uses the trigonometric solution of the characteristic cubic, switching to
    cyclic Jacobi sweeps when two eigenvalues (nearly) coincide, where the
    arccos in the closed form loses precision.
    """
    m = np.asarray(m, dtype=float)
    off = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    q = np.trace(m) / 3
    p = sqrt((np.sum((np.diag(m) - q) ** 2) + 2 * off) / 6)
    if p == 0.0:
        return (q, q, q)
    r = np.linalg.det((m - q * np.eye(3)) / p) / 2
    if abs(r) > 1 - 1e-6:
        return tuple(float(x) for x in _jacobi_eigenvalues(m))
    phi = np.arccos(r) / 3
    hi = q + 2 * p * np.cos(phi)
    lo = q + 2 * p * np.cos(phi + 2 * pi / 3)
    mid = 3 * q - hi - lo
    return (float(lo), float(mid), float(hi))


def random_rotations(seed: int, count: int) -> np.ndarray:
    """(count, 3, 3) Haar-random rotations from normalized Gaussian
    quaternions; sample i depends only on (seed, i)."""
    out = np.empty((count, 3, 3))
    for i in range(count):
        w, x, y, z = _unit(np.random.default_rng([seed, i]).standard_normal(4))
        out[i] = [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    return out


def _unit(v):
    return v / np.linalg.norm(v)


@dataclass
class VerificationReport:
    passed: bool
    max_violation: float
    trials: int
    seed: int
    details: dict

    def to_json(self) -> dict:
        return dict(self.details)


def verify_fixed_points(trials: int = 100, seed: int = 0, tol: float = 1e-12) -> VerificationReport:
    """Both matrices of :func:`fixed_points` are fixed by random rotations."""
    worst = 0.0
    for i in range(trials):
        theta = np.random.default_rng([seed, i]).uniform(0, 2 * pi)
        for m in fixed_points():
            worst = max(worst, float(np.max(np.abs(s1_act(theta, m) - m))))
    pos, neg = fixed_points()
    return VerificationReport(
        passed=worst <= tol,
        max_violation=worst,
        trials=trials,
        seed=seed,
        details={
            "fixed_points": [pos.tolist(), neg.tolist()],
            "max_deviation": worst,
            "tol": tol,
        },
    )


def verify_phi12(samples: int = 1000, tol: float = 1e-9, seed: int = 0) -> VerificationReport:
    """Check that the circle acts with weight 2 on (t, b) and weight 1 on (c, d).

    Each sample draws a rotation angle, an interior height h and a direction
    on the level 3-sphere, conjugates the embedded matrix and compares the
    new suspension coordinates with the predicted planar rotations.
    """
    worst = 0.0
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        theta = rng.uniform(0, 2 * pi)
        h = rng.uniform(-H_MAX, H_MAX) * (1 - 1e-6)
        p = HitchinPoint.on_level(h, rng.standard_normal(4))
        q = coordinates(s1_act(theta, embed(p)))
        c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
        c1, s1 = np.cos(theta), np.sin(theta)
        expected = np.array(
            [
                c2 * p.t - s2 * p.b,
                s2 * p.t + c2 * p.b,
                c1 * p.c - s1 * p.d,
                s1 * p.c + c1 * p.d,
                p.h,
            ]
        )
        worst = max(worst, float(np.max(np.abs(q.as_array() - expected))))
    return VerificationReport(
        passed=worst <= tol,
        max_violation=worst,
        trials=samples,
        seed=seed,
        details={"weights": {"tb": 2, "cd": 1}, "max_deviation": worst, "tol": tol},
    )


@dataclass
class SliceRange:
    analytic: tuple[float, float]
    sampled: tuple[float, float]
    samples: int
    seed: int
    tol: float
    sample_tol: float

    @property
    def expected(self) -> tuple[float, float]:
        return SINGULAR_TYPE[0], SINGULAR_TYPE[2]

    @property
    def analytic_error(self) -> float:
        return max(abs(a - e) for a, e in zip(self.analytic, self.expected))

    @property
    def sampled_error(self) -> float:
        return max(abs(a - e) for a, e in zip(self.sampled, self.analytic))

    @property
    def rayleigh_violation(self) -> float:
        lo, hi = self.analytic
        return max(lo - self.sampled[0], self.sampled[1] - hi, 0.0)

    @property
    def passed(self) -> bool:
        return (
            self.analytic_error <= self.tol
            and self.rayleigh_violation <= self.tol
            and self.sampled_error <= self.sample_tol
        )

    def to_json(self) -> dict:
        return {
            "analytic": list(self.analytic),
            "sampled": list(self.sampled),
            "expected": list(self.expected),
            "analytic_error": self.analytic_error,
            "sampled_error": self.sampled_error,
            "tol": self.tol,
            "sample_tol": self.sample_tol,
        }


def singular_slice_range(
    tol: float = 1e-9, samples: int = 10_000, seed: int = 0, sample_tol: float = 1e-3
) -> SliceRange:
    """Range of the (3,3) entry over the SO(3)-orbit of diag(1,1,-2)/sqrt6.

    The entry of R M R^T at (3,3) is the Rayleigh quotient of M at R^T e3,
    so its range is [lambda_min, lambda_max]; random rotations give an
    independent inner estimate.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    model = fixed_points()[0]
    lo, _, hi = eigenvalue_type(model)
    rots = random_rotations(seed, samples)
    entries = np.einsum("ni,ij,nj->n", rots[:, 2, :], model, rots[:, 2, :])
    return SliceRange(
        analytic=(lo, hi),
        sampled=(float(entries.min()), float(entries.max())),
        samples=samples,
        seed=seed,
        tol=tol,
        sample_tol=sample_tol,
    )


def _singular_matrix(axis) -> np.ndarray:
    """diag(1, 1, -2)/sqrt6 conjugated so that its -2/sqrt6 eigenvector is axis."""
    u = _unit(np.asarray(axis, dtype=float))
    return (np.eye(3) - 3 * np.outer(u, u)) / sqrt(6)


def circle_orbit_distance(m, ref, grid: int = 720) -> float:
    """min over theta of the Frobenius distance from m to s1_act(theta, ref)."""
    step = 2 * pi / grid

    def dist(theta):
        return np.linalg.norm(s1_act(theta, ref) - m)

    values = [dist(i * step) for i in range(grid)]
    i = int(np.argmin(values))
    a, b = (i - 1) * step, (i + 1) * step
    g = (sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = dist(c), dist(d)
    for _ in range(80):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = dist(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = dist(d)
    return float(min(values[i], dist(0.5 * (a + b))))


def slice_orbit_uniqueness(
    h: float, samples: int = 200, tol: float = 1e-6, seed: int = 0
) -> VerificationReport:
    """Singular-orbit matrices at height h form a single circle orbit.

    Construction: a random rotation R moves the -2/sqrt6 eigenvector of the
    diagonal model to u = R e3; u is then tilted inside its vertical plane
    (keeping its azimuth) until the (3,3) entry (1 - 3 u_3^2)/sqrt6 equals h.
    Each result is compared with the reference of azimuth zero through the
    circle-orbit distance.
    """
    lo, hi = SINGULAR_TYPE[0], SINGULAR_TYPE[2]
    if not lo < h < hi:
        raise ValueError(f"h = {h} is outside the open slice range ({lo}, {hi})")
    u3 = sqrt((1 - sqrt(6) * h) / 3)
    rho = sqrt(1 - u3 * u3)
    ref = _singular_matrix([rho, 0.0, u3])
    worst_orbit = worst_h = worst_type = 0.0
    for i, rot in enumerate(random_rotations(seed, samples)):
        x, y, z = rot[:, 2]
        azimuth = np.arctan2(y, x)
        sign = 1.0 if z >= 0 else -1.0
        m = _singular_matrix([rho * np.cos(azimuth), rho * np.sin(azimuth), sign * u3])
        worst_h = max(worst_h, float(abs(m[2, 2] - h)))
        worst_type = max(
            worst_type, max(abs(a - e) for a, e in zip(eigenvalue_type(m), SINGULAR_TYPE))
        )
        worst_orbit = max(worst_orbit, circle_orbit_distance(m, ref))
    worst = max(worst_orbit, worst_h, worst_type)
    return VerificationReport(
        passed=worst <= tol,
        max_violation=worst,
        trials=samples,
        seed=seed,
        details={
            "h": h,
            "max_orbit_distance": worst_orbit,
            "max_height_error": worst_h,
            "max_type_error": worst_type,
            "tol": tol,
        },
    )

