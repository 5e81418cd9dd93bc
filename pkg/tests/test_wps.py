from itertools import product
from math import gcd, pi, sqrt

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from orb4kit.algebra import GradedGroup, euler_characteristic
from orb4kit.quotgeo import comparison_angle
from orb4kit.wps import (
    FixedPointData,
    IsotropyRep,
    default_generic_action,
    fixed_point_set,
    is_product_form,
    isotropy_weights,
    kobayashi_check,
    make_weights,
    normalize_weights,
    stratification,
    toponogov_witness,
    wps_cohomology,
    wps_distance,
    wps_distances,
)

weight_st = st.tuples(*[st.integers(1, 30)] * 3).filter(lambda w: gcd(gcd(w[0], w[1]), w[2]) == 1)
action_st = st.tuples(*[st.integers(-20, 20)] * 3)


def strata_dict(lam):
    return {s.name: s.group_order for s in stratification(lam)}


def grid_distance(lam, p, q, n=200_001):
    """Dense-grid oracle for the quotient distance."""
    theta = np.linspace(0, 2 * pi, n)
    phases = np.exp(1j * np.outer(theta, np.array(tuple(lam))))
    inner = (phases * (np.conj(p) * q)).sum(axis=1).real
    return float(np.arccos(np.clip(inner.max(), -1, 1)))


# weights and strata


def test_make_weights():
    assert tuple(make_weights(1, 2, 4)) == (1, 2, 4)
    assert tuple(make_weights(6, 10, 15)) == (6, 10, 15)
    with pytest.raises(ValueError, match="normalize_weights"):
        make_weights(2, 4, 8)
    with pytest.raises(ValueError):
        make_weights(0, 1, 1)
    assert tuple(normalize_weights(2, 4, 8)) == (1, 2, 4)


def test_stratification_examples():
    assert strata_dict(make_weights(1, 2, 4)) == {"Vertex1": 2, "Vertex2": 4, "Edge12": 2, "Regular": 1}
    assert strata_dict(make_weights(1, 1, 1)) == {"Regular": 1}
    assert strata_dict(make_weights(6, 10, 15)) == {
        "Vertex0": 6,
        "Vertex1": 10,
        "Vertex2": 15,
        "Edge01": 2,
        "Edge02": 3,
        "Edge12": 5,
        "Regular": 1,
    }


@given(weight_st)
def test_stratification_edge_divides_vertices(w):
    lam = make_weights(*w)
    for s in stratification(lam):
        if s.locus[0] == "edge":
            _, i, j = s.locus
            assert lam[i] % s.group_order == 0 and lam[j] % s.group_order == 0
        if s.locus[0] == "regular":
            assert s.group_order == 1


@given(weight_st, st.permutations([0, 1, 2]))
def test_stratification_is_permutation_equivariant(w, perm):
    lam = make_weights(*w)
    moved = make_weights(*(w[perm[i]] for i in range(3)))

    def relabel(s):
        if s.locus[0] == "vertex":
            return ("vertex", perm[s.locus[1]], s.group_order)
        if s.locus[0] == "edge":
            return ("edge", *sorted((perm[s.locus[1]], perm[s.locus[2]])), s.group_order)
        return ("regular", s.group_order)

    def plain(s):
        return (*s.locus, s.group_order)

    assert sorted(map(relabel, stratification(moved))) == sorted(map(plain, stratification(lam)))


# product form


def product_form_oracle(limit):
    """All sorted (ab, ac, bc) with a, b, c <= limit."""
    found = set()
    for a, b, c in product(range(1, limit + 1), repeat=3):
        found.add(tuple(sorted((a * b, a * c, b * c))))
    return found


def test_product_form_examples():
    assert is_product_form(make_weights(1, 1, 1)) == (1, 1, 1)
    assert is_product_form(make_weights(2, 3, 6)) == (1, 2, 3)
    assert is_product_form(make_weights(1, 2, 4)) is None


def test_product_form_matches_brute_force_small():
    table = product_form_oracle(12)
    for w in product(range(1, 13), repeat=3):
        if gcd(gcd(w[0], w[1]), w[2]) != 1:
            continue
        got = is_product_form(make_weights(*w))
        assert (got is not None) == (tuple(sorted(w)) in table), w
        if got is not None:
            a, b, c = got
            assert (a * b, a * c, b * c) == w


@given(weight_st, st.permutations([0, 1, 2]))
def test_product_form_independent_of_order(w, perm):
    lam = make_weights(*w)
    moved = make_weights(*(w[i] for i in perm))
    assert (is_product_form(lam) is None) == (is_product_form(moved) is None)


# cohomology


def test_wps_cohomology():
    cp2 = GradedGroup.of("Z", "0", "Z", "0", "Z")
    assert wps_cohomology(make_weights(1, 2, 4)) == cp2
    assert wps_cohomology(make_weights(1, 1, 1)) == cp2
    assert euler_characteristic(wps_cohomology(make_weights(7, 11, 13))) == 3


# fixed points and isotropy


def test_fixed_point_examples():
    lam = make_weights(1, 2, 4)
    f = fixed_point_set(lam, (1, 0, 0))
    assert f == FixedPointData(sphere=0)
    assert f.kind == "VertexAndSphere" and f.isolated_vertices == (0,)
    assert fixed_point_set(make_weights(1, 1, 1), (0, 1, 2)).kind == "ThreeVertices"
    assert fixed_point_set(lam, (2, 2, 4)) == f


def test_minors_for_generic_111_action():
    # the three 2x2 minors m_j l_k - m_k l_j for lambda = (1,1,1), m = (0,1,2)
    m = (0, 1, 2)
    minors = [m[j] - m[k] for j, k in ((1, 2), (0, 2), (0, 1))]
    assert minors == [-1, -2, -1]


def test_trivial_action_rejected():
    with pytest.raises(ValueError):
        fixed_point_set(make_weights(1, 2, 4), (2, 4, 8))
    with pytest.raises(ValueError):
        fixed_point_set(make_weights(1, 2, 4), (0, 0, 0))


def test_isotropy_examples():
    lam = make_weights(1, 2, 4)
    assert isotropy_weights(lam, (1, 0, 0), 0) == IsotropyRep(1, 2)
    assert isotropy_weights(make_weights(1, 1, 1), (0, 1, 2), 0) == IsotropyRep(1, 2)
    with pytest.raises(ValueError, match="not an isolated"):
        isotropy_weights(make_weights(1, 1, 1), (1, 0, 0), 1)


def test_isotropy_rejects_non_isolated_vertex():
    # m = (1,0,0) on CP^2[1,1,1] fixes {w0 = 0} pointwise, so vertices 1 and 2
    # lie on the fixed sphere
    lam = make_weights(1, 1, 1)
    for i in (1, 2):
        with pytest.raises(ValueError):
            isotropy_weights(lam, (1, 0, 0), i)
    assert isotropy_weights(lam, (1, 0, 0), 0) == IsotropyRep(1, 1)


def test_isotropy_rep_invariants():
    with pytest.raises(ValueError):
        IsotropyRep(2, 1)
    with pytest.raises(ValueError):
        IsotropyRep(2, 4)


@settings(max_examples=300)
@given(weight_st, action_st, st.integers(-3, 3))
def test_shift_invariance(w, m, t):
    lam = make_weights(*w)
    assume(any(m[j] * w[k] != m[k] * w[j] for j, k in ((0, 1), (0, 2), (1, 2))))
    shifted = tuple(mi + t * wi for mi, wi in zip(m, w))
    f = fixed_point_set(lam, m)
    assert fixed_point_set(lam, shifted) == f
    for i in f.isolated_vertices:
        try:
            rep = isotropy_weights(lam, m, i)
        except ValueError:
            with pytest.raises(ValueError):
                isotropy_weights(lam, shifted, i)
        else:
            assert isotropy_weights(lam, shifted, i) == rep


@settings(max_examples=300)
@given(weight_st, action_st, st.permutations([0, 1, 2]))
def test_permutation_equivariance(w, m, perm):
    lam = make_weights(*w)
    assume(any(m[j] * w[k] != m[k] * w[j] for j, k in ((0, 1), (0, 2), (1, 2))))
    # coordinate i of the new triple is coordinate perm[i] of the old one
    lam2 = make_weights(*(w[perm[i]] for i in range(3)))
    m2 = tuple(m[perm[i]] for i in range(3))
    f, f2 = fixed_point_set(lam, m), fixed_point_set(lam2, m2)
    if f.sphere is None:
        assert f2.sphere is None
    else:
        assert perm[f2.sphere] == f.sphere
    for i2 in f2.isolated_vertices:
        try:
            rep2 = isotropy_weights(lam2, m2, i2)
        except ValueError:
            continue
        assert isotropy_weights(lam, m, perm[i2]) == rep2


def test_at_most_one_fixed_sphere_random():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 2000:
        w = tuple(int(x) for x in rng.integers(1, 25, 3))
        m = tuple(int(x) for x in rng.integers(-25, 26, 3))
        if gcd(gcd(w[0], w[1]), w[2]) != 1:
            continue
        zero = [m[j] * w[k] - m[k] * w[j] for j, k in ((1, 2), (0, 2), (0, 1))].count(0)
        if zero == 3:
            continue
        assert zero <= 1
        fixed_point_set(make_weights(*w), m)
        checked += 1


# Kobayashi


@pytest.mark.parametrize(
    "w, m", [((1, 2, 4), (1, 0, 0)), ((1, 1, 1), (0, 1, 2)), ((3, 5, 7), (0, 0, 1))]
)
def test_kobayashi_examples(w, m):
    assert kobayashi_check(make_weights(*w), m)


def test_kobayashi_357_fixed_set():
    # minors for m = (0,0,1): i=0 -> -5, i=1 -> -3, i=2 -> 0, so {w2 = 0} is fixed
    f = fixed_point_set(make_weights(3, 5, 7), (0, 0, 1))
    assert f.sphere == 2 and f.euler_characteristic == 3


@given(weight_st, action_st)
def test_kobayashi_always_true(w, m):
    assume(any(m[j] * w[k] != m[k] * w[j] for j, k in ((0, 1), (0, 2), (1, 2))))
    assert kobayashi_check(make_weights(*w), m)


# distances


def test_distance_examples():
    e0, e1 = np.array([1, 0, 0]), np.array([0, 1, 0])
    for w in [(1, 1, 1), (1, 2, 4), (3, 5, 7)]:
        assert wps_distance(make_weights(*w), e0, e1) == pytest.approx(pi / 2, abs=1e-12)
    assert wps_distance(make_weights(1, 2, 4), e0, e0) == 0.0
    q = np.array([1, 1, 0]) / sqrt(2)
    lam = make_weights(1, 1, 1)
    assert grid_distance(lam, e0, q) == pytest.approx(pi / 4, abs=1e-9)
    assert wps_distance(lam, e0, q) == pytest.approx(pi / 4, abs=1e-6)


def test_distance_rejects_bad_input():
    lam = make_weights(1, 1, 1)
    with pytest.raises(ValueError):
        wps_distance(lam, [1, 0, 0], [1, 1, 0])
    with pytest.raises(ValueError):
        wps_distance(lam, [1, 0, 0], [0, 1, 0], tol=0.0)
    with pytest.raises(ValueError):
        wps_distance(lam, [1, 0], [0, 1])


def random_s5(rng, n):
    z = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@pytest.mark.parametrize("w", [(1, 1, 1), (1, 2, 4), (3, 5, 7), (2, 3, 6)])
def test_distance_matches_grid_oracle(w):
    lam = make_weights(*w)
    rng = np.random.default_rng(sum(w))
    p, q = random_s5(rng, 20), random_s5(rng, 20)
    got = wps_distances(lam, p, q)
    want = [grid_distance(lam, p[i], q[i]) for i in range(20)]
    np.testing.assert_allclose(got, want, atol=1e-6)


def test_distance_vanishes_on_orbits():
    rng = np.random.default_rng(3)
    lam = make_weights(2, 3, 7)
    p = random_s5(rng, 50)
    theta = rng.uniform(0, 2 * pi, 50)
    q = p * np.exp(1j * np.outer(theta, [2, 3, 7]))
    assert wps_distances(lam, p, q).max() < 1e-7


@pytest.mark.parametrize("w", [(1, 1, 1), (1, 2, 4), (3, 5, 7)])
def test_distance_metric_properties(w):
    tol = 1e-6
    lam = make_weights(*w)
    rng = np.random.default_rng(11)
    a, b, c = random_s5(rng, 300), random_s5(rng, 300), random_s5(rng, 300)
    ab, ba = wps_distances(lam, a, b), wps_distances(lam, b, a)
    bc, ac = wps_distances(lam, b, c), wps_distances(lam, a, c)
    assert np.max(np.abs(ab - ba)) <= 2 * tol
    assert np.max(ac - ab - bc) <= 3 * tol
    assert np.max(ab) <= pi / 2 + tol


# Toponogov witness


def test_toponogov_octant():
    w = toponogov_witness(make_weights(1, 1, 1), (0, 1, 2))
    assert w.distances == pytest.approx((pi / 2,) * 3, abs=1e-9)
    assert w.angles == pytest.approx((pi / 2,) * 3, abs=1e-9)
    assert w.angle_sum == pytest.approx(3 * pi / 2, abs=1e-6)


def test_equilateral_comparison_angle_sum():
    for d in np.linspace(0.1, 2.0, 12):
        total = 3 * comparison_angle(d, d, d)
        assert total == pytest.approx(3 * np.arccos(np.cos(d) / (1 + np.cos(d))), abs=1e-12)


def test_toponogov_requires_three_isolated_points():
    # (0,1,2) on CP^2[1,2,4] fixes {w0 = 0} since 1*4 - 2*2 = 0
    with pytest.raises(ValueError):
        toponogov_witness(make_weights(1, 2, 4), (0, 1, 2))


@settings(max_examples=40, deadline=None)
@given(weight_st, action_st)
def test_toponogov_sum_exceeds_pi(w, m):
    lam = make_weights(*w)
    assume(any(m[j] * w[k] != m[k] * w[j] for j, k in ((0, 1), (0, 2), (1, 2))))
    assume(fixed_point_set(lam, m).sphere is None)
    assert toponogov_witness(lam, m).angle_sum > pi - 1e-6


def test_default_generic_action():
    for w in [(1, 1, 1), (1, 2, 4), (3, 5, 7), (6, 10, 15)]:
        lam = make_weights(*w)
        assert fixed_point_set(lam, default_generic_action(lam)).sphere is None
