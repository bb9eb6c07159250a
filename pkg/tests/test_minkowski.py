import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crooked.errors import GeometryError
from crooked.hyperbolic import (
    BoundaryPoint,
    Isometry,
    Line,
    Side,
    hyperbolic_with_axis,
    parabolic_at,
    reflection_matrix,
    rotation_about,
    side_of,
)
from crooked.minkowski import (
    FieldKind,
    KillingField,
    MinkPlane,
    elliptic_field_at,
    exp_killing,
    hyperbolic_field,
    killing_classify,
    mink_common_point,
    mink_crooked_contains,
    mink_disjoint,
    mink_halfspace_side,
    mink_stem_quadrant_contains,
    nilpotent_field,
    sample_mink_crooked,
    sq_cone_generators,
)
from crooked.planes import CrookedPlane, StemQuadrant, crooked_contains, stem_quadrant_contains

from oracles import random_separated_lines

AXIS = Line(0.0, math.inf, positive_left=True)
# inner line of the radius-2 frame, origin side positive
INNER = Line(-0.5, 0.5, positive_left=False)
ROT_I = KillingField([[0.0, -1.0], [1.0, 0.0]])


def random_field(rng, scale=3.0):
    return KillingField.from_chart(*(rng.normal(size=3) * scale))


# ---------------------------------------------------------------- chart


def test_chart_round_trip_and_form():
    rng = np.random.default_rng(7)
    for _ in range(300):
        z = rng.normal(size=3) * 10.0
        X = KillingField.from_chart(*z)
        assert np.allclose(X.chart(), z, atol=1e-12)
        m = X.m
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        q = z[0] ** 2 + z[1] ** 2 - z[2] ** 2
        assert abs(X.q() - q) <= 1e-12 * max(1.0, abs(q))
        assert abs(X.q() + det) <= 1e-12 * max(1.0, abs(q))


def test_rejects_trace():
    with pytest.raises(GeometryError):
        KillingField([[1.0, 0.0], [0.0, 1.0]])
    KillingField([[1.0, 0.0], [0.0, -1.0]])  # fine


def test_arithmetic():
    a = KillingField.from_chart(1.0, 2.0, 3.0)
    b = KillingField.from_chart(-2.0, 0.5, 1.0)
    assert np.allclose((a + b).chart(), [-1.0, 2.5, 4.0])
    assert np.allclose((a - b).chart(), [3.0, 1.5, 2.0])
    assert np.allclose((2.0 * a).chart(), [2.0, 4.0, 6.0])
    assert np.allclose((-a).chart(), [-1.0, -2.0, -3.0])
    assert KillingField.zero().is_zero()


# ------------------------------------------------------- classification


def test_classify_examples():
    c = killing_classify(ROT_I)
    assert c.kind is FieldKind.ELLIPTIC
    assert abs(c.fixed - 1j) < 1e-12

    c = killing_classify(KillingField([[0.0, 1.0], [0.0, 0.0]]))
    assert c.kind is FieldKind.PARABOLIC
    assert c.boundary_fixed.same_as(BoundaryPoint.from_value(math.inf))

    c = killing_classify(KillingField([[1.0, 0.0], [0.0, -1.0]]))
    assert c.kind is FieldKind.HYPERBOLIC
    assert c.attracting.same_as(BoundaryPoint.from_value(math.inf))
    assert c.repelling.same_as(BoundaryPoint.from_value(0.0))

    assert killing_classify(KillingField.zero()).kind is FieldKind.ZERO


def test_classify_constructors_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(100):
        p = complex(rng.normal(0, 4), rng.uniform(0.05, 8.0))
        c = killing_classify(elliptic_field_at(p, rng.uniform(0.1, 5.0)))
        assert c.kind is FieldKind.ELLIPTIC
        assert abs(c.fixed - p) < 1e-8 * (1 + abs(p))

        xi = rng.normal(0, 4)
        c = killing_classify(rng.uniform(0.1, 5.0) * nilpotent_field(xi))
        assert c.kind is FieldKind.PARABOLIC
        assert c.boundary_fixed.same_as(BoundaryPoint.from_value(xi), 1e-9)

        rep, att = rng.normal(0, 4, size=2)
        if abs(rep - att) < 0.1:
            continue
        c = killing_classify(hyperbolic_field(rep, att, rng.uniform(0.1, 5.0)))
        assert c.kind is FieldKind.HYPERBOLIC
        assert c.attracting.same_as(BoundaryPoint.from_value(att), 1e-9)
        assert c.repelling.same_as(BoundaryPoint.from_value(rep), 1e-9)


def test_negation_swaps_ends():
    X = hyperbolic_field(-1.0, 2.0, 1.5)
    c, cn = killing_classify(X), killing_classify(-X)
    assert c.attracting.same_as(cn.repelling)
    assert c.repelling.same_as(cn.attracting)


# ----------------------------------------------------------- membership


def test_contains_examples():
    P = MinkPlane.left(KillingField.zero(), AXIS)
    assert mink_crooked_contains(P, ROT_I)
    assert mink_crooked_contains(P, KillingField([[1.0, 0.0], [0.0, -1.0]]))
    assert not mink_crooked_contains(P, elliptic_field_at(1 + 1j, 2.0))
    assert mink_crooked_contains(P, KillingField.zero())


def test_contains_side_asymmetry():
    P = MinkPlane.left(KillingField.zero(), AXIS)
    PR = MinkPlane.right(KillingField.zero(), AXIS)
    toward_axis = hyperbolic_field(3.0, 0.0, 1.0)  # attracting 0
    off_axis = hyperbolic_field(0.0, 3.0, 1.0)     # repelling 0
    assert mink_crooked_contains(P, toward_axis)
    assert not mink_crooked_contains(PR, toward_axis)
    assert mink_crooked_contains(PR, off_axis)
    assert not mink_crooked_contains(P, off_axis)
    # axis along the line itself: both endpoints fixed, member of both
    along = KillingField([[1.0, 0.0], [0.0, -1.0]])
    assert mink_crooked_contains(P, along) and mink_crooked_contains(PR, along)


def test_contains_translated():
    rng = np.random.default_rng(11)
    v = random_field(rng)
    P = MinkPlane.left(v, INNER)
    assert mink_crooked_contains(P, v)
    assert mink_crooked_contains(P, v + elliptic_field_at(0.5j, 1.3))
    assert not mink_crooked_contains(P, v + elliptic_field_at(10 + 10j, 1.3))


def test_sampler_produces_members():
    rng = np.random.default_rng(5)
    for side in ("left", "right"):
        for _ in range(3):
            l1, _ = random_separated_lines(rng)
            P = MinkPlane(side, random_field(rng), l1)
            pts = sample_mink_crooked(P, 120, seed=int(rng.integers(2**31)))
            assert len(pts) == 120
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                assert all(mink_crooked_contains(P, X) for X in pts)


# ------------------------------------------------------ quadrant cone


def test_cone_generators_frozen():
    ua, ub = sq_cone_generators(INNER)
    ref_a = np.array([[-1.0, -0.5], [2.0, 1.0]])   # vanishes at -1/2
    ref_b = np.array([[-1.0, 0.5], [-2.0, 1.0]])   # vanishes at +1/2
    for u, ref in ((ua, ref_a), (ub, ref_b)):
        r = u.m[ref != 0] / ref[ref != 0]
        assert np.allclose(r, r[0]) and r[0] > 0
    ca, cb = killing_classify(ua), killing_classify(ub)
    assert ca.kind is FieldKind.PARABOLIC and ca.boundary_fixed.same_as(INNER.a)
    assert cb.kind is FieldKind.PARABOLIC and cb.boundary_fixed.same_as(INNER.b)


def test_cone_flip_negates():
    for line in (INNER, AXIS, Line(-3.0, 0.7, True)):
        ua, ub = sq_cone_generators(line)
        fa, fb = sq_cone_generators(line.with_orientation(not line.positive_left))
        assert np.allclose(fa.m, -ua.m) and np.allclose(fb.m, -ub.m)


def test_quadrant_examples():
    usum = KillingField([[-2.0, 0.0], [0.0, 2.0]])  # spec-scale u+ + u-
    assert mink_stem_quadrant_contains(INNER, usum)
    assert not mink_stem_quadrant_contains(INNER, KillingField.zero())
    assert not mink_stem_quadrant_contains(INNER, ROT_I)
    assert not mink_stem_quadrant_contains(INNER, -usum)


def test_quadrant_interior_and_boundary():
    rng = np.random.default_rng(9)
    lines = [INNER, AXIS, Line(-3.0, 0.7, True), Line(5.0, math.inf, False)]
    for _ in range(150):
        line = lines[rng.integers(len(lines))]
        ua, ub = sq_cone_generators(line)
        a, b = rng.uniform(0.01, 5.0, size=2)
        X = a * ua + b * ub
        assert mink_stem_quadrant_contains(line, X)
        c = killing_classify(X)
        assert c.kind is FieldKind.HYPERBOLIC
        assert side_of(line, c.attracting) is Side.POSITIVE
        mirrored = BoundaryPoint(reflection_matrix(line) @ c.attracting.v)
        assert mirrored.same_as(c.repelling, 1e-9)
        # boundary rays and the mirror cone stay out
        assert not mink_stem_quadrant_contains(line, b * ub)
        assert not mink_stem_quadrant_contains(line, -X)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_exp_of_cone_lands_in_stem_quadrant(seed):
    rng = np.random.default_rng(seed)
    l1, l2 = random_separated_lines(rng)
    line = l1 if rng.random() < 0.5 else l2
    ua, ub = sq_cone_generators(line)
    X = rng.uniform(0.01, 4.0) * ua + rng.uniform(0.01, 4.0) * ub
    assert stem_quadrant_contains(StemQuadrant(line), exp_killing(X))


# ------------------------------------------------------------ exponential


def test_exp_examples():
    assert exp_killing(KillingField.zero()).is_identity()
    g = exp_killing(KillingField([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(g.m, [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)


def _projective_gap(g, h):
    return min(np.abs(g.m - h.m).max(), np.abs(g.m + h.m).max())


def test_exp_matches_group_constructors():
    rng = np.random.default_rng(13)
    for _ in range(60):
        p = complex(rng.normal(0, 3), rng.uniform(0.1, 5.0))
        th = rng.uniform(-2.5, 2.5)
        assert _projective_gap(exp_killing(elliptic_field_at(p, th)),
                               rotation_about(p, th)) < 1e-10

        xi, t = rng.normal(0, 3), rng.uniform(-4, 4)
        assert _projective_gap(exp_killing(t * nilpotent_field(xi)),
                               parabolic_at(xi, t)) < 1e-12

        rep, att = rng.normal(0, 3, size=2)
        if abs(rep - att) < 0.2:
            continue
        t = rng.uniform(0.05, 5.0)
        assert _projective_gap(exp_killing(hyperbolic_field(rep, att, t)),
                               hyperbolic_with_axis(rep, att, t)) < 1e-10


def test_exp_unit_determinant():
    rng = np.random.default_rng(17)
    for _ in range(200):
        g = exp_killing(random_field(rng, scale=rng.uniform(0.1, 6.0)))
        # entry rounding alone moves a determinant by ~eps * scale^2
        tol = 1e-12 * max(1.0, float(np.abs(g.m).max()) ** 2)
        assert abs(np.linalg.det(g.m) - 1.0) < max(1e-12, tol)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_exp_of_plane_lands_in_crooked_plane(seed):
    rng = np.random.default_rng(seed)
    l1, _ = random_separated_lines(rng)
    side = "left" if rng.random() < 0.5 else "right"
    P = MinkPlane(side, KillingField.zero(), l1)
    make = CrookedPlane.left if side == "left" else CrookedPlane.right
    G = make(Isometry.identity(), l1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for X in sample_mink_crooked(P, 40, seed=seed % 1000, span=4.0):
            assert crooked_contains(G, exp_killing(X)).member


# ----------------------------------------------------------- disjointness


def away_pair_radius_2():
    inner = INNER
    outer = Line(2.0, -2.0, positive_left=False)
    assert side_of(outer, 100.0j) is Side.POSITIVE
    return inner, outer


def test_disjoint_difference_of_quadrants():
    inner, outer = away_pair_radius_2()
    u1a, u1b = sq_cone_generators(inner)
    u2a, u2b = sq_cone_generators(outer)
    rng = np.random.default_rng(23)
    for _ in range(50):
        a, b, c, d = rng.uniform(0.05, 4.0, size=4)
        diff = (a * u2a + b * u2b) - (c * u1a + d * u1b)
        assert mink_disjoint(inner, KillingField.zero(), outer, diff)


def test_disjoint_zero_translations():
    inner, outer = away_pair_radius_2()
    assert not mink_disjoint(inner, KillingField.zero(), outer, KillingField.zero())


def test_disjoint_crossing_lines():
    rng = np.random.default_rng(29)
    l1 = Line(-1.0, 1.0, True)
    l2 = Line(0.0, math.inf, True)
    for _ in range(20):
        assert not mink_disjoint(l1, KillingField.zero(), l2, random_field(rng))
    assert not mink_disjoint(l1, KillingField.zero(), l1.reversed(), random_field(rng))


def test_disjoint_ignores_orientation_flags():
    inner, outer = away_pair_radius_2()
    u1a, u1b = sq_cone_generators(inner)
    u2a, u2b = sq_cone_generators(outer)
    diff = (1.0 * u2a + 2.0 * u2b) - (0.7 * u1a + 1.5 * u1b)
    z = KillingField.zero()
    for li in (inner, inner.with_orientation(True)):
        for lo in (outer, outer.with_orientation(True)):
            assert mink_disjoint(li, z, lo, diff)
            assert not mink_disjoint(li, z, lo, -diff)


def test_right_side_negation_duality():
    rng = np.random.default_rng(31)
    hits = 0
    for _ in range(40):
        l1, l2 = random_separated_lines(rng)
        v1, v2 = random_field(rng, 1.5), random_field(rng, 1.5)
        left = mink_disjoint(l1, v1, l2, v2, side="left")
        right = mink_disjoint(l1, -v1, l2, -v2, side="right")
        assert left == right
        hits += left
    assert hits > 0


def test_verdicts_against_separation_and_witness():
    rng = np.random.default_rng(37)
    z = KillingField.zero()
    inner, outer = away_pair_radius_2()
    u1a, u1b = sq_cone_generators(inner)
    u2a, u2b = sq_cone_generators(outer)
    sep = (1.0 * u2a + 2.0 * u2b) - (0.7 * u1a + 1.5 * u1b)
    configs = [(inner, outer, sep)]
    for _ in range(10):
        l1, l2 = random_separated_lines(rng)
        configs.append((l1, l2, random_field(rng, rng.uniform(0.2, 3.0))))
    n_true = n_false = 0
    for l1, l2, v2 in configs:
        P1 = MinkPlane.left(z, l1)
        P2 = MinkPlane.left(v2, l2)
        verdict = mink_disjoint(l1, z, l2, v2)
        if verdict:
            n_true += 1
            sides = set()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                for X in sample_mink_crooked(P1, 150, seed=41):
                    sides.add(mink_halfspace_side(P2, X))
                for X in sample_mink_crooked(P2, 150, seed=43):
                    sides.add(mink_halfspace_side(P1, X))
            assert sides <= {Side.POSITIVE} or sides <= {Side.NEGATIVE}
        else:
            n_false += 1
            X = mink_common_point(P1, P2)
            assert X is not None
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                assert mink_crooked_contains(P1, X, 1e-6)
                assert mink_crooked_contains(P2, X, 1e-6)
    assert n_true >= 1 and n_false >= 1


def test_halfspace_side_partition():
    rng = np.random.default_rng(41)
    l1, _ = random_separated_lines(rng)
    v = random_field(rng, 1.0)
    P = MinkPlane.left(v, l1)
    flipped = MinkPlane.left(v, l1.with_orientation(not l1.positive_left))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for X in sample_mink_crooked(P, 60, seed=47):
            assert mink_halfspace_side(P, X) is Side.ON
    for _ in range(60):
        X = random_field(rng, rng.uniform(0.3, 5.0))
        s = mink_halfspace_side(P, X)
        if s is Side.ON:
            continue
        assert mink_halfspace_side(flipped, X) is (
            Side.NEGATIVE if s is Side.POSITIVE else Side.POSITIVE
        )
