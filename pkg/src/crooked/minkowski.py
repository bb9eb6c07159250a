"""Crooked planes in the Lie algebra: infinitesimal isometries of the
hyperbolic plane, identified with flat (2+1)-dimensional space.

A traceless 2x2 matrix is a tangent vector to the isometry group at the
identity, i.e. a vector field on the hyperbolic plane.  The quadratic
form z1^2 + z2^2 - z3^2 of the coordinate chart equals minus the
determinant, so the field type (elliptic / parabolic / hyperbolic) is
the sign of the form: timelike fields rotate, lightlike fields are
parabolic, spacelike fields translate.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .hyperbolic import (
    BoundaryPoint,
    Isometry,
    Line,
    Side,
    dist_to_line,
    nilpotent_generator,
    point_on_line,
    reflection_matrix,
    side_of,
)

TRACE_TOL = 1e-12
DET_BAND = 1e-12
ON_LINE_TOL = 1e-9
CONE_SLACK = 1e-10
_NEAR_FACTOR = 32.0


class FieldKind(enum.Enum):
    ZERO = "zero"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class KillingField:
    """Traceless 2x2 matrix; equivalently a point of flat (2+1)-space.

    Parameters
    ----------
    m : array-like
        2x2 real matrix with trace zero (within 1e-12 of the entry scale).
    """

    __slots__ = ("m",)

    def __init__(self, m):
        m = np.asarray(m, dtype=float).reshape(2, 2)
        scale = max(1.0, np.abs(m).max())
        if abs(m[0, 0] + m[1, 1]) > TRACE_TOL * scale:
            raise GeometryError("Killing field matrix must be traceless")
        self.m = m

    @classmethod
    def zero(cls):
        return cls(np.zeros((2, 2)))

    @classmethod
    def from_chart(cls, z1, z2, z3):
        return cls(np.array([[z1, z2 - z3], [z2 + z3, -z1]]))

    def chart(self):
        """Coordinates (z1, z2, z3) with z1^2 + z2^2 - z3^2 = -det."""
        m = self.m
        return np.array(
            [m[0, 0], (m[0, 1] + m[1, 0]) / 2.0, (m[1, 0] - m[0, 1]) / 2.0]
        )

    def q(self):
        z1, z2, z3 = self.chart()
        return z1 * z1 + z2 * z2 - z3 * z3

    def norm(self):
        return float(np.sqrt((self.m * self.m).sum()))

    def is_zero(self, tol=TRACE_TOL):
        return np.abs(self.m).max() <= tol

    def __add__(self, other):
        return KillingField(self.m + other.m)

    def __sub__(self, other):
        return KillingField(self.m - other.m)

    def __mul__(self, s):
        return KillingField(self.m * float(s))

    __rmul__ = __mul__

    def __neg__(self):
        return KillingField(-self.m)

    def __repr__(self):
        return "KillingField(%s)" % np.array2string(self.m, precision=6)


@dataclass(frozen=True)
class FieldClassification:
    kind: FieldKind
    fixed: complex | None = None
    boundary_fixed: BoundaryPoint | None = None
    attracting: BoundaryPoint | None = None
    repelling: BoundaryPoint | None = None


def killing_classify(X, tol=TRACE_TOL):
    """Field trichotomy by the sign of the determinant."""
    m = X.m
    scale = np.abs(m).max()
    if scale <= tol:
        return FieldClassification(FieldKind.ZERO)
    d = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    # the determinant of a float matrix is only good to ~eps * scale^2,
    # so the lightlike band is relative to the squared entry scale
    if abs(d) <= DET_BAND * scale * scale:
        # kernel direction: the fixed ideal point of the parabolic flow
        a, b, c = m[0, 0], m[0, 1], m[1, 0]
        if abs(c) >= abs(b):
            v = np.array([-m[1, 1], c])
        else:
            v = np.array([b, -a])
        return FieldClassification(
            FieldKind.PARABOLIC, boundary_fixed=BoundaryPoint(v)
        )
    if d > 0.0:
        # zero of the vector field beta + 2 alpha z - gamma z^2 in the
        # upper half-plane
        alpha, gamma = m[0, 0], m[1, 0]
        root = math.sqrt(d)
        if gamma > 0:
            z = complex(alpha / gamma, root / gamma)
        else:
            z = complex(alpha / gamma, -root / gamma)
        return FieldClassification(FieldKind.ELLIPTIC, fixed=z)
    lam = math.sqrt(-d)
    attr = _eigendirection(m, lam)
    rep = _eigendirection(m, -lam)
    return FieldClassification(
        FieldKind.HYPERBOLIC,
        attracting=BoundaryPoint(attr),
        repelling=BoundaryPoint(rep),
    )


def _eigendirection(m, lam):
    a, b = m[0, 0] - lam, m[0, 1]
    c, d = m[1, 0], m[1, 1] - lam
    # pick the better-conditioned row of (m - lam I)
    if math.hypot(a, b) >= math.hypot(c, d):
        return np.array([-b, a])
    return np.array([-d, c])


@dataclass(frozen=True)
class MinkPlane:
    """Translated crooked plane in the Lie algebra: v + fields over line."""

    side: str
    v: KillingField
    line: Line

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise GeometryError("side must be 'left' or 'right'")

    @classmethod
    def left(cls, v, line):
        return cls("left", v, line)

    @classmethod
    def right(cls, v, line):
        return cls("right", v, line)


def mink_crooked_contains(plane, X, tol=ON_LINE_TOL):
    """Membership of X in the translated plane, by field classification."""
    c = killing_classify(X - plane.v)
    if c.kind is FieldKind.ZERO:
        return True
    if c.kind is FieldKind.ELLIPTIC:
        d = dist_to_line(plane.line, c.fixed)
        if d <= tol:
            return True
        fp = c.fixed
        near = max(_NEAR_FACTOR * tol, (1.0 + abs(fp.real)) * 5e-14 / fp.imag)
        if d <= near:
            warnings.warn(
                "field zero within the numerically ambiguous band of the "
                "line; flagged and counted as on it",
                stacklevel=2,
            )
            return True
        return False
    if c.kind is FieldKind.PARABOLIC:
        return plane.line.has_endpoint(c.boundary_fixed)
    fp = c.attracting if plane.side == "left" else c.repelling
    return plane.line.has_endpoint(fp)


def nilpotent_field(p):
    """Parabolic field fixing the boundary point p (unit Frobenius norm)."""
    return KillingField(nilpotent_generator(p))


def sq_cone_generators(line):
    """The two boundary rays of the translation cone of an oriented line.

    Returns (u_a, u_b), parabolic fields at the two endpoints signed so
    that every positive combination is a hyperbolic field whose axis is
    perpendicular to the line and whose attracting point lies strictly
    on the positive side.
    """
    if not line.oriented:
        raise GeometryError("stem quadrant needs an oriented line")
    na, nb = nilpotent_field(line.a), nilpotent_field(line.b)
    for sa, sb in ((1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)):
        u = KillingField(sa * na.m + sb * nb.m)
        c = killing_classify(u)
        if c.kind is not FieldKind.HYPERBOLIC:
            continue
        if side_of(line, c.attracting) is Side.POSITIVE:
            return KillingField(sa * na.m), KillingField(sb * nb.m)
    raise GeometryError("cone generator signs not found")


def mink_stem_quadrant_contains(line, X, tol=ON_LINE_TOL):
    """Open-cone membership, cross-checked against the axis description."""
    ua, ub = sq_cone_generators(line)
    cols = np.stack([ua.chart(), ub.chart()], axis=1)
    rhs = X.chart()
    coef, res, rank, _ = np.linalg.lstsq(cols, rhs, rcond=None)
    scale = max(1.0, float(np.abs(rhs).max()))
    residual = float(np.abs(cols @ coef - rhs).max())
    in_cone = residual <= tol * scale and coef.min() > CONE_SLACK * scale

    c = killing_classify(X)
    by_axis = False
    if c.kind is FieldKind.HYPERBOLIC:
        ref = reflection_matrix(line)
        mirrored = BoundaryPoint(ref @ c.attracting.v)
        perp = mirrored.same_as(c.repelling, 1e-7)
        by_axis = perp and side_of(line, c.attracting) is Side.POSITIVE
    if by_axis != in_cone:
        warnings.warn(
            "cone test and axis test disagree near the cone boundary",
            stacklevel=2,
        )
    return in_cone


def mink_halfspace_side(plane, X, tol=ON_LINE_TOL):
    """Which complementary component of the translated plane holds X.

    The plane is properly embedded and separates the Lie algebra; the
    component is read off the relevant fixed object of X - v, exactly as
    for the group-level half-spaces.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if mink_crooked_contains(plane, X, tol):
            return Side.ON
    c = killing_classify(X - plane.v)
    if c.kind is FieldKind.ELLIPTIC:
        s = side_of(plane.line, c.fixed)
    elif c.kind is FieldKind.PARABOLIC:
        s = side_of(plane.line, c.boundary_fixed)
    else:
        fp = c.attracting if plane.side == "left" else c.repelling
        s = side_of(plane.line, fp)
    return s


def _away_lines(l, lp):
    """Reorient so each positive side avoids the other line.

    Returns None when that is impossible: crossing geodesics, a shared
    ideal endpoint, or equal geodesics.  Input orientations are ignored
    (the planes do not depend on them).
    """
    if l.same_geodesic(lp):
        return None
    out = []
    for me, other in ((l, lp), (lp, l)):
        ref = me.with_orientation(True)
        sides = {side_of(ref, other.a), side_of(ref, other.b)}
        if Side.ON in sides or len(sides) > 1:
            return None
        out.append(ref if sides == {Side.NEGATIVE} else me.with_orientation(False))
    return out[0], out[1]


def mink_disjoint(line, v, line_p, v_p, side="left"):
    """Exact disjointness of two translated crooked planes.

    True iff the lines are disjoint (closures included) and the
    translation difference lies in the open difference cone of the two
    translation cones, taken for the mutually-avoiding orientations.
    The right variant swaps the cone roles (fields negate when the side
    does).  Orientation flags on the input lines are ignored.
    """
    if side not in ("left", "right"):
        raise GeometryError("side must be 'left' or 'right'")
    pair = _away_lines(line, line_p)
    if pair is None:
        return False
    la, lpa = pair
    ua, ub = sq_cone_generators(la)
    upa, upb = sq_cone_generators(lpa)
    if side == "left":
        cols = [upa, upb, -1.0 * ua, -1.0 * ub]
    else:
        cols = [ua, ub, -1.0 * upa, -1.0 * upb]
    M = np.stack([u.chart() for u in cols], axis=1)
    rhs = (v_p - v).chart()
    scale = max(1.0, float(np.abs(rhs).max()))
    x0, _, rank, _ = np.linalg.lstsq(M, rhs, rcond=None)
    if rank < 3 or np.abs(M @ x0 - rhs).max() > 1e-9 * scale:
        return False
    _, _, vt = np.linalg.svd(M)
    n = vt[-1]
    # positivity of x0 + t n on all four coefficients: interval intersection
    slack = CONE_SLACK * scale
    lo, hi = -math.inf, math.inf
    for xi, ni in zip(x0, n):
        if abs(ni) <= 1e-14:
            if xi <= slack:
                return False
            continue
        bound = (slack - xi) / ni
        if ni > 0:
            lo = max(lo, bound)
        else:
            hi = min(hi, bound)
    return lo < hi


def exp_killing(X):
    """Exponential of the field, as an isometry with unit determinant."""
    m = X.m
    d = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    scale = np.abs(m).max()
    if scale <= TRACE_TOL:
        return Isometry.identity()
    if abs(d) <= DET_BAND * scale * scale:
        return Isometry(np.eye(2) + m)
    if d > 0.0:
        w = math.sqrt(d)
        return Isometry(math.cos(w) * np.eye(2) + (math.sin(w) / w) * m)
    lam = math.sqrt(-d)
    return Isometry(math.cosh(lam) * np.eye(2) + (math.sinh(lam) / lam) * m)


def elliptic_field_at(p, angle=1.0):
    """Rotation field vanishing at the interior point p.

    Normalized so that exp of the field is the rotation about p by angle.
    """
    x, y = p.real, p.imag
    if y <= 0:
        raise GeometryError("interior point needed")
    # Ad(k) of the generator at i, k the affine map taking i to p
    return KillingField(
        (angle / (2.0 * y)) * np.array([[-x, x * x + y * y], [-1.0, x]])
    )


def hyperbolic_field(rep, attr, speed=1.0):
    """Translation field with the given repelling/attracting endpoints."""
    if not isinstance(attr, BoundaryPoint):
        attr = BoundaryPoint.from_value(attr)
    if not isinstance(rep, BoundaryPoint):
        rep = BoundaryPoint.from_value(rep)
    A = np.column_stack([attr.v, rep.v])
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    if abs(det) < 1e-14:
        raise GeometryError("axis endpoints coincide")
    D = np.diag([speed / 2.0, -speed / 2.0])
    return KillingField(A @ D @ np.linalg.inv(A))


def _stem_point(plane, s, theta):
    return plane.v + elliptic_field_at(point_on_line(plane.line, s), theta)


def _wing_point(plane, which, phi, lam):
    e = plane.line.a if which == 0 else plane.line.b
    o = BoundaryPoint(np.array([math.sin(phi), math.cos(phi)]))
    if o.same_as(e, 1e-9):
        return None
    if plane.side == "left":
        return plane.v + hyperbolic_field(o, e, lam)
    return plane.v + hyperbolic_field(e, o, lam)


def _bisect_to_plane(f, a, b, other, tol):
    sa = mink_halfspace_side(other, f(a))
    for _ in range(80):
        m = 0.5 * (a + b)
        X = f(m)
        if X is None:
            return None
        sm = mink_halfspace_side(other, X)
        if sm is Side.ON:
            return X
        if sm == sa:
            a = m
        else:
            b = m
    X = f(0.5 * (a + b))
    if X is not None and mink_crooked_contains(other, X, tol):
        return X
    return None


def _segment_hit(p1, p2, stratum, par_a, par_b, tol):
    if stratum == "stem":
        def f(u):
            s = (1 - u) * par_a[0] + u * par_b[0]
            t = (1 - u) * par_a[1] + u * par_b[1]
            return _stem_point(p1, s, t)
    else:
        which = stratum
        dphi = par_b[0] - par_a[0]
        dphi = (dphi + math.pi / 2) % math.pi - math.pi / 2  # shorter arc
        def f(u):
            phi = par_a[0] + u * dphi
            lam = (1 - u) * par_a[1] + u * par_b[1]
            return _wing_point(p1, which, phi, lam)
    return _bisect_to_plane(f, 0.0, 1.0, p2, tol)


def _search_from(p1, p2, reach, trials, tol, rng):
    arc = 20.0  # field entries grow like exp(arclength); reach goes to speeds
    buckets = {"stem": [], 0: [], 1: []}
    for _ in range(trials):
        pars = (rng.uniform(-arc, arc), rng.uniform(-reach, reach))
        X = _stem_point(p1, *pars)
        buckets["stem"].append((pars, mink_halfspace_side(p2, X), X))
    for which in (0, 1):
        for _ in range(trials // 2):
            pars = (rng.uniform(0.0, math.pi),
                    rng.uniform(1e-4, reach) * rng.choice((1.0, 1.0, 0.01)))
            X = _wing_point(p1, which, *pars)
            if X is not None:
                buckets[which].append((pars, mink_halfspace_side(p2, X), X))
    for stratum, rows in buckets.items():
        for pars, s, X in rows:
            if s is Side.ON and mink_crooked_contains(p2, X, tol):
                return X
        pos = [r for r in rows if r[1] is Side.POSITIVE]
        neg = [r for r in rows if r[1] is Side.NEGATIVE]
        if not pos or not neg:
            continue
        for _ in range(12):
            pa = pos[rng.integers(len(pos))][0]
            pb = neg[rng.integers(len(neg))][0]
            hit = _segment_hit(p1, p2, stratum, pa, pb, tol)
            if hit is not None:
                return hit
    return None


def mink_common_point(p1, p2, span=20.0, trials=400, tol=1e-7, seed=0):
    """A field on both translated planes, or None if the search finds none.

    Draws parameters in each stratum of one plane and watches the side
    function of the other; an opposite-side pair inside one stratum
    brackets a crossing along the parameter segment, which bisection
    then pins onto the plane.  Pairs rejected by mink_disjoint with
    disjoint lines really cross, but possibly far out, so the reach is
    enlarged (and the roles swapped) until a bracket appears.
    """
    if mink_crooked_contains(p2, p1.v, tol):
        return p1.v
    if mink_crooked_contains(p1, p2.v, tol):
        return p2.v
    rng = np.random.default_rng(seed)
    for stage, reach in enumerate((span, 8.0 * span, 64.0 * span)):
        n = trials * (1 + stage)
        hit = _search_from(p1, p2, reach, n, tol, rng)
        if hit is None:
            hit = _search_from(p2, p1, reach, n, tol, rng)
        if hit is not None:
            return hit
    return None


def sample_mink_crooked(plane, n, seed=0, span=20.0):
    """Stratified members of the translated plane: 40/20/40 over
    stem / boundary rays / wings, all within |parameter| <= span."""
    rng = np.random.default_rng(seed)
    out = []
    n_stem = int(0.4 * n)
    n_par = int(0.2 * n)
    line = plane.line
    for _ in range(n_stem):
        p = point_on_line(line, rng.uniform(-span, span))
        theta = rng.uniform(-span, span)
        out.append(plane.v + elliptic_field_at(p, theta))
    endpoints = [line.a, line.b]
    for i in range(n_par):
        p = endpoints[i % 2]
        t = rng.uniform(-span, span)
        out.append(plane.v + t * nilpotent_field(p))
    while len(out) < n:
        fp = endpoints[len(out) % 2]
        other = rng.normal(0.0, 3.0)
        op = BoundaryPoint.from_value(other)
        if op.same_as(fp):
            continue
        speed = rng.uniform(1e-3, span)
        if plane.side == "left":
            X = hyperbolic_field(other, fp, speed)
        else:
            X = hyperbolic_field(fp, other, speed)
        out.append(plane.v + X)
    return out
