"""Upper half-plane geometry and the isometry calculus everything else sits on.

Points of the hyperbolic plane are complex numbers with positive imaginary
part.  Orientation-preserving isometries are 2x2 real matrices of positive
determinant acting by fractional-linear maps, stored normalized to det = 1
and considered up to global sign.  Ideal boundary points are homogeneous
pairs, so infinity needs no special casing.
"""

import math
from enum import Enum, IntEnum

import numpy as np

from .errors import DomainError, GeometryError, LinesCross, NotSeparated

# |tr| within this of 2 counts as parabolic (and is flagged as band-decided)
PARABOLIC_BAND = 1e-9
# default tolerance for coincidence decisions (points on lines, equal endpoints)
COINCIDENCE_TOL = 1e-9
# two boundary points closer than this (as projective points) are degenerate
ENDPOINT_SEP = 1e-10


class IsomClass(Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class Side(IntEnum):
    POSITIVE = 1
    ON = 0
    NEGATIVE = -1


def _det_normalize(m):
    m = np.asarray(m, dtype=float).reshape(2, 2)
    # extended precision: products of large conjugated entries cancel
    # catastrophically in double (det 1 matrices with entries ~1e8)
    ml = m.astype(np.longdouble)
    d = float(ml[0, 0] * ml[1, 1] - ml[0, 1] * ml[1, 0])
    if not d > 0:
        raise GeometryError("isometry matrix needs positive determinant, got %r" % d)
    return m / math.sqrt(d)


class Isometry:
    """An orientation-preserving isometry of the upper half-plane.

    Parameters
    ----------
    m : array-like
        2x2 real matrix with positive determinant.  Stored with det = 1;
        the global sign is not meaningful.
    """

    __slots__ = ("m",)

    def __init__(self, m):
        self.m = _det_normalize(m)

    @classmethod
    def identity(cls):
        return cls(np.eye(2))

    def __mul__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        # extended precision, and no renormalization: the factors are det 1,
        # so the product is det 1 to working accuracy, whereas recomputing
        # the determinant of an ill-conditioned product can destroy it
        prod = self.m.astype(np.longdouble) @ other.m.astype(np.longdouble)
        out = object.__new__(Isometry)
        out.m = np.asarray(prod, dtype=float)
        return out

    def inv(self):
        a, b, c, d = self.m.ravel()
        out = object.__new__(Isometry)
        out.m = np.array([[d, -b], [-c, a]])
        return out

    def trace(self):
        """Trace of the sign representative with nonnegative trace."""
        return abs(self.m[0, 0] + self.m[1, 1])

    def almost_equal(self, other, tol=COINCIDENCE_TOL):
        return min(
            np.abs(self.m - other.m).max(), np.abs(self.m + other.m).max()
        ) <= tol

    def is_identity(self, tol=COINCIDENCE_TOL):
        return self.almost_equal(Isometry.identity(), tol)

    def __call__(self, p):
        """Apply to a PlanePoint (complex), BoundaryPoint, or Line."""
        if isinstance(p, BoundaryPoint):
            return BoundaryPoint(self.m @ p.v)
        if isinstance(p, Line):
            return Line(self(p.a), self(p.b), p.positive_left)
        return mobius_apply(self, p)

    def __repr__(self):
        return "Isometry(%s)" % np.array2string(self.m, precision=6)


class BoundaryPoint:
    """Ideal boundary point, stored as a unit homogeneous pair up to sign."""

    __slots__ = ("v",)

    def __init__(self, v):
        v = np.asarray(v, dtype=float).reshape(2)
        n = math.hypot(v[0], v[1])
        if n == 0.0:
            raise GeometryError("zero vector is not a boundary point")
        v = v / n
        # canonical sign: second component positive, else first
        if v[1] < 0 or (v[1] == 0 and v[0] < 0):
            v = -v
        self.v = v

    @classmethod
    def from_value(cls, x):
        """Build from a real number, or from inf for the point at infinity."""
        if x == math.inf or x == -math.inf:
            return cls((1.0, 0.0))
        return cls((float(x), 1.0))

    def value(self):
        """Real coordinate, inf for the point at infinity."""
        if abs(self.v[1]) < 1e-14:
            return math.inf
        return self.v[0] / self.v[1]

    def same_as(self, other, tol=COINCIDENCE_TOL):
        # |cross| of unit vectors = |sin| of the projective angle
        return abs(self.v[0] * other.v[1] - self.v[1] * other.v[0]) <= tol

    def __repr__(self):
        return "BoundaryPoint(%.6g)" % self.value()


class Line:
    """Geodesic through two distinct ideal endpoints a, b.

    ``positive_left`` encodes the transverse orientation: True means the
    positive side lies to the left of the ray a -> b, False to the right,
    None means unoriented.  As a point set the line does not depend on the
    endpoint order.
    """

    __slots__ = ("a", "b", "positive_left")

    def __init__(self, a, b, positive_left=None):
        if not isinstance(a, BoundaryPoint):
            a = BoundaryPoint.from_value(a)
        if not isinstance(b, BoundaryPoint):
            b = BoundaryPoint.from_value(b)
        if a.same_as(b, ENDPOINT_SEP):
            raise GeometryError("line endpoints coincide")
        self.a = a
        self.b = b
        self.positive_left = positive_left

    @property
    def oriented(self):
        return self.positive_left is not None

    def with_orientation(self, positive_left):
        return Line(self.a, self.b, positive_left)

    def unoriented(self):
        return Line(self.a, self.b, None)

    def reversed(self):
        """Swap the ray direction, keeping the positive side fixed in space."""
        if self.positive_left is None:
            return Line(self.b, self.a, None)
        return Line(self.b, self.a, not self.positive_left)

    def same_geodesic(self, other, tol=COINCIDENCE_TOL):
        return (self.a.same_as(other.a, tol) and self.b.same_as(other.b, tol)) or (
            self.a.same_as(other.b, tol) and self.b.same_as(other.a, tol)
        )

    def has_endpoint(self, xi, tol=COINCIDENCE_TOL):
        return xi.same_as(self.a, tol) or xi.same_as(self.b, tol)

    def __repr__(self):
        o = {True: ", +left", False: ", +right", None: ""}[self.positive_left]
        return "Line(%.6g, %.6g%s)" % (self.a.value(), self.b.value(), o)


def mobius_apply(g, p):
    """Fractional-linear action of g on an interior point (complex, Im > 0)."""
    a, b, c, d = g.m.ravel()
    z = complex(p)
    return (a * z + b) / (c * z + d)


def dist(x, y):
    """Hyperbolic distance, cosh d = 1 + |x-y|^2 / (2 Im x Im y)."""
    x = complex(x)
    y = complex(y)
    arg = 1.0 + (abs(x - y) ** 2) / (2.0 * x.imag * y.imag)
    return math.acosh(max(arg, 1.0))


class Classification:
    """Result of classify(): kind plus the relevant fixed-point data.

    Fields not meaningful for the kind are None.  ``in_band`` is True when
    the parabolic verdict came from the |tr| tolerance band rather than an
    exact trace.
    """

    __slots__ = ("kind", "fixed", "boundary_fixed", "attracting", "repelling",
                 "angle", "length", "in_band")

    def __init__(self, kind, fixed=None, boundary_fixed=None, attracting=None,
                 repelling=None, angle=None, length=None, in_band=False):
        self.kind = kind
        self.fixed = fixed
        self.boundary_fixed = boundary_fixed
        self.attracting = attracting
        self.repelling = repelling
        self.angle = angle
        self.length = length
        self.in_band = in_band

    def __repr__(self):
        return "Classification(%s)" % self.kind.value


def _eigvec(m, lam):
    # larger of the two algebraic kernel candidates of (m - lam I)
    v1 = np.array([m[0, 1], lam - m[0, 0]])
    v2 = np.array([lam - m[1, 1], m[1, 0]])
    return v1 if np.abs(v1).max() >= np.abs(v2).max() else v2


def classify(g, band=PARABOLIC_BAND):
    """Trichotomy of a nontrivial isometry, with fixed-point data.

    Returns a Classification: IDENTITY; ELLIPTIC with interior fixed point
    and rotation angle in (0, 2pi) (counterclockwise, from the derivative
    at the fixed point); PARABOLIC with its ideal fixed point; HYPERBOLIC
    with attracting and repelling ideal points and translation length.
    """
    m = g.m if (g.m[0, 0] + g.m[1, 1]) >= 0 else -g.m
    tr = m[0, 0] + m[1, 1]
    if abs(tr - 2.0) <= band:
        if np.abs(m - np.eye(2)).max() <= 10 * band:
            return Classification(IsomClass.IDENTITY)
        a, b, c, d = m.ravel()
        v = np.array([a - d, 2.0 * c])
        if np.abs(v).max() < 1e-13:
            v = np.array([2.0 * b, d - a])
        return Classification(IsomClass.PARABOLIC,
                              boundary_fixed=BoundaryPoint(v), in_band=True)
    if tr < 2.0:
        a, b, c, d = m.ravel()
        # fixed points solve c z^2 + (d - a) z - b = 0; elliptic forces c != 0
        s = 1.0 if c > 0 else -1.0
        z0 = complex((a - d) / (2.0 * c), s * math.sqrt(4.0 - tr * tr) / (2.0 * c))
        theta = (-2.0 * np.angle(c * z0 + d)) % (2.0 * math.pi)
        return Classification(IsomClass.ELLIPTIC, fixed=z0, angle=theta)
    disc = math.sqrt(tr * tr - 4.0)
    lam_attr = (tr + disc) / 2.0
    lam_rep = (tr - disc) / 2.0
    return Classification(
        IsomClass.HYPERBOLIC,
        attracting=BoundaryPoint(_eigvec(m, lam_attr)),
        repelling=BoundaryPoint(_eigvec(m, lam_rep)),
        length=2.0 * math.acosh(tr / 2.0),
    )


def translation_length(g, band=PARABOLIC_BAND):
    """2 arccosh(|tr|/2) for hyperbolic g, 0 for everything else."""
    tr = g.trace()
    if tr <= 2.0 + band:
        return 0.0
    return 2.0 * math.acosh(tr / 2.0)


def _cross(u, w):
    return u[0] * w[1] - u[1] * w[0]


def F_ext(g, gp, xi, xip, tol=COINCIDENCE_TOL):
    """Extended endpoint functional F_{g,g'}(xi, xi').

    The finite value log[ det(gX, g'X')^2 / det(X, X')^2 ] compares how far
    apart g and g' move small horoballs at xi and xi'; it is +inf when
    xi = xi' with distinct images, -inf when the images agree with xi != xi',
    and undefined (DomainError) when both coincidences hold at once.
    """
    xi, xip = as_boundary(xi), as_boundary(xip)
    X = xi.v
    Xp = xip.v
    gX = g.m @ X
    gXp = gp.m @ Xp
    src_met = xi.same_as(xip, tol)
    img_met = BoundaryPoint(gX).same_as(BoundaryPoint(gXp), tol)
    if src_met and img_met:
        raise DomainError("xi = xi' and g xi = g' xi': outside the domain")
    if src_met:
        return math.inf
    if img_met:
        return -math.inf
    return 2.0 * (math.log(abs(_cross(gX, gXp))) - math.log(abs(_cross(X, Xp))))


def as_boundary(x):
    """Coerce a value or BoundaryPoint to a BoundaryPoint."""
    return x if isinstance(x, BoundaryPoint) else BoundaryPoint.from_value(x)


def to_zero_inf(a, b):
    """Isometry sending boundary point a to 0 and b to infinity."""
    a, b = as_boundary(a), as_boundary(b)
    m = np.array([[a.v[1], -a.v[0]], [-b.v[1], b.v[0]]])
    d = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(d) < ENDPOINT_SEP:
        raise GeometryError("boundary points coincide")
    if d < 0:
        m[0] = -m[0]
    return Isometry(m)


def reflection_matrix(line):
    """Matrix A with z -> A . conj(z) the reflection across the line.

    A has negative determinant; products of two of these are honest
    isometry matrices.
    """
    a1, a2 = line.a.v
    b1, b2 = line.b.v
    s = a1 * b2 + a2 * b1
    return np.array([[s, -2.0 * a1 * b1], [2.0 * a2 * b2, -s]])


def perpendicular_product(l, lp):
    """Composition of the reflections across l and lp (an isometry)."""
    m = reflection_matrix(l) @ reflection_matrix(lp)
    return Isometry(m)


def normalize_pair(l, lp):
    """Send a separated pair of lines to standard concentric position.

    Returns (k, R) with R > 1: k maps l to the geodesic with endpoints
    -1/R, 1/R and lp to the one with endpoints R, -R, the common
    perpendicular going to the imaginary axis.  R = exp(d(l, lp)/2).

    Raises NotSeparated when the closures of l and lp meet.
    """
    perp = perpendicular_product(l, lp)
    cls = classify(perp)
    if cls.kind != IsomClass.HYPERBOLIC:
        raise NotSeparated("line closures meet (reflection product is %s)"
                           % cls.kind.value)
    # the product contracts toward the perpendicular's end beyond l
    k0 = to_zero_inf(cls.attracting, cls.repelling)
    vals = [k0(p).value() for p in (l.a, l.b, lp.a, lp.b)]
    if any(not math.isfinite(v) or v == 0.0 for v in vals):
        raise NotSeparated("degenerate image under perpendicular frame")
    pa, pb, qa, qb = vals
    if pa * pb >= 0 or qa * qb >= 0:
        raise NotSeparated("images not symmetric around the axis")
    r_in = math.sqrt(-pa * pb)
    r_out = math.sqrt(-qa * qb)
    if r_in > r_out:
        # attracting end sits beyond l, so l must be the inner circle
        raise NotSeparated("perpendicular orientation inconsistent")
    s = (r_in * r_out) ** -0.25
    k = Isometry(np.diag([s, 1.0 / s])) * k0
    R = math.sqrt(r_out / r_in)
    if not R > 1.0:
        raise NotSeparated("lines coincide")
    return k, R


def side_of(line, p, tol=COINCIDENCE_TOL):
    """Signed side of a point relative to an oriented line.

    For interior points, On means hyperbolic distance to the line at most
    tol.  For boundary points, On means coincidence with an endpoint.
    """
    if not line.oriented:
        raise GeometryError("side_of needs an oriented line")
    k = to_zero_inf(line.a, line.b)
    if isinstance(p, BoundaryPoint):
        if p.same_as(line.a, tol) or p.same_as(line.b, tol):
            return Side.ON
        w = k.m @ p.v
        left = w[0] * w[1] < 0  # image value negative = left of the upward axis
    else:
        w = mobius_apply(k, p)
        if abs(w.real) <= math.sinh(tol) * w.imag:
            return Side.ON
        left = w.real < 0
    if left == line.positive_left:
        return Side.POSITIVE
    return Side.NEGATIVE


def dist_to_line(line, p):
    """Hyperbolic distance from an interior point to a complete geodesic."""
    w = mobius_apply(to_zero_inf(line.a, line.b), p)
    return math.asinh(abs(w.real) / w.imag)


def oriented_away(l, lp, tol=COINCIDENCE_TOL):
    """True iff the open positive half-planes of l and lp are disjoint.

    Both lines must be oriented and disjoint in the plane; crossing (or
    equal) lines raise LinesCross.  Ideal tangencies are tolerated: a
    shared endpoint sits on both lines and does not decide a side.
    """
    if not (l.oriented and lp.oriented):
        raise GeometryError("oriented_away needs oriented lines")
    if l.same_geodesic(lp, tol):
        raise LinesCross("lines coincide")
    s_here = [side_of(l, lp.a, tol), side_of(l, lp.b, tol)]
    s_there = [side_of(lp, l.a, tol), side_of(lp, l.b, tol)]
    for pair in (s_here, s_there):
        if Side.POSITIVE in pair and Side.NEGATIVE in pair:
            raise LinesCross("lines cross")
    strict = [s for s in s_here + s_there if s != Side.ON]
    if not strict:
        raise LinesCross("lines coincide within tolerance")
    return all(s == Side.NEGATIVE for s in strict)


def orient_toward(line, p):
    """Copy of the line oriented so that p lies on the positive side.

    p may be a BoundaryPoint, an interior complex point, or a real number
    (read as a boundary value).
    """
    if not isinstance(p, (BoundaryPoint, complex)):
        p = BoundaryPoint.from_value(p)
    cand = line.with_orientation(True)
    s = side_of(cand, p)
    if s == Side.ON:
        raise GeometryError("cannot orient toward a point on the line")
    return cand if s == Side.POSITIVE else line.with_orientation(False)


def point_on_line(line, s):
    """Interior point of the line at arclength s, increasing toward b."""
    k = to_zero_inf(line.a, line.b)
    return mobius_apply(k.inv(), complex(0.0, math.exp(s)))


def translation_along(line, t):
    """Hyperbolic translation by t along the line, from a toward b."""
    k = to_zero_inf(line.a, line.b)
    d = Isometry(np.diag([math.exp(t / 2.0), math.exp(-t / 2.0)]))
    return k.inv() * d * k


def nilpotent_generator(xi):
    """Traceless square-zero matrix with kernel the (unit) direction of xi.

    The two parabolic one-parameter subgroups fixing xi are exp(t N) with
    N = +/- this matrix; exp(t N) = I + t N exactly.
    """
    p, q = as_boundary(xi).v
    return np.array([[p * q, -p * p], [q * q, -p * q]])


def parabolic_at(xi, t):
    """Parabolic isometry exp(t N) fixing xi (N = nilpotent_generator)."""
    return Isometry(np.eye(2) + t * nilpotent_generator(xi))


def rotation_about(p, theta):
    """Rotation by angle theta (counterclockwise) about the interior point p."""
    z = complex(p)
    y = z.imag
    ky = math.sqrt(y)
    k = np.array([[ky, z.real / ky], [0.0, 1.0 / ky]])
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    rot = np.array([[c, s], [-s, c]])
    return Isometry(k @ rot @ np.array([[1.0 / ky, -z.real / ky], [0.0, ky]]))


def hyperbolic_with_axis(rep, attr, length):
    """Hyperbolic isometry with the given repelling/attracting points."""
    k = to_zero_inf(rep, attr)
    d = Isometry(np.diag([math.exp(length / 2.0), math.exp(-length / 2.0)]))
    return k.inv() * d * k
