"""Independent oracles the tests check the library against.

Nothing in here may call the formula it is checking: distances come from
numeric integration of the length element, the endpoint functional from its
definition as a limit along rays, derivatives from central differences.
"""

import math

import numpy as np
from scipy.integrate import quad

from crooked.hyperbolic import (
    BoundaryPoint,
    Isometry,
    Line,
    dist,
    hyperbolic_with_axis,
    point_on_line,
    to_zero_inf,
)


def dist_by_integration(x, y):
    """Hyperbolic distance by integrating |dz| / Im z along the geodesic."""
    x = complex(x)
    y = complex(y)
    if abs(x.real - y.real) < 1e-12 * (1 + abs(x) + abs(y)):
        lo, hi = sorted((x.imag, y.imag))
        val, _ = quad(lambda t: 1.0 / t, lo, hi, epsabs=1e-12, epsrel=1e-12)
        return val
    # circle orthogonal to the real axis through x and y
    m = (abs(y) ** 2 - abs(x) ** 2) / (2.0 * (y.real - x.real))
    r = abs(x - m)
    t0 = math.atan2(x.imag, x.real - m)
    t1 = math.atan2(y.imag, y.real - m)
    lo, hi = sorted((t0, t1))
    val, _ = quad(lambda t: 1.0 / math.sin(t), lo, hi, epsabs=1e-12, epsrel=1e-12)
    return val


def f_by_limit(g, gp, xi, xip, s=20.0):
    """Endpoint functional as d(g x_s, g' x'_s) - d(x_s, x'_s) along rays.

    x_s runs toward xi and x'_s toward xi' on the geodesic joining them,
    both at arclength s from a common base point, so d(x_s, x'_s) = 2s.
    Uses the closed-form distance: at s around 20 the image points sit at
    heights near exp(+-2s) where the quadrature oracle falls apart, and
    dist itself is validated against that oracle at moderate range.
    """
    line = Line(xip, xi)
    xs = point_on_line(line, s)
    xps = point_on_line(line, -s)
    return dist(g(xs), gp(xps)) - 2.0 * s


def central_difference(f, t0=0.0, h=1e-5):
    """Symmetric difference quotient of a scalar function."""
    return (f(t0 + h) - f(t0 - h)) / (2.0 * h)


def random_isometry(rng, spread=1.0):
    """Random isometry via rotation * diagonal * shear coordinates."""
    theta = rng.uniform(0.0, 2.0 * math.pi)
    t = rng.normal(0.0, spread)
    s = rng.normal(0.0, spread)
    rot = np.array([[math.cos(theta), -math.sin(theta)],
                    [math.sin(theta), math.cos(theta)]])
    diag = np.diag([math.exp(t / 2.0), math.exp(-t / 2.0)])
    shear = np.array([[1.0, s], [0.0, 1.0]])
    return Isometry(rot @ diag @ shear)


def random_point(rng, spread=1.0):
    return complex(rng.normal(0.0, spread), math.exp(rng.normal(0.0, spread)))


def random_boundary(rng):
    theta = rng.uniform(0.0, math.pi)
    return BoundaryPoint((math.cos(theta), math.sin(theta)))


def boundary_from_angle(theta):
    """Boundary point -cot(theta/2): disk angle theta pulled to the line."""
    if abs(math.sin(theta / 2.0)) < 1e-15:
        return BoundaryPoint((1.0, 0.0))
    return BoundaryPoint.from_value(-1.0 / math.tan(theta / 2.0))


def random_sq_member(rng, line, min_len=1e-2, len_spread=3.0, rho_spread=1.0):
    """Hyperbolic from the stem quadrant of an oriented line, built from
    the geometric description: axis perpendicular to the line, translating
    toward its positive side."""
    k = to_zero_inf(line.a, line.b)
    rho = math.exp(rng.normal(0.0, rho_spread))
    sgn = -1.0 if line.positive_left else 1.0
    attr = k.inv()(BoundaryPoint.from_value(sgn * rho))
    rep = k.inv()(BoundaryPoint.from_value(-sgn * rho))
    return hyperbolic_with_axis(rep, attr, min_len + abs(rng.normal(0.0, len_spread)))


def random_separated_lines(rng, min_gap=0.15):
    """Pair of geodesics whose four ideal points sit in disjoint arcs.

    Endpoints of the first line are drawn from one arc of the circle and
    endpoints of the second from the complementary arc, with a gap so the
    closures are separated.
    """
    while True:
        cuts = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=4))
        gaps = np.diff(np.concatenate([cuts, [cuts[0] + 2.0 * math.pi]]))
        if gaps.min() > min_gap:
            break
    a, b, c, d = (boundary_from_angle(t) for t in cuts)
    flip = bool(rng.integers(2))
    return Line(a, b, positive_left=flip), Line(c, d, positive_left=not flip)
