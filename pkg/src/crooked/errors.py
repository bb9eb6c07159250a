"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for geometric failures (bad input, degenerate configuration)."""


class DomainError(GeometryError):
    """Evaluation requested outside the domain of the extended functional."""


class NotSeparated(GeometryError):
    """Two geodesics whose closures meet where disjoint closures were required."""


class LinesCross(GeometryError):
    """Two geodesics intersect (or coincide) where disjoint ones were required."""


class MixedSides(GeometryError):
    """A left plane was paired with a right plane (or vice versa)."""


class IsDisjoint(GeometryError):
    """An intersection witness was requested for a disjoint pair."""


class NotInProduct(GeometryError):
    """The element does not factor through the stem-quadrant product."""


class Degenerate(GeometryError):
    """Side hypotheses of the quadrant criterion fail; no verdict is meaningful."""


class RejectedUnreduced(GeometryError):
    """A free-group word contained an adjacent inverse pair."""


class NoHyperbolic(GeometryError):
    """No hyperbolic element was found in the sampled word range."""


class PairingFailed(GeometryError):
    """A candidate side pairing does not match arcs the way it must."""


class HalfSpacesOverlap(GeometryError):
    """Candidate half-spaces for a fundamental domain are not pairwise disjoint."""


class PingPongFailed(GeometryError):
    """Requested ping-pong configuration has overlapping disks."""


class ChartOverflow(GeometryError):
    """A projective point is too close to the chart's hyperplane at infinity."""


class EmptyWindow(GeometryError):
    """No points of a cloud fall inside the requested affine window."""
