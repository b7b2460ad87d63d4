"""Exception types raised across the package."""


class ToricResidueError(Exception):
    """Base class for all computation errors of this package."""


class NotSaturated(ToricResidueError):
    """The vectors do not generate their lattice over the integers."""


class DimensionMismatch(ToricResidueError):
    """Vectors or matrices have incompatible shapes."""


class NotProjective(ToricResidueError):
    """No linear functional is strictly positive on every vector."""


class NotSpanning(ToricResidueError):
    """The configuration does not span the ambient space."""


class UnboundedSlice(ToricResidueError):
    """A polar-cone slice requested for enumeration is unbounded."""


class NonAdmissibleDenominator(ToricResidueError):
    """A denominator factor vanishes identically during a residue stage."""


class RegularXiNotFound(ToricResidueError):
    """No regular vector was found in the chamber within the retry budget."""


class EmptyPolytope(ToricResidueError):
    """The partition polytope has no points."""


class ZeroCoordinate(ToricResidueError):
    """A parameter coordinate vanishes where a torus point is required."""


class SolveFailed(ToricResidueError):
    """The elimination step of the binomial solver degenerated."""


class UnsupportedRank(ToricResidueError):
    """The binomial solver only handles ranks up to three."""


class DegenerateCriticalPoint(ToricResidueError):
    """A critical point makes kappa(u) or G(u) vanish."""


class InvalidPartition(ToricResidueError):
    """The index partition is not a disjoint cover of the configuration."""
