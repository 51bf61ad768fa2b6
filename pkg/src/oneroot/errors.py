"""Exception taxonomy shared across the package."""


class OneRootError(Exception):
    """Base class for every error raised by this package."""


# ---- state construction ----

class DimensionMismatch(OneRootError):
    """Operands live on different (or unsupported) Hilbert spaces."""


class NonOrthogonalBasis(OneRootError):
    """The two basis vectors of a rank-2 state are not orthogonal."""


class InvalidBloch(OneRootError):
    """Bloch coordinates outside the closed unit ball or angle ranges."""


class IndexOutOfRange(OneRootError):
    """Qubit index outside 1..m."""


class RankTooHigh(OneRootError):
    """A density matrix claimed to be rank 2 has a significant third eigenvalue."""


# ---- measures ----

class WrongQubitCount(OneRootError):
    """Measure defined on a different number of qubits than the state."""


class ZeroVector(OneRootError):
    """Unnormalized evaluation requested on a (numerically) zero vector."""


# ---- zero polytope ----

class ZeroPolynomialIdentically(OneRootError):
    """All polynomial coefficients vanish: the measure is zero on the span."""


class InterpolationUnsound(OneRootError):
    """Interpolated coefficients fail the residual check at the probe nodes."""


class EntireRangeVanishes(OneRootError):
    """No basis rotation produces a pole with nonzero measure."""


# ---- convex roof ----

class NotOneRoot(OneRootError):
    """Closed-form evaluation requested without a one-root certificate."""


class RankDeficient(OneRootError):
    """Ensemble sampling requested on a state of rank < 2."""


class PreconditionViolated(OneRootError):
    """A geometric identity was invoked outside its hypotheses."""


# ---- families ----

class UnsupportedClass(OneRootError):
    """Generator requested for a class label outside the supported set."""


class DegenerateParameters(OneRootError):
    """Family parameters on (or too close to) a degeneracy locus."""


class SamplingFailed(OneRootError):
    """Bounded rejection sampling exhausted its attempt budget."""
