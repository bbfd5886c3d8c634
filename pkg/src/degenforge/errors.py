"""Exception types shared across the library.

Every domain error derives from DegenforgeError so callers (and the CLI)
can distinguish verdict-style failures from programming errors.
"""


class DegenforgeError(Exception):
    """Base class for all library errors."""


class ParseError(DegenforgeError):
    """An input file or literal does not match its declared format."""


class DimensionTooLow(DegenforgeError):
    """An operation needs a simplex of higher dimension than the one given."""


class IncompatibleHorn(DegenforgeError):
    """The faces of a would-be horn fail the pairwise compatibility equations."""

    def __init__(self, message, horn=None, failures=None):
        super().__init__(message)
        self.horn = horn
        self.failures = failures or []


class NotASelfEdge(DegenforgeError):
    """An idempotency check was asked about an edge whose endpoints differ."""


class MissingDegeneracies(DegenforgeError):
    """A relative check needs the target's degeneracy table but none was given."""


class InvalidCategory(DegenforgeError):
    """A category presentation violates closure, associativity, or identity laws."""


class InvalidDegeneracyTable(DegenforgeError):
    """A degeneracy table supplied as input fails its own identity check."""


class UnfillableHorn(DegenforgeError):
    """A horn that the synthesis needed to fill has no (admissible) filler."""

    def __init__(self, message, horn=None, level=None, target=None):
        super().__init__(message)
        self.horn = horn
        self.level = level
        self.target = target


class ConsistencyViolation(DegenforgeError):
    """Two forced representations of the same value disagree.

    For valid inputs the overlap of forced values is guaranteed to agree, so
    this firing means the input (or the engine) is broken.
    """

    def __init__(self, message, simplex=None, values=None):
        super().__init__(message)
        self.simplex = simplex
        self.values = values or []


class TruncationExhausted(DegenforgeError):
    """The truncation dimension is too small for the requested construction."""


class NoIdempotentEquivalence(DegenforgeError):
    """A vertex admits no self-edge that is both idempotent and an equivalence."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class NotQuasiSemicategory(DegenforgeError):
    """An inner horn (or inner lift) is unfillable, with a witness attached."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MissingWitness(DegenforgeError):
    """No idempotency witness was supplied and none could be discovered."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class IncompatibleSubcomplexStructure(DegenforgeError):
    """The subcomplex's degeneracy data conflicts with the ambient constraints."""

    def __init__(self, message, simplex=None):
        super().__init__(message)
        self.simplex = simplex


class NotKan(DegenforgeError):
    """A construction requiring the Kan condition was run on a non-Kan set."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RestrictionMismatch(DegenforgeError):
    """A synthesized table fails to restrict to the prescribed subcomplex table."""


class CertificateMismatch(DegenforgeError):
    """Replaying a certificate diverged from the recorded decisions."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
