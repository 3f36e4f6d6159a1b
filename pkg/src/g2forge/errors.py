"""Exception hierarchy shared by every g2forge module.

All failures raised by the library derive from :class:`G2ForgeError`, so
callers (and the CLI) can catch one type and still report precise causes.
"""


class G2ForgeError(Exception):
    """Base class for all g2forge errors."""


class DivisionByZero(G2ForgeError, ZeroDivisionError):
    """Inversion of the zero scalar."""


class NotRepresentable(G2ForgeError):
    """A requested root/scale does not exist inside Q(sqrt2, sqrt3)."""


class NegativeInput(G2ForgeError):
    """Square root of a negative scalar."""


class ParseError(G2ForgeError, ValueError):
    """Malformed textual input; carries the byte offset of the failure."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class DimensionMismatch(G2ForgeError, ValueError):
    """Operands live on spaces of different dimensions/degrees."""


class SingularMap(G2ForgeError):
    """A linear map that must be invertible is not."""


class MetricNotRepresentable(G2ForgeError):
    """Gram data whose normalisation needs roots outside the field."""


class NonDiagonalMetric(G2ForgeError):
    """Hodge star supports diagonal Gram matrices only."""


class NonOrthonormalFrame(G2ForgeError):
    """Curvature routines require the identity Gram matrix."""


class JacobiViolation(G2ForgeError):
    """Structure constants violating the Jacobi identity.

    ``witness`` is the offending index triple (i, j, k), 1-based.
    """

    def __init__(self, witness):
        super().__init__(f"Jacobi identity fails on triple {witness}")
        self.witness = witness


class NotPositive(G2ForgeError):
    """A 3-form that is not a positive G2 form.

    ``witness_minor`` is the order of the first non-positive leading
    principal minor of the induced pairing matrix.
    """

    def __init__(self, witness_minor):
        super().__init__(
            f"pairing matrix is not positive definite "
            f"(leading principal minor {witness_minor} is not positive)"
        )
        self.witness_minor = witness_minor


class NotClosed(G2ForgeError):
    """Torsion/soliton machinery applies to closed 3-forms only."""


class NotADerivation(G2ForgeError):
    """An extension map that is not a derivation of the base algebra.

    ``witness`` is a pair (i, j) on which D[x,y] != [Dx,y] + [x,Dy].
    """

    def __init__(self, witness):
        super().__init__(f"map is not a derivation (fails on bracket pair {witness})")
        self.witness = witness


class NotAnIsomorphism(G2ForgeError):
    """Equivalence checking requires a bracket isomorphism."""


class ScaleNotRepresentable(NotRepresentable):
    """A homothety scale whose (2/3)-power leaves the field."""


class GoldenMismatch(G2ForgeError):
    """Computed values differ from a catalog's expected record."""

    def __init__(self, diffs):
        lines = "; ".join(f"{k}: expected {e!r}, got {g!r}" for k, e, g in diffs)
        super().__init__(f"golden record mismatch: {lines}")
        self.diffs = diffs
