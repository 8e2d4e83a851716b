"""Exception types shared across the package."""


class IntcertError(Exception):
    """Base class for all package-specific errors."""


class NonScalarLeadingCoefficient(IntcertError):
    """Plain polynomial division needs a scalar leading coefficient."""


class UnsupportedDenominator(IntcertError):
    """A denominator factor has no Gaussian-rational root."""


class NotExact(IntcertError):
    """The 1-form Q dx - P dy is not closed."""


class DependsOnY(IntcertError):
    """A quantity that must be a function of x alone involves y."""


class DegenerateMap(IntcertError):
    """The change of variables annihilates the new independent variable."""


class NotInvariant(IntcertError):
    """A polynomial claimed invariant fails its defining identity."""


class NoSolution(IntcertError):
    """A search or linear assembly produced no certificate."""


class NotZeroDimensional(IntcertError):
    """The solution ideal has positive dimension (a solution family).

    Carries enough context for callers to present the family: the reduced
    basis, the names of unconstrained unknowns, and any triangular
    assignments made by the linear presolve.
    """

    def __init__(self, message, *, basis=None, free_vars=(), assignments=()):
        super().__init__(message)
        self.basis = tuple(basis) if basis else ()
        self.free_vars = tuple(free_vars)
        self.assignments = tuple(assignments)


class ResourceLimit(IntcertError):
    """A configured step, degree, or candidate budget was exceeded."""


class UnfactoredResidual(IntcertError):
    """Part of an inverse integrating factor is not a known invariant curve."""


class NonConstantExponents(IntcertError):
    """The product-form first-integral ansatz has x-dependent exponents."""


class SingularAtOrigin(IntcertError):
    """P(0,0) = 0, so no regular formal solution through the origin exists."""


class MalformedCertificate(IntcertError):
    """A certificate violates its structural invariants."""


class DomainCrossing(IntcertError):
    """Numeric evaluation left the domain of an expression atom."""


class StepFailure(IntcertError):
    """The adaptive integrator's step size underflowed or ran out of steps."""


class NonPolynomial(IntcertError):
    """A polynomial was required but the expression reduces to a quotient."""


class ExpressionSyntaxError(IntcertError):
    """Parse failure, with the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position
