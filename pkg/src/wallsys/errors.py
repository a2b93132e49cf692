"""Exception taxonomy shared by all modules.

Exit codes used by the CLI: 1 parse, 2 precondition, 3 numeric budget,
4 internal invariant.
"""


class WallsysError(Exception):
    exit_code = 4


class ParseError(WallsysError):
    exit_code = 1


class PreconditionError(WallsysError):
    exit_code = 2


class InvalidFamily(PreconditionError):
    """Operation requires a family that passes validation."""


class NonGenericPoint(PreconditionError):
    """Query point lies on a wall (tent arc or chord)."""


class NonGenericCut(PreconditionError):
    """Strip cut line passes through a stop position."""


class StaleConfig(PreconditionError):
    """Reduction config no longer matches the family it is applied to."""


class ComplexityRefusal(PreconditionError):
    """Requested enumeration exceeds the documented exhaustive budget."""


class RayDegenerate(PreconditionError):
    """A ray from the origin carries zero asymptotic distance."""


class ZeroMass(PreconditionError):
    """Normalization of a zero (or non-finite) mass measure."""


class DegenerateArrangement(PreconditionError):
    """Three concurrent chords; the cell complex is not well defined."""


class UnsupportedClosedForm(PreconditionError):
    """The measure has no closed-form evaluator for this operation."""


class NumericBudgetError(WallsysError):
    exit_code = 3


class NumericBudgetExceeded(NumericBudgetError):
    """Quadrature or sampling cannot reach the requested tolerance."""


class GridTooCoarse(NumericBudgetError):
    """Grid discretization mass error exceeds tolerance."""


class InternalInvariant(WallsysError):
    exit_code = 4
