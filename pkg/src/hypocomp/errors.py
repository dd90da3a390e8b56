"""Exception types shared across the package."""


class HypocompError(Exception):
    """Base class for every error raised by this package."""


class DegenerateMapError(HypocompError):
    """Coefficient matrix is singular or numerically indistinguishable from singular."""


class NotSelfMapError(HypocompError):
    """The map does not send the open unit disk into itself."""


class IdentityMapError(HypocompError):
    """Operation is undefined for the identity map."""


class NoDenjoyWolffError(HypocompError):
    """Identity maps and elliptic automorphisms have no Denjoy-Wolff point."""


class NoAngularDerivativeError(HypocompError):
    """The map has no finite angular derivative at the requested boundary point."""


class InvalidParameterError(HypocompError):
    """Parameter outside its admissible range."""


class PoleAtOriginError(HypocompError):
    """Denominator vanishes at the origin; no Maclaurin expansion exists."""


class ZeroConstantTermError(HypocompError):
    """Real powers of a series need a nonzero constant term."""


class BranchViolationError(HypocompError):
    """A power factor left the principal branch or acquired a zero in the closed disk."""


class IndeterminateError(HypocompError):
    """A root sits too close to the test circle for the winding count to be trusted."""


class PoleEncounteredError(HypocompError):
    """Evaluation requested at (or numerically at) a pole."""


class OutsideDiskError(HypocompError):
    """Kernel point must lie strictly inside the unit disk."""


class SpaceMismatchError(HypocompError):
    """Operands live in different spaces or have different truncation orders."""


class ZeroSymbolError(HypocompError):
    """The weight symbol is identically zero."""


class NotAFixedPointError(HypocompError):
    """The supplied point is not a fixed point of the map."""


class HypothesisMismatchError(HypocompError):
    """The map does not satisfy the hypotheses of the requested formula."""


class PrecisionLossError(HypocompError):
    """Truncation tail exceeds the tolerated fraction of the computed quantity."""


class TheoryUnavailableError(HypocompError):
    """No implemented closed form covers this input."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class ConvergenceFailureError(HypocompError):
    """Iterative routine failed to reach its tolerance within the iteration cap."""

    def __init__(self, message: str, iterations: int = 0, residual: float = float("nan")):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
