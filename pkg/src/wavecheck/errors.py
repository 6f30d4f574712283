"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A scalar argument is outside its documented domain."""


class ShapeError(ValueError):
    """Vector or table length does not match the grid it claims to live on."""


class DomainError(ValueError):
    """A coordinate or index falls outside the grid / table domain."""


class NumericDomainError(ArithmeticError):
    """A radicand or other intermediate left its mathematical domain."""


class CflViolationError(RuntimeError):
    """The requested run violates the configured Courant-number margin."""


class UnsupportedFeatureError(NotImplementedError):
    """The request needs machinery deliberately left out (see docs)."""


class NonFiniteError(ArithmeticError):
    """A binary64 run produced inf/nan; carries the first offending node."""

    def __init__(self, i: int, k: int):
        super().__init__(f"non-finite value first produced at node (i={i}, k={k})")
        self.i = i
        self.k = k
