"""Exception and warning types raised by sobscale."""


class SobscaleError(Exception):
    """Base class for all library errors."""


class DimensionError(SobscaleError, ValueError):
    pass


class ParameterError(SobscaleError, ValueError):
    pass


class ShapeError(SobscaleError, ValueError):
    """Operands live on different lattice boxes or grids."""


class ResolutionError(SobscaleError, ValueError):
    """A torus grid is too coarse for the lattice data it is paired with."""


class DomainError(SobscaleError, ValueError):
    """A function returned a non-positive or non-finite value where it must be positive."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class DegenerateInputError(SobscaleError, ValueError):
    pass


class CapabilityError(SobscaleError, TypeError):
    pass


class NumericError(SobscaleError, ArithmeticError):
    pass


class NumericWarning(UserWarning):
    pass


class TruncationWarning(UserWarning):
    """Mass leaked outside the truncation box."""
