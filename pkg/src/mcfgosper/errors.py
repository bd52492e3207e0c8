class McfError(Exception):
    """Base class for errors raised by this package."""


class PrecisionExhausted(McfError, ArithmeticError):
    """Interval refinement hit its bit budget without deciding a floor or sign.

    Usually means the input is rational or ℚ-linearly dependent, so some floor
    sits exactly on an integer.
    """


class Terminated(McfError):
    """The Jacobi-Perron expansion stopped: a complete quotient was integral."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


class InputExhausted(McfError):
    """An engine needed another quotient tuple from a finite stream.

    ``side`` is None for the Möbius engine and ``"x"`` or ``"y"`` for the
    bilinear one. ``result`` holds the run so far when raised from a driver.
    """

    def __init__(self, message, side=None, result=None):
        super().__init__(message)
        self.side = side
        self.result = result


class GuardHit(McfError):
    """Raised by callers that treat hitting the step guard as fatal."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
