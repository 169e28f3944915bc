"""Exception types raised by the mprk22 package."""


class MprkError(Exception):
    """Base class for all package-specific errors."""


class SignPatternViolation(MprkError, ValueError):
    """A rate matrix has a positive diagonal or negative off-diagonal entry."""


class NotConservative(MprkError, ValueError):
    """A rate matrix has a column whose entries do not sum to zero."""


class NonPositiveInput(MprkError, ValueError):
    """An integrator was handed a state with a component <= 0."""


class NumericalBreakdown(MprkError, ArithmeticError):
    """A solved substep produced a nonpositive component.

    The schemes are unconditionally positive in exact arithmetic, so this
    signals floating-point catastrophe or an invalid user-supplied system;
    the result is never silently repaired.
    """


class SingularSystem(MprkError, ArithmeticError):
    """A linear substep system could not be solved."""


class DegenerateSteadyState(MprkError, ValueError):
    """The steady state touches the boundary of the positive orthant (a=0 or b=0)."""


class NotASteadyState(MprkError, ValueError):
    """A vector claimed to be a steady state does not satisfy A y = 0."""


class DomainError(MprkError, ValueError):
    """A parameter lies outside the domain of the requested quantity."""


class BracketFailure(MprkError, ArithmeticError):
    """A root bracket could not be established for the critical time step."""


class ConfigError(MprkError, ValueError):
    """An experiment configuration file is malformed."""


class IntegrationError(MprkError):
    """A time step failed mid-trajectory.

    Carries the failing step index and the partial trajectory computed so far
    (``partial`` is None when not even the initial state was recorded).
    """

    def __init__(self, message, step_index, partial=None):
        super().__init__(message)
        self.step_index = step_index
        self.partial = partial
