"""Exception types shared across the library."""


class NetvoiError(Exception):
    """Base class for all library-specific errors."""


class InvalidStateError(NetvoiError, ValueError):
    """A state mask sets bits beyond the component count."""


class NonMonotoneError(NetvoiError, ValueError):
    """A truth table flips the system off when a component comes up."""


class ConditioningError(NetvoiError, ValueError):
    """Conditioning on an event of probability zero."""


class DegenerateObservationError(NetvoiError, ValueError):
    """The inspection outcome is certain, so no posterior split exists."""


class IncomparableIntervalsError(NetvoiError, ValueError):
    """Posterior intervals built from different priors cannot be compared."""


class InfeasibleCorrelationError(NetvoiError, ValueError):
    """No joint distribution realizes the requested marginals and correlation."""


class NotApplicableError(NetvoiError, ValueError):
    """The requested shortcut does not apply to this input."""


class SizeCapError(NetvoiError, RuntimeError):
    """The instance exceeds the size cap for exact analysis."""


class ScenarioError(NetvoiError, ValueError):
    """A scenario document failed validation.

    Carries every detected problem so callers can report them all at once.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
