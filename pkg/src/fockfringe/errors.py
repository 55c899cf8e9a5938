"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the domain of the operation."""


class CapacityError(ParameterError):
    """The requested photon number exceeds what the simulator supports."""


class PreconditionError(ValueError):
    """A state is not in the form an operation expects."""


class FitError(ValueError):
    """The least-squares design is degenerate."""
