"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A physical parameter is out of range or not finite."""


class InvalidStateError(ValueError):
    """An operator polynomial is not a valid state for the requested operation."""


class ConfigError(ValueError):
    """A scenario configuration could not be parsed or validated."""
