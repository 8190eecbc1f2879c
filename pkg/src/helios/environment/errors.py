class HwxFormatError(ValueError):
    """Malformed gridded-data container (bad header, shape or axis)."""


class WeatherValidationError(ValueError):
    """A loaded/generated grid violates a field invariant."""


class DomainError(ValueError):
    """Query outside the grid's spatial or temporal domain."""

    def __init__(self, axis: str, value: float, lo: float, hi: float):
        self.axis = axis
        self.value = value
        super().__init__(
            f"query {axis}={value!r} outside grid domain [{lo!r}, {hi!r}]"
        )


class SyntheticSpecError(ValueError):
    """Inconsistent synthetic-weather specification."""
