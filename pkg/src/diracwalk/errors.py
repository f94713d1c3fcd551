class ContractViolation(ValueError):
    """An operation was called with inputs that break its preconditions."""


class UnsupportedDimension(ValueError):
    pass


class DegenerateInput(ValueError):
    """The low-passed state has (numerically) zero norm and cannot be renormalized."""


class BoundViolation(AssertionError):
    """A measured error exceeded a proven bound by more than the rounding slack."""
