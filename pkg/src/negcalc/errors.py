"""Exception hierarchy shared by all negcalc modules."""


class NegcalcError(Exception):
    """Base class for every error raised by negcalc."""


class DimensionError(NegcalcError, ValueError):
    """Array shapes are incompatible with the requested operation."""


class PatternViolationError(NegcalcError, ValueError):
    """An argument that must be Hermitian is not (within tolerance)."""


class SingularityError(NegcalcError, ArithmeticError):
    """The trace norm is not differentiable because its argument is singular.

    ``min_abs_eig`` carries the smallest absolute eigenvalue (or singular
    value) that triggered the refusal.
    """

    def __init__(self, min_abs_eig: float, threshold: float, what: str = "matrix"):
        self.min_abs_eig = float(min_abs_eig)
        self.threshold = float(threshold)
        super().__init__(
            f"{what} is singular: min |eigenvalue| = {self.min_abs_eig:.3e} "
            f"<= threshold {self.threshold:.3e}"
        )


class OrderOverflowError(NegcalcError, ValueError):
    """Requested differential order exceeds the configured maximum."""


class InvariantViolationError(NegcalcError, ValueError):
    """A density matrix (or derived quantity) breaks a required invariant."""


class SeparablePointError(NegcalcError, ArithmeticError):
    """A closed-form derivative was requested at a separable instant."""


class ParameterRangeError(NegcalcError, ValueError):
    """A model parameter lies outside its admissible range."""


class ConfigError(NegcalcError, ValueError):
    """Invalid run configuration (CLI exit status 2)."""
