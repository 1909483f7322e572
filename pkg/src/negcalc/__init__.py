"""Derivatives and perturbative expansions of entanglement negativity."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DimensionError,
    InvariantViolationError,
    NegcalcError,
    OrderOverflowError,
    ParameterRangeError,
    PatternViolationError,
    SeparablePointError,
    SingularityError,
)
from .negativity import (  # noqa: E402
    DensityMatrix,
    log_negativity,
    negativity,
    negativity_d1,
    negativity_d2,
    renyi2_entropy,
    resummed_expansion,
    taylor_expand,
)
from .tensor import BipartiteDims, partial_commutation_matrix, partial_transpose  # noqa: E402

__all__ = [
    "__version__",
    "BipartiteDims",
    "ConfigError",
    "DensityMatrix",
    "DimensionError",
    "InvariantViolationError",
    "NegcalcError",
    "OrderOverflowError",
    "ParameterRangeError",
    "PatternViolationError",
    "SeparablePointError",
    "SingularityError",
    "log_negativity",
    "negativity",
    "negativity_d1",
    "negativity_d2",
    "partial_commutation_matrix",
    "partial_transpose",
    "renyi2_entropy",
    "resummed_expansion",
    "taylor_expand",
]
