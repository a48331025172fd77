"""Slow-entropy lab: exact rotation, subshift, IET and special-flow dynamics
with covering-number estimators at arbitrary scales."""

from . import arithmetic, iet, rotation_gaps, scales, subshift, suspension
from .arithmetic import GOLDEN, ContinuedFraction, IrrationalParam, parse_cf, parse_param
from .errors import (ConstructionError, DomainError, InsufficientDataError, PrecisionError,
                     ResourceError, SlowEntropyError)
from .scales import EntropyEstimate, Scale, exponent_fit

__version__ = "0.1.0"

__all__ = [
    "arithmetic", "iet", "rotation_gaps", "scales", "subshift", "suspension",
    "GOLDEN", "ContinuedFraction", "IrrationalParam", "parse_cf", "parse_param",
    "ConstructionError", "DomainError", "InsufficientDataError", "PrecisionError",
    "ResourceError", "SlowEntropyError", "EntropyEstimate", "Scale", "exponent_fit",
    "__version__",
]
