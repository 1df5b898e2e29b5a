"""Secure hybrid digital-analog coding over the Gaussian wiretap channel with side information."""

from .core import (
    DegradednessViolation,
    EmptyInterval,
    InfeasibleOptimum,
    MismatchParams,
    NonPositiveParam,
    ParamError,
    RateTooHigh,
    SchemeIIIParams,
    SchemeIParams,
    SingularCovariance,
    SystemParams,
    UnknownLabel,
    ZeroInterference,
    db_to_linear,
    linear_to_db,
    validate_params,
)

__version__ = "0.1.0"
