"""Parameter types, validation and unit helpers shared by every other module.

All internal quantities are linear (variances, powers); decibels only appear
at the CLI boundary. Rates are bits per channel use (base-2 logarithms).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from pathlib import Path


class ParamError(ValueError):
    """Base class for parameter/precondition violations."""

    name = "ParamError"


class NonPositiveParam(ParamError):
    name = "NonPositiveParam"


class DegradednessViolation(ParamError):
    name = "DegradednessViolation"


class ZeroInterference(ParamError):
    name = "ZeroInterference"


class RateTooHigh(ParamError):
    name = "RateTooHigh"


class InfeasibleOptimum(ParamError):
    name = "InfeasibleOptimum"


class EmptyInterval(ParamError):
    name = "EmptyInterval"


class SingularCovariance(ValueError):
    name = "SingularCovariance"


class UnknownLabel(KeyError):
    name = "UnknownLabel"


@dataclass(frozen=True)
class SystemParams:
    """Gaussian wiretap channel with transmitter-known interference.

    ``P`` transmit power, ``Q`` interference power, ``N1``/``N2`` legitimate
    and eavesdropper noise variances, ``sigma_v2`` source variance. Bandwidth
    ratio and leakage target are carried as fixed fields.
    """

    P: float
    Q: float
    N1: float
    N2: float
    sigma_v2: float = 1.0
    rho: float = 1.0
    i_eps: float = 0.0

    def replace(self, **changes) -> "SystemParams":
        d = asdict(self)
        d.update(changes)
        return SystemParams(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SchemeIParams:
    alpha: float
    k: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.k)):
            raise ParamError("alpha and k must be finite")


@dataclass(frozen=True)
class SchemeIIIParams:
    alpha: float
    k: float
    R: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.k)):
            raise ParamError("alpha and k must be finite")
        if not self.R >= 0:
            raise NonPositiveParam(f"quantization rate R must be >= 0, got {self.R}")

    @property
    def as_scheme1(self) -> SchemeIParams:
        return SchemeIParams(self.alpha, self.k)


@dataclass(frozen=True)
class MismatchParams:
    """Design noise ``Nd`` used by the transmitter, true noise ``N1_actual``."""

    Nd: float
    N1_actual: float


def validate_params(p: SystemParams) -> SystemParams:
    """Return ``p`` unchanged if every invariant holds, otherwise raise."""
    for name in ("P", "N1", "N2", "sigma_v2"):
        v = getattr(p, name)
        if not (math.isfinite(v) and v > 0):
            raise NonPositiveParam(f"{name} must be > 0, got {v}")
    if not (math.isfinite(p.Q) and p.Q >= 0):
        raise NonPositiveParam(f"Q must be >= 0, got {p.Q}")
    if not p.N2 > p.N1:
        raise DegradednessViolation(
            f"eavesdropper must be strictly degraded: need N2 > N1, got N2={p.N2}, N1={p.N1}"
        )
    if p.rho != 1.0:
        raise ParamError(f"only rho = 1 is supported, got {p.rho}")
    if p.i_eps != 0.0:
        raise ParamError(f"only perfect secrecy (i_eps = 0) is supported, got {p.i_eps}")
    return p


def validate_mismatch(p: SystemParams, m: MismatchParams) -> MismatchParams:
    if not (m.N1_actual > 0 and m.Nd > 0):
        raise NonPositiveParam("noise variances must be > 0")
    if not p.N2 > m.Nd:
        raise DegradednessViolation(f"need N2 > Nd, got N2={p.N2}, Nd={m.Nd}")
    if not m.Nd >= m.N1_actual:
        raise ParamError(f"mismatch analysis needs Nd >= N1, got Nd={m.Nd}, N1={m.N1_actual}")
    return m


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if not x > 0:
        raise NonPositiveParam(f"cannot convert {x} to dB")
    return 10.0 * math.log10(x)


_SNR_KEYS = {"snr1_db": "N1", "snr2_db": "N2"}


def params_from_dict(d: dict) -> tuple[SystemParams, float | None]:
    """Build validated params from the JSON schema.

    Noise variances may be given directly or as SNRs in dB (``N = P/SNR``).
    Returns ``(params, Nd)`` where ``Nd`` comes from an optional ``snrd_db``.
    """
    if "P" not in d:
        raise ParamError("params file must define P")
    P = float(d["P"])
    fields = {"P": P, "Q": float(d.get("Q", 0.0)), "sigma_v2": float(d.get("sigma_v2", 1.0))}
    for key, noise in _SNR_KEYS.items():
        if noise in d:
            fields[noise] = float(d[noise])
        elif key in d:
            fields[noise] = P / db_to_linear(float(d[key]))
        else:
            raise ParamError(f"params file must define {noise} or {key}")
    Nd = P / db_to_linear(float(d["snrd_db"])) if "snrd_db" in d else None
    return validate_params(SystemParams(**fields)), Nd


def load_params(path: str | Path) -> tuple[SystemParams, float | None]:
    with open(path) as fh:
        return params_from_dict(json.load(fh))


class InfeasibleWithoutOverride(ParamError):
    name = "InfeasibleWithoutOverride"
