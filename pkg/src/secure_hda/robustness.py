"""Distortion when the true main-channel noise ``N1`` is below the design value ``Nd``.

The transmitter fixes its encoder parameters for ``Nd``. The receiver knows
the true ``N1`` and forms its LMMSE estimate with that knowledge; the
closed forms below describe exactly that receiver. A variant whose receiver
also keeps the design-time weights is provided for comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    EmptyInterval,
    MismatchParams,
    SchemeIParams,
    SystemParams,
    db_to_linear,
    linear_to_db,
    validate_mismatch,
)
from .gaussian import assemble_joint, estimator_mse, linear_mmse
from .rates import secrecy_rate
from .schemes import (
    scheme1_lambdas,
    scheme2_configure,
    scheme3_eq_params,
)


class MismatchScheme(str, enum.Enum):
    separation = "separation"
    hda1 = "hda1"
    hda1_modified = "hda1-modified"
    hda2 = "hda2"
    hda3 = "hda3"


@dataclass(frozen=True)
class ModifiedMismatch:
    D: float
    k_prime_d: float
    k_prime_lo: float
    k_prime_hi: float


@dataclass(frozen=True)
class MismatchCurve:
    snr1_values: np.ndarray
    distortion_values: np.ndarray
    scheme: MismatchScheme
    design: MismatchParams


@dataclass(frozen=True)
class ExponentEstimate:
    zeta: float
    fit_range_db: tuple[float, float]
    residual: float


def scheme1_design(p: SystemParams, Nd: float) -> SchemeIParams:
    return SchemeIParams(p.P / (p.P + Nd), math.sqrt(p.P**2 / (p.sigma_v2 * (p.P + Nd))))


def scheme1_mismatch(p: SystemParams, m: MismatchParams) -> float:
    """Actual Scheme I distortion with the encoder designed for ``m.Nd``."""
    P, Q, s2 = p.P, p.Q, p.sigma_v2
    Nd, N1 = m.Nd, m.N1_actual
    num = s2 * (Q * Nd**2 + (P * (P + Q) + 2 * P * Nd + Nd**2) * N1)
    den = (P**2 * (P + Q) + P * (P + Q) * Nd + Q * Nd**2
           + (P * (2 * P + Q) + 3 * P * Nd + Nd**2) * N1)
    return num / den


def scheme1_mismatch_oracle(p: SystemParams, m: MismatchParams) -> float:
    """Same quantity built from the joint law: designed (alpha, k), true noise, LMMSE receiver."""
    sp = scheme1_design(p, m.Nd)
    j = assemble_joint(p.replace(N1=m.N1_actual), sp)
    return linear_mmse(j, "V", ["Y", "U"]).mmse


def scheme1_mismatch_frozen_receiver(p: SystemParams, m: MismatchParams) -> float:
    """Receiver that also keeps the weights computed for ``Nd`` (not re-fitted to ``N1``)."""
    sp = scheme1_design(p, m.Nd)
    lam = scheme1_lambdas(p.replace(N1=m.Nd), sp)
    j = assemble_joint(p.replace(N1=m.N1_actual), sp)
    return estimator_mse(j, "V", ["Y", "U"], lam)


def modified_k_interval(p: SystemParams, Nd: float) -> tuple[float, float]:
    """Open interval of k' for the alpha = 1 variant, endpoints in k (not k^2)."""
    P, Q, N2, s2 = p.P, p.Q, p.N2, p.sigma_v2
    hi2 = (P * P + P * Q - Q * Nd) / (s2 * (P + Q + Nd))
    lo2 = (P * P + P * Q - Q * N2) / (s2 * (P + Q + N2))
    if hi2 <= 0:
        raise EmptyInterval(f"P^2 + PQ - Q*Nd <= 0: k' has no real value (P={P}, Q={Q}, Nd={Nd})")
    lo = math.sqrt(lo2) if lo2 > 0 else 0.0
    hi = math.sqrt(hi2)
    if not lo < hi:
        raise EmptyInterval(f"k' interval ({lo}, {hi}) is empty")
    return lo, hi


def scheme1_modified_mismatch(p: SystemParams, m: MismatchParams) -> ModifiedMismatch:
    """alpha = 1 variant, k' at the top of its interval for the design noise."""
    lo, hi = modified_k_interval(p, m.Nd)
    P, Q, s2, N1 = p.P, p.Q, p.sigma_v2, m.N1_actual
    d = s2 * (P + Q) * N1 / ((P + Q) * N1 + hi * hi * s2 * (P + Q + N1))
    return ModifiedMismatch(d, hi, lo, hi)


def scheme1_modified_oracle(p: SystemParams, m: MismatchParams) -> float:
    _, hi = modified_k_interval(p, m.Nd)
    j = assemble_joint(p.replace(N1=m.N1_actual), SchemeIParams(1.0, hi))
    return linear_mmse(j, "V", ["Y", "U"]).mmse


def scheme2_equivalent(p: SystemParams, Nd: float, R: float) -> SystemParams:
    """Scheme I system the hybrid layer reduces to: sigma_v2 -> sigma_e2, P -> Ph(Nd)."""
    scheme2_configure(p.replace(N1=Nd), R)
    t = 2.0 ** (-2.0 * R)
    return p.replace(P=(p.P + Nd) * t - Nd, sigma_v2=p.sigma_v2 * t)


def scheme2_mismatch(p: SystemParams, m: MismatchParams, R: float,
                     digital_as_interference: bool = False) -> float:
    """Scheme I mismatch on the hybrid layer.

    By default ``Q`` is left unchanged. With ``digital_as_interference`` the
    digital layer's power ``P1`` is added to the known interference, which is
    how the hybrid layer actually sees it.
    """
    eq = scheme2_equivalent(p, m.Nd, R)
    if digital_as_interference:
        eq = eq.replace(Q=p.Q + p.P - eq.P)
    return scheme1_mismatch(eq, m)


def scheme3_mismatch(p: SystemParams, m: MismatchParams, R: float) -> float:
    """Scheme III with the rate-R parameter family designed for ``m.Nd``."""
    scheme3_eq_params(p.replace(N1=m.Nd), R)
    P, Q, s2 = p.P, p.Q, p.sigma_v2
    Nd, N1 = m.Nd, m.N1_actual
    num = s2 * (Q * Nd**2 + (P * (P + Q) + 2 * P * Nd + Nd**2) * N1)
    den = (P + Nd) ** 2 * (P + Q + N1) - 2.0 ** (2.0 * R) * (Nd - N1) * P * (P + Q + Nd)
    return num / den


def scheme3_mismatch_oracle(p: SystemParams, m: MismatchParams, R: float) -> float:
    sp = scheme3_eq_params(p.replace(N1=m.Nd), R)
    j = assemble_joint(p.replace(N1=m.N1_actual), sp)
    obs = ["Vstar", "U", "Y"] if R > 0 else ["U", "Y"]
    return linear_mmse(j, "V", obs).mmse


def separation_mismatch(p: SystemParams, m: MismatchParams) -> float:
    """Threshold model: design distortion if the index decodes, else the source variance."""
    if m.N1_actual > m.Nd:
        return p.sigma_v2
    return p.sigma_v2 * 2.0 ** (-2.0 * secrecy_rate(p.replace(N1=m.Nd)))


def mismatch_distortion(p: SystemParams, scheme: MismatchScheme | str, m: MismatchParams,
                        R: float | None = None) -> float:
    scheme = MismatchScheme(scheme)
    if scheme is MismatchScheme.separation:
        return separation_mismatch(p, m)
    if scheme is MismatchScheme.hda1:
        return scheme1_mismatch(p, m)
    if scheme is MismatchScheme.hda1_modified:
        return scheme1_modified_mismatch(p, m).D
    if R is None:
        raise ValueError(f"scheme {scheme.value} needs a quantization rate R")
    if scheme is MismatchScheme.hda2:
        return scheme2_mismatch(p, m, R)
    return scheme3_mismatch(p, m, R)


def mismatch_curve(p: SystemParams, scheme: MismatchScheme | str, Nd: float,
                   snr1_db, R: float | None = None) -> MismatchCurve:
    """Distortion over a grid of true SNRs (dB); each point must satisfy N1 <= Nd."""
    snr1 = db_to_linear(np.asarray(snr1_db, dtype=float))
    out = np.empty_like(snr1)
    for i, s in enumerate(snr1):
        m = validate_mismatch(p, MismatchParams(Nd, p.P / s))
        out[i] = mismatch_distortion(p, scheme, m, R)
    return MismatchCurve(snr1, out, MismatchScheme(scheme), MismatchParams(Nd, Nd))


def fit_exponent(snr1, distortion) -> tuple[float, float]:
    """Negated least-squares slope of log2 D against log2 SNR, and RMS residual."""
    x = np.log2(np.asarray(snr1, dtype=float))
    y = np.log2(np.asarray(distortion, dtype=float))
    y = y - y[0]
    xc = x - x.mean()
    slope = float(xc @ y / (xc @ xc))
    intercept = float(y.mean() - slope * x.mean()) if np.any(y) else 0.0
    resid = y - (slope * x + intercept)
    return -slope + 0.0, float(np.sqrt(np.mean(resid**2)))


def estimate_exponent(p: SystemParams, scheme: MismatchScheme | str, Nd: float,
                      lo_db: float = 60.0, hi_db: float = 80.0, n_points: int = 20,
                      R: float | None = None) -> ExponentEstimate:
    if not hi_db > lo_db:
        raise ValueError("need hi_db > lo_db")
    if lo_db < linear_to_db(p.P / Nd) - 1e-12:
        raise ValueError("exponent window must lie above the design SNR")
    if n_points < 10:
        raise ValueError("n_points must be >= 10")
    curve = mismatch_curve(p, scheme, Nd, np.linspace(lo_db, hi_db, n_points), R)
    zeta, resid = fit_exponent(curve.snr1_values, curve.distortion_values)
    return ExponentEstimate(zeta, (lo_db, hi_db), resid)


