"""Distortion of the separation scheme and the three hybrid digital-analog schemes.

Scheme I embeds the source linearly in the dirty-paper auxiliary
``U = X + alpha*S + k*V``; Scheme II superimposes a secure digital layer and a
Scheme I layer carrying the quantisation error; Scheme III embeds the
quantisation error ``E`` directly, ``U = X + alpha*S + k*E``, and bins the
codebook by the quantisation index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linalg
from .core import (
    InfeasibleOptimum,
    RateTooHigh,
    SchemeIIIParams,
    SchemeIParams,
    SystemParams,
    ZeroInterference,
)
from .gaussian import assemble_joint, mutual_information
from .rates import Regime, classify_regime, costa_residual, secrecy_rate

# Slack on the decodability boundary I(U;Y) = I(U;SV); see feasibility().
BOUNDARY_RTOL = 1e-12


class Scheme(str, enum.Enum):
    separation = "separation"
    hda1 = "hda1"
    hda2 = "hda2"
    hda3 = "hda3"


@dataclass(frozen=True)
class DistortionReport:
    scheme: Scheme
    closed_form_D: float
    params_used: dict
    constraints_ok: bool
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scheme"] = self.scheme.value
        d["notes"] = list(self.notes)
        return d


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    lower_margin: float
    upper_margin: float


@dataclass(frozen=True)
class FeasibilityRegion:
    """Valid (alpha, k) for Scheme I, described by bounds on k^2 at each alpha.

    ``lower_k2(a) < k^2 < upper_k2(a)``.
    """

    p: SystemParams

    def lower_k2(self, alpha):
        P, Q, N2, s2 = self.p.P, self.p.Q, self.p.N2, self.p.sigma_v2
        return (-Q * (P + N2) * alpha**2 + 2 * P * Q * alpha + P * P) / (s2 * (P + Q + N2))

    def upper_k2(self, alpha):
        return (self.p.P - costa_residual(self.p, alpha)) / self.p.sigma_v2

    def contains(self, alpha: float, k: float) -> bool:
        return feasibility(self.p, SchemeIParams(alpha, k)).feasible

    def nonempty(self, n: int = 1001) -> bool:
        a = np.linspace(0.0, 1.0, n)
        return bool(np.any(self.upper_k2(a) > np.maximum(self.lower_k2(a), 0.0)))


@dataclass(frozen=True)
class Scheme2Config:
    R: float
    P1: float
    alpha1: float
    Ph: float
    alphah: float
    k: float
    sigma_e2: float
    digital_rate_effective: float


@dataclass(frozen=True)
class BinningExponents:
    """Per-symbol exponents of the Scheme III codebook sizes (``2^(n*rate)``)."""

    codebook_rate: float
    bin_rate: float
    per_bin_rate: float
    subbin_count_rate: float
    per_bin_rate_from_codebook: float
    exponent_gap: float


@dataclass(frozen=True)
class RateWindow:
    max_rate: float
    exponents: BinningExponents
    rate_admissible: bool
    window_negative: bool


def optimal_distortion(p: SystemParams) -> float:
    return p.sigma_v2 * 2.0 ** (-2.0 * p.i_eps) * p.N1 / (p.P + p.N1)


def separation_distortion(p: SystemParams) -> DistortionReport:
    """Quantise at the secrecy rate, send with digital secret dirty-paper coding."""
    if p.Q == 0:
        raise ZeroInterference("separation distortion needs Q > 0")
    reg = classify_regime(p)
    P, Q, N1, N2, s2 = p.P, p.Q, p.N1, p.N2, p.sigma_v2
    if reg.regime is Regime.LowPower:
        d = s2 * N1 / (P + N1)
    elif reg.regime is Regime.MidPower:
        a0 = reg.alpha_0
        d = s2 * ((P + a0**2 * Q) * (P + Q + N1) - (P + a0 * Q) ** 2) / (P * (P + Q + N1))
    else:
        d = s2 * (P + Q + N2) / (P + Q + N1) * N1 / N2
    check = s2 * 2.0 ** (-2.0 * reg.R_s)
    return DistortionReport(
        Scheme.separation, d,
        {"regime": reg.regime.value, "R_s": reg.R_s, "alpha_0": reg.alpha_0},
        True,
        (f"distortion-rate cross-check sigma_v2*2^(-2R_s) = {check:.12g}",),
    )


def scheme1_mu(p: SystemParams, alpha):
    return costa_residual(p, alpha)


def scheme1_lambdas(p: SystemParams, sp: SchemeIParams) -> tuple[float, float]:
    """LMMSE weights on (Y, U) for estimating V."""
    P, Q, N1, s2 = p.P, p.Q, p.N1, p.sigma_v2
    a, k = sp.alpha, sp.k
    den = k * k * s2 * (P + Q + N1) + (1 - a) ** 2 * P * Q + N1 * (P + a * a * Q)
    return -k * s2 * (P + a * Q) / den, k * s2 * (P + Q + N1) / den


def feasibility(p: SystemParams, sp: SchemeIParams) -> Feasibility:
    """Check I(U;Y) > I(U;SV) > I(U;Z) through the equivalent polynomial inequalities.

    ``lower_margin > 0`` is the secrecy condition I(U;SV) > I(U;Z) and is
    strict. ``upper_margin`` is the decodability slack I(U;Y) - I(U;SV); the
    optimal Scheme I point sits exactly on it, so it is accepted down to a
    rounding-level ``BOUNDARY_RTOL``.
    """
    P, Q, N1, N2, s2 = p.P, p.Q, p.N1, p.N2, p.sigma_v2
    a, k2 = sp.alpha, sp.k * sp.k
    lower = k2 * s2 * (P + Q + N2) - (-Q * (P + N2) * a * a + 2 * P * Q * a + P * P)
    upper = (-(1 - a) ** 2 * P * Q - N1 * (P + a * a * Q) + P * (P + Q + N1)) - k2 * s2 * (P + Q + N1)
    scale = P * (P + Q + N1)
    return Feasibility(bool(lower > 0 and upper > -BOUNDARY_RTOL * scale), float(lower), float(upper))


def scheme1_distortion(p: SystemParams, sp: SchemeIParams) -> DistortionReport:
    mu = scheme1_mu(p, sp.alpha)
    d = p.sigma_v2 / (1.0 + sp.k**2 * p.sigma_v2 / mu)
    f = feasibility(p, sp)
    return DistortionReport(
        Scheme.hda1, d,
        {"alpha": sp.alpha, "k": sp.k, "mu": mu,
         "lower_margin": f.lower_margin, "upper_margin": f.upper_margin},
        f.feasible,
    )


def scheme1_optimal(p: SystemParams) -> SchemeIParams:
    sp = SchemeIParams(p.P / (p.P + p.N1), math.sqrt(p.P**2 / (p.sigma_v2 * (p.P + p.N1))))
    f = feasibility(p, sp)
    if not f.feasible:
        raise InfeasibleOptimum(
            f"optimal (alpha, k) = ({sp.alpha}, {sp.k}) violates the valid region "
            f"(margins {f.lower_margin}, {f.upper_margin})"
        )
    return sp


def _max_quantization_rate(P: float, N1: float) -> float:
    return 0.5 * math.log2((P + N1) / N1)


def scheme2_configure(p: SystemParams, R: float) -> Scheme2Config:
    """Power split and parameters of the superposition scheme at digital rate ``R``."""
    P, N1 = p.P, p.N1
    rs = secrecy_rate(p)
    bound = min(rs, _max_quantization_rate(P, N1))
    if not 0 < R < bound:
        raise RateTooHigh(f"need 0 < R < min(R_s, 0.5 log2((P+N1)/N1)) = {bound:.9g}, got R = {R}")
    t = 2.0 ** (-2.0 * R)
    P1 = (P + N1) * (1.0 - t)
    Ph = (P + N1) * t - N1
    sigma_e2 = p.sigma_v2 * t
    alpha1 = P1 / (P1 + Ph + N1)
    alphah = Ph / (Ph + N1)
    k = math.sqrt(Ph**2 / (sigma_e2 * (Ph + N1)))
    eff = p.replace(P=P1, N1=Ph + N1, N2=Ph + p.N2)
    return Scheme2Config(R, P1, alpha1, Ph, alphah, k, sigma_e2, secrecy_rate(eff))


def scheme2_hybrid_params(p: SystemParams, cfg: Scheme2Config) -> SystemParams:
    """Equivalent Scheme I system seen by the hybrid layer (X1 joins the interference)."""
    return p.replace(P=cfg.Ph, Q=p.Q + cfg.P1, sigma_v2=cfg.sigma_e2)


def scheme2_distortion(p: SystemParams, R: float) -> DistortionReport:
    cfg = scheme2_configure(p, R)
    hp = scheme2_hybrid_params(p, cfg)
    inner = scheme1_distortion(hp, SchemeIParams(cfg.alphah, cfg.k))
    d = inner.closed_form_D
    d_free = optimal_distortion(p)
    notes = [f"rate-free closed form {d_free:.12g}, relative gap {abs(d - d_free) / d_free:.3g}"]
    if cfg.digital_rate_effective < R:
        notes.append(
            f"digital layer rate R={R:.6g} exceeds its effective-noise secrecy rate "
            f"{cfg.digital_rate_effective:.6g}"
        )
    params = asdict(cfg)
    params["hybrid_margins"] = [inner.params_used["lower_margin"], inner.params_used["upper_margin"]]
    return DistortionReport(Scheme.hda2, d, params, inner.constraints_ok, tuple(notes))


def scheme3_eq_params(p: SystemParams, R: float) -> SchemeIIIParams:
    """The (alpha, k) choice that makes Scheme III optimal for every admissible R."""
    P, N1 = p.P, p.N1
    k2 = P * (P + N1 - N1 * 2.0 ** (2.0 * R)) / (p.sigma_v2 * (P + N1))
    if k2 < 0:
        raise RateTooHigh(
            f"R = {R} exceeds 0.5 log2((P+N1)/N1) = {_max_quantization_rate(P, N1):.9g}"
        )
    return SchemeIIIParams(P / (P + N1), math.sqrt(k2), R)


def scheme3_system(p: SystemParams, sp: SchemeIIIParams) -> tuple[np.ndarray, np.ndarray]:
    """Covariance of (V*, U, Y) and its cross-covariance with V."""
    P, Q, N1, s2 = p.P, p.Q, p.N1, p.sigma_v2
    a, k = sp.alpha, sp.k
    se = s2 * 2.0 ** (-2.0 * sp.R)
    lam = np.array([
        [s2 - se, 0.0, 0.0],
        [0.0, P + a * a * Q + k * k * se, P + a * Q],
        [0.0, P + a * Q, P + Q + N1],
    ])
    gam = np.array([s2 - se, k * se, 0.0])
    return lam, gam


def scheme3_lambdas(p: SystemParams, sp: SchemeIIIParams) -> np.ndarray:
    """Weights on (V*, U, Y). At R = 0, V* is identically zero and gets weight 0."""
    lam, gam = scheme3_system(p, sp)
    coef = np.zeros(3)
    keep = [0, 1, 2] if lam[0, 0] > 0 else [1, 2]
    coef[keep] = linalg.solve(lam[np.ix_(keep, keep)], gam[keep])
    return coef


def scheme3_distortion(p: SystemParams, sp: SchemeIIIParams) -> DistortionReport:
    _, gam = scheme3_system(p, sp)
    coef = scheme3_lambdas(p, sp)
    d = p.sigma_v2 - float(gam @ coef)
    win = scheme3_rate_window(p, sp)
    notes = ()
    if not win.rate_admissible:
        notes = (f"R = {sp.R:.6g} exceeds the admissible binning rate {win.max_rate:.6g}",)
    return DistortionReport(
        Scheme.hda3, d,
        {"alpha": sp.alpha, "k": sp.k, "R": sp.R, "lambdas": coef.tolist(),
         "max_rate": win.max_rate},
        win.rate_admissible, notes,
    )


def scheme3_rate_window(p: SystemParams, sp: SchemeIIIParams) -> RateWindow:
    """Admissible quantisation rate I(U;Y) - max{I(U;SE), I(U;Z)} and binning exponents."""
    j = assemble_joint(p, sp)
    i_uy = mutual_information(j, ["U"], ["Y"])
    i_use = mutual_information(j, ["U"], ["S", "E"])
    i_uz = mutual_information(j, ["U"], ["Z"])
    per_bin = max(i_use, i_uz)
    window = i_uy - per_bin
    from_codebook = i_uy - sp.R
    exps = BinningExponents(
        codebook_rate=i_uy,
        bin_rate=sp.R,
        per_bin_rate=per_bin,
        subbin_count_rate=per_bin - i_uz,
        per_bin_rate_from_codebook=from_codebook,
        exponent_gap=from_codebook - per_bin,
    )
    # Rounding slack: the optimal parameter family can sit on the window edge.
    slack = 1e-12 * max(1.0, abs(i_uy))
    return RateWindow(max(window, 0.0), exps, sp.R <= window + slack, window < 0)
