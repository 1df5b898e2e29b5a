"""Digital secret dirty-paper coding rates.

``U = X + alpha*S`` with ``X ~ N(0, P)`` independent of ``S``. Two rate
functions compete: the Costa rate ``R(alpha) = I(U;Y) - I(U;S)`` and the
wiretap rate ``R_Z(alpha) = I(U;Y) - I(U;Z)``. The achievable secrecy rate is
``max_alpha min{R, R_Z}`` over ``alpha in [0, 1]``, which has a three-branch
closed form in the transmit power.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import SystemParams, ZeroInterference

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Regime(str, enum.Enum):
    LowPower = "LowPower"
    MidPower = "MidPower"
    HighPower = "HighPower"
    ZeroInterference = "ZeroInterference"


@dataclass(frozen=True)
class RateRegime:
    regime: Regime
    P_L: float
    P_H: float
    alpha_star: float
    alpha_0: float
    R_s: float


def costa_residual(p: SystemParams, alpha):
    """Var(Y|U) scaled: ((1-a)^2 PQ + N1 (P + a^2 Q)) / (P + Q + N1)."""
    P, Q, N1 = p.P, p.Q, p.N1
    return ((1.0 - alpha) ** 2 * P * Q + N1 * (P + alpha**2 * Q)) / (P + Q + N1)


def rate_dpc(p: SystemParams, alpha):
    """R(alpha) = I(U;Y) - I(U;S) in bits/use; accepts scalars or arrays."""
    return 0.5 * np.log2(p.P / costa_residual(p, alpha))


def rate_wiretap(p: SystemParams, alpha):
    """R_Z(alpha) = I(U;Y) - I(U;Z) in bits/use."""
    P, Q, N1, N2 = p.P, p.Q, p.N1, p.N2
    var_u = P + alpha**2 * Q
    c2 = (P + alpha * Q) ** 2
    num = (var_u * (P + Q + N2) - c2) * (P + Q + N1)
    den = (var_u * (P + Q + N1) - c2) * (P + Q + N2)
    return 0.5 * np.log2(num / den)


def wiretap_capacity(p: SystemParams) -> float:
    """Gaussian wiretap secrecy capacity without interference."""
    return 0.5 * math.log2((1.0 + p.P / p.N1) / (1.0 + p.P / p.N2))


def power_thresholds(p: SystemParams) -> tuple[float, float]:
    Q, N1, N2 = p.Q, p.N1, p.N2
    p_low = -N1 - Q / 2.0 + math.sqrt(Q * Q + 4.0 * Q * (N2 - N1)) / 2.0
    p_high = -Q / 2.0 + math.sqrt(Q * Q + 4.0 * Q * N2) / 2.0
    return p_low, p_high


def alpha_star(p: SystemParams) -> float:
    return p.P / (p.P + p.N1)


def alpha_zero(p: SystemParams) -> float:
    """The alpha where R(alpha) = R_Z(alpha); requires Q > 0."""
    P, Q, N2 = p.P, p.Q, p.N2
    if Q <= 0:
        raise ZeroInterference("alpha_0 is undefined for Q = 0")
    return (P * Q + P * math.sqrt(Q * (P + Q + N2))) / (Q * (P + N2))


def classify_regime(p: SystemParams, allow_zero_interference: bool = False) -> RateRegime:
    """Evaluate the piecewise secrecy rate and report which branch is active.

    With ``Q == 0`` this raises :class:`ZeroInterference` unless
    ``allow_zero_interference`` is set, in which case the plain wiretap
    capacity is returned with thresholds and ``alpha_0`` set to NaN.
    """
    a_star = alpha_star(p)
    if p.Q == 0:
        if not allow_zero_interference:
            raise ZeroInterference("Q = 0: no side information, use the wiretap branch")
        return RateRegime(Regime.ZeroInterference, math.nan, math.nan, a_star, math.nan,
                          wiretap_capacity(p))
    p_low, p_high = power_thresholds(p)
    a0 = alpha_zero(p)
    if p.P <= p_low:
        regime, rs = Regime.LowPower, float(rate_dpc(p, a_star))
    elif p.P < p_high:
        regime, rs = Regime.MidPower, float(rate_dpc(p, a0))
    else:
        regime, rs = Regime.HighPower, float(rate_wiretap(p, 1.0))
    return RateRegime(regime, p_low, p_high, a_star, a0, max(rs, 0.0))


def secrecy_rate(p: SystemParams) -> float:
    """Achievable secrecy rate, falling back to the wiretap capacity when Q = 0."""
    return classify_regime(p, allow_zero_interference=True).R_s


def _golden_max(f, lo: float, hi: float, xtol: float = 1e-13) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def secrecy_rate_maxmin(p: SystemParams, grid_size: int = 100) -> float:
    """Numerical max over alpha in [0,1] of min{R(alpha), R_Z(alpha)}.

    Coarse grid followed by golden-section refinement around the best grid
    point; the best grid value is kept if refinement does not improve on it.
    """
    if grid_size < 100:
        raise ValueError("grid_size must be >= 100")

    def objective(a):
        return np.minimum(rate_dpc(p, a), rate_wiretap(p, a))

    grid = np.linspace(0.0, 1.0, grid_size)
    vals = objective(grid)
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_size - 1)]
    _, refined = _golden_max(lambda a: float(objective(a)), lo, hi)
    for edge in (lo, hi):
        refined = max(refined, float(objective(edge)))
    return max(best, refined, 0.0)
