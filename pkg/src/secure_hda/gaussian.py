"""Joint Gaussian law of the model variables, exact mutual information and LMMSE.

Every derived variable (U, Y, Z, V in the quantised scheme) is a linear
combination of independent base variables, so the covariance is
``A diag(var) A^T`` with ``A`` the mixing matrix. This module is the oracle the
closed-form expressions elsewhere are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .core import (
    SchemeIIIParams,
    SchemeIParams,
    SingularCovariance,
    SystemParams,
    UnknownLabel,
)

ALL_LABELS = ("X", "S", "V", "E", "W", "Wp", "U", "Y", "Z", "Vstar")

DET_FLOOR = 1e-300
# Joint groups whose correlation-matrix determinant falls below this are
# linearly dependent up to rounding (e.g. U together with X, S, V).
CORR_DET_FLOOR = 1e-12
PSD_TOL = 1e-9
COND_MAX = 1e12


@dataclass(frozen=True)
class GaussianJoint:
    labels: tuple[str, ...]
    cov: np.ndarray

    def __post_init__(self):
        c = self.cov
        if c.shape != (len(self.labels), len(self.labels)):
            raise ValueError("covariance shape does not match labels")
        if not np.allclose(c, c.T, rtol=0, atol=1e-12 * max(1.0, np.abs(c).max())):
            raise ValueError("covariance is not symmetric")
        c.setflags(write=False)

    def index(self, names: Iterable[str]) -> list[int]:
        out = []
        for n in names:
            try:
                out.append(self.labels.index(n))
            except ValueError:
                raise UnknownLabel(f"{n!r} not in joint law {self.labels}") from None
        return out

    def sub(self, rows: Sequence[str], cols: Sequence[str] | None = None) -> np.ndarray:
        r = self.index(rows)
        c = r if cols is None else self.index(cols)
        return self.cov[np.ix_(r, c)]

    def var(self, name: str) -> float:
        i = self.index([name])[0]
        return float(self.cov[i, i])

    def covariance(self, a: str, b: str) -> float:
        i, j = self.index([a, b])
        return float(self.cov[i, j])

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        n = len(self.labels)
        return all(linalg.det(self.cov[:m, :m]) >= -tol for m in range(1, n + 1))


@dataclass(frozen=True)
class MmseSolution:
    coefficients: np.ndarray
    mmse: float


def _mixing(p: SystemParams, scheme) -> tuple[list[str], np.ndarray, dict[str, np.ndarray]]:
    if isinstance(scheme, SchemeIIIParams):
        sigma_e2 = p.sigma_v2 * 2.0 ** (-2.0 * scheme.R)
        base = ["X", "S", "Vstar", "E", "W", "Wp"]
        var = np.array([p.P, p.Q, p.sigma_v2 - sigma_e2, sigma_e2, p.N1, p.N2])
        a, k = scheme.alpha, scheme.k
        derived = {
            "V": [0, 0, 1, 1, 0, 0],
            "U": [1, a, 0, k, 0, 0],
            "Y": [1, 1, 0, 0, 1, 0],
            "Z": [1, 1, 0, 0, 0, 1],
        }
    elif isinstance(scheme, SchemeIParams):
        base = ["X", "S", "V", "W", "Wp"]
        var = np.array([p.P, p.Q, p.sigma_v2, p.N1, p.N2])
        a, k = scheme.alpha, scheme.k
        derived = {
            "U": [1, a, k, 0, 0],
            "Y": [1, 1, 0, 1, 0],
            "Z": [1, 1, 0, 0, 1],
        }
    else:
        raise TypeError(f"unsupported scheme parameters: {scheme!r}")
    return base, var, {n: np.asarray(r, dtype=float) for n, r in derived.items()}


def assemble_joint(p: SystemParams, scheme: SchemeIParams | SchemeIIIParams) -> GaussianJoint:
    """Joint covariance of base variables (X, S, V or V*/E, W, W') and U, Y, Z.

    Variables are ordered base-first, then the derived ones.
    """
    base, var, derived = _mixing(p, scheme)
    labels = list(base) + list(derived)
    rows = [np.eye(len(base))[i] for i in range(len(base))] + list(derived.values())
    a = np.vstack(rows)
    cov = (a * var) @ a.T
    return GaussianJoint(tuple(labels), 0.5 * (cov + cov.T))


def mutual_information(j: GaussianJoint, group_a: Sequence[str], group_b: Sequence[str]) -> float:
    """I(A; B) in bits for jointly Gaussian groups, via log-determinants."""
    group_a, group_b = list(group_a), list(group_b)
    if not group_a or not group_b:
        raise ValueError("groups must be nonempty")
    if set(group_a) & set(group_b):
        raise ValueError("groups must be disjoint")
    j.index(group_a + group_b)
    # Degenerate (constant) members carry no information, e.g. S when Q = 0.
    group_a = [g for g in group_a if j.var(g) > 0]
    group_b = [g for g in group_b if j.var(g) > 0]
    if not group_a or not group_b:
        return 0.0
    d_a = linalg.det(j.sub(group_a))
    d_b = linalg.det(j.sub(group_b))
    sab = j.sub(group_a + group_b)
    d_ab = linalg.det(sab)
    corr_det = d_ab / float(np.prod(np.diag(sab)))
    if d_ab <= DET_FLOOR or corr_det <= CORR_DET_FLOOR or d_a <= 0 or d_b <= 0:
        raise SingularCovariance(f"joint covariance of {group_a + group_b} is singular")
    return 0.5 * (math.log2(d_a) + math.log2(d_b) - math.log2(d_ab))


def linear_mmse(j: GaussianJoint, target: str, observations: Sequence[str]) -> MmseSolution:
    """Best linear estimate of ``target`` from ``observations`` (zero-mean)."""
    observations = list(observations)
    lam = j.sub(observations)
    gam = j.sub(observations, [target])[:, 0]
    if linalg.cond1(lam) >= COND_MAX:
        raise SingularCovariance(f"observation covariance of {observations} is singular")
    coef = linalg.solve(lam, gam)
    prior = j.var(target)
    mmse = prior - float(gam @ coef)
    return MmseSolution(coef, min(max(mmse, 0.0), prior))


def estimator_mse(j: GaussianJoint, target: str, observations: Sequence[str], coefficients) -> float:
    """E[(target - c . obs)^2] for arbitrary (not necessarily optimal) weights."""
    c = np.asarray(coefficients, dtype=float)
    observations = list(observations)
    lam = j.sub(observations)
    gam = j.sub(observations, [target])[:, 0]
    return float(j.var(target) - 2.0 * c @ gam + c @ lam @ c)
