"""Seeded Monte Carlo check of the closed-form distortions.

Decoding of the auxiliary codeword is assumed ideal: the estimator sees U
exactly, and X is drawn independent of (S, V) as the typical-codeword
argument implies. Samples are produced in fixed-size chunks; chunk ``i``
draws from ``PCG64(SeedSequence(seed, spawn_key=(i,)))`` so the result does
not depend on how chunks are distributed over workers, and partial sums are
reduced in chunk order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .core import (
    InfeasibleWithoutOverride,
    MismatchParams,
    ParamError,
    SchemeIIIParams,
    SchemeIParams,
    SystemParams,
    validate_mismatch,
)
from .gaussian import GaussianJoint, _mixing, assemble_joint, mutual_information
from .robustness import (
    scheme1_design,
    scheme1_mismatch,
    scheme2_mismatch,
    scheme3_mismatch,
)
from .schemes import (
    feasibility,
    scheme1_distortion,
    scheme1_lambdas,
    scheme1_optimal,
    scheme2_configure,
    scheme2_hybrid_params,
    scheme3_distortion,
    scheme3_eq_params,
    scheme3_lambdas,
)

CHUNK = 1 << 17
SIM_SCHEMES = ("hda1", "hda2", "hda3")


@dataclass(frozen=True)
class SimConfig:
    n_samples: int
    seed: int
    scheme: str = "hda1"
    params: SchemeIParams | SchemeIIIParams | None = None
    rate: float | None = None
    mismatch: MismatchParams | None = None
    force: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1000:
            raise ParamError("n_samples must be >= 1000")
        if not 0 <= self.seed < 2**64:
            raise ParamError("seed must be a 64-bit unsigned integer")
        if self.scheme not in SIM_SCHEMES:
            raise ParamError(f"scheme must be one of {SIM_SCHEMES}, got {self.scheme!r}")


@dataclass(frozen=True)
class SimReport:
    scheme: str
    n_samples: int
    seed: int
    empirical_D: float
    closed_form_D: float
    standard_error: float
    z_score: float
    empirical_cov_checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class _Plan:
    """Everything needed to draw samples and score one estimator."""

    law_params: SystemParams
    scheme_params: SchemeIParams | SchemeIIIParams
    observations: tuple[str, ...]
    coefficients: np.ndarray
    closed_form_D: float
    constraints_ok: bool


def _plan(cfg: SimConfig, p: SystemParams) -> _Plan:
    m = cfg.mismatch
    if m is not None:
        validate_mismatch(p, m)
        if cfg.params is not None:
            raise ParamError("mismatch simulation uses the designed parameters; omit params")
    actual = p if m is None else p.replace(N1=m.N1_actual)
    design = p if m is None else p.replace(N1=m.Nd)

    if cfg.scheme == "hda1":
        sp = cfg.params or (scheme1_optimal(design) if m is None else scheme1_design(p, m.Nd))
        if not isinstance(sp, SchemeIParams):
            raise ParamError("hda1 needs SchemeIParams")
        ok = feasibility(design, sp).feasible
        closed = scheme1_distortion(p, sp).closed_form_D if m is None else scheme1_mismatch(p, m)
        return _Plan(actual, sp, ("Y", "U"), np.array(scheme1_lambdas(actual, sp)), closed, ok)

    if cfg.scheme == "hda2":
        if cfg.rate is None:
            raise ParamError("hda2 needs a digital rate")
        if cfg.params is not None:
            raise ParamError("hda2 parameters are fixed by the rate")
        # The hybrid layer is Scheme I on (sigma_e2, Ph, Q + P1); the digital index is ideal.
        cfg2 = scheme2_configure(design, cfg.rate)
        hp = scheme2_hybrid_params(design, cfg2)
        sp = SchemeIParams(cfg2.alphah, cfg2.k)
        ok = feasibility(hp, sp).feasible
        law = hp.replace(N1=actual.N1)
        if m is None:
            closed = scheme1_distortion(hp, sp).closed_form_D
        else:
            closed = scheme2_mismatch(p, m, cfg.rate, digital_as_interference=True)
        return _Plan(law, sp, ("Y", "U"), np.array(scheme1_lambdas(law, sp)), closed, ok)

    if cfg.params is not None:
        sp = cfg.params
        if not isinstance(sp, SchemeIIIParams):
            raise ParamError("hda3 needs SchemeIIIParams")
    else:
        if cfg.rate is None:
            raise ParamError("hda3 needs a quantization rate")
        sp = scheme3_eq_params(design, cfg.rate)
    rep = scheme3_distortion(design, sp)
    closed = rep.closed_form_D if m is None else scheme3_mismatch(p, m, sp.R)
    coef = scheme3_lambdas(actual, sp)
    return _Plan(actual, sp, ("Vstar", "U", "Y"), coef, closed, rep.constraints_ok)


def _error_coefficients(plan: _Plan) -> tuple[list[str], np.ndarray, np.ndarray, dict]:
    base, var, derived = _mixing(plan.law_params, plan.scheme_params)
    rows = {b: np.eye(len(base))[i] for i, b in enumerate(base)}
    rows.update(derived)
    target = rows["V"]
    err = target - sum(c * rows[o] for c, o in zip(plan.coefficients, plan.observations))
    # Scale to unit-variance draws: err . (sqrt(var) * z).
    return base, np.sqrt(var), err * np.sqrt(var), rows


def _chunk_sizes(n: int) -> list[int]:
    full, rest = divmod(n, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _draw(seed: int, index: int, rows: int, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
    return rng.standard_normal((rows, size))


def _run_chunks(seed: int, sizes: list[int], rows: int, coef: np.ndarray, workers: int):
    def one(i):
        z = _draw(seed, i, rows, sizes[i])
        s2, s4 = kernels.linear_error_moments(z, coef)
        return s2, s4, z @ z.T

    idx = range(len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(one, idx))
    else:
        parts = [one(i) for i in idx]
    s2 = s4 = 0.0
    gram = np.zeros((rows, rows))
    for a, b, g in parts:
        s2 += a
        s4 += b
        gram += g
    return s2, s4, gram


def sample_joint(cfg: SimConfig, p: SystemParams) -> tuple[GaussianJoint, GaussianJoint]:
    """(closed-form joint, sample-covariance joint) over base and derived labels."""
    plan = _plan(cfg, p)
    base, scale, _, rows = _error_coefficients(plan)
    sizes = _chunk_sizes(cfg.n_samples)
    _, _, gram = _run_chunks(cfg.seed, sizes, len(base), np.zeros(len(base)), cfg.workers)
    labels = list(rows)
    a = np.vstack([rows[l] for l in labels]) * scale
    emp = a @ (gram / cfg.n_samples) @ a.T
    exact = assemble_joint(plan.law_params, plan.scheme_params)
    order = exact.index(labels)
    return (GaussianJoint(tuple(labels), exact.cov[np.ix_(order, order)].copy()),
            GaussianJoint(tuple(labels), 0.5 * (emp + emp.T)))


def simulate_scheme(cfg: SimConfig, p: SystemParams) -> SimReport:
    plan = _plan(cfg, p)
    if not plan.constraints_ok and not cfg.force:
        raise InfeasibleWithoutOverride(
            "scheme parameters violate the decodability/secrecy constraints; pass force=True"
        )
    base, scale, coef, rows = _error_coefficients(plan)
    sizes = _chunk_sizes(cfg.n_samples)
    s2, s4, gram = _run_chunks(cfg.seed, sizes, len(base), coef, cfg.workers)
    n = cfg.n_samples
    mean = s2 / n
    var_sq = max((s4 / n - mean * mean) * n / (n - 1), 0.0)
    se = math.sqrt(var_sq / n)
    if se == 0.0:
        se = math.ulp(max(mean, 1.0))

    labels = list(rows)
    a = np.vstack([rows[l] for l in labels]) * scale
    emp = a @ (gram / n) @ a.T
    exact = assemble_joint(plan.law_params, plan.scheme_params)
    ex = exact.cov[np.ix_(exact.index(labels), exact.index(labels))]
    checks = []
    for i in range(len(labels)):
        for j in range(i, len(labels)):
            pair_se = math.sqrt((ex[i, i] * ex[j, j] + ex[i, j] ** 2) / n)
            checks.append({
                "name": f"{labels[i]},{labels[j]}",
                "max_abs_dev": float(abs(emp[i, j] - ex[i, j])),
                "standard_error": pair_se,
            })
    return SimReport(cfg.scheme, n, cfg.seed, mean, plan.closed_form_D, se,
                     (mean - plan.closed_form_D) / se, checks)


def _mi_constraints(scheme: str) -> list[tuple[str, list[str], list[str]]]:
    side = ["S", "V"] if scheme in ("hda1", "hda2") else ["S", "E"]
    return [
        ("I(X;S)", ["X"], ["S"]),
        ("I(U;Y)", ["U"], ["Y"]),
        (f"I(U;{''.join(side)})", ["U"], side),
        ("I(U;Z)", ["U"], ["Z"]),
    ]


def empirical_mi_check(cfg: SimConfig, p: SystemParams) -> list[tuple[str, float, float]]:
    """Gaussian log-det MI from the sample covariance next to the exact value."""
    exact, emp = sample_joint(cfg, p)
    return [(name, mutual_information(exact, a, b), mutual_information(emp, a, b))
            for name, a, b in _mi_constraints(cfg.scheme)]
