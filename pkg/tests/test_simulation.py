import json

import numpy as np
import pytest

from secure_hda import kernels, _kernels_py
from secure_hda.core import (
    InfeasibleWithoutOverride,
    MismatchParams,
    ParamError,
    SchemeIParams,
)
from secure_hda.robustness import scheme1_mismatch
from secure_hda.simulation import SimConfig, empirical_mi_check, sample_joint, simulate_scheme


def test_scheme1_optimal_matches_closed_form(mid):
    rep = simulate_scheme(SimConfig(10**6, 42), mid)
    assert rep.closed_form_D == 0.5
    assert abs(rep.z_score) <= 3
    assert rep.z_score == pytest.approx((rep.empirical_D - 0.5) / rep.standard_error)
    assert rep.standard_error > 0


def test_no_embedding_gives_source_variance(mid):
    cfg = SimConfig(200_000, 7, params=SchemeIParams(0.5, 0.0), force=True)
    rep = simulate_scheme(cfg, mid)
    assert rep.closed_form_D == mid.sigma_v2
    assert abs(rep.empirical_D - mid.sigma_v2) <= 3 * rep.standard_error


def test_infeasible_needs_force(mid):
    with pytest.raises(InfeasibleWithoutOverride):
        simulate_scheme(SimConfig(10_000, 1, params=SchemeIParams(0.5, 0.0)), mid)


def test_mismatch_matches_closed_form(hp20):
    m = MismatchParams(0.01, 1e-4)
    rep = simulate_scheme(SimConfig(10**6, 11, mismatch=m), hp20)
    assert rep.closed_form_D == pytest.approx(scheme1_mismatch(hp20, m), rel=1e-15)
    assert abs(rep.z_score) <= 3


@pytest.mark.parametrize("scheme,rate,mismatch", [
    ("hda2", 1.0, None),
    ("hda3", 0.5, None),
    ("hda2", 1.0, MismatchParams(0.01, 1e-4)),
    ("hda3", 0.5, MismatchParams(0.01, 1e-4)),
])
def test_other_schemes(hp20, scheme, rate, mismatch):
    rep = simulate_scheme(SimConfig(500_000, 5, scheme, rate=rate, mismatch=mismatch), hp20)
    assert abs(rep.z_score) <= 3


def test_determinism_and_partitioning(mid):
    a = simulate_scheme(SimConfig(300_001, 99), mid)
    b = simulate_scheme(SimConfig(300_001, 99), mid)
    c = simulate_scheme(SimConfig(300_001, 99, workers=3), mid)
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict()) == json.dumps(c.to_dict())
    d = simulate_scheme(SimConfig(300_001, 100), mid)
    assert d.empirical_D != a.empirical_D


def test_covariances_within_five_se(hp20):
    rep = simulate_scheme(SimConfig(400_000, 3, "hda3", rate=0.5), hp20)
    for chk in rep.empirical_cov_checks:
        assert chk["max_abs_dev"] <= 5 * chk["standard_error"], chk


def test_config_validation():
    with pytest.raises(ParamError):
        SimConfig(10, 1)
    with pytest.raises(ParamError):
        SimConfig(10_000, -1)
    with pytest.raises(ParamError):
        SimConfig(10_000, 1, scheme="separation")


def test_sample_joint_labels(mid):
    exact, emp = sample_joint(SimConfig(50_000, 2), mid)
    assert exact.labels == emp.labels
    assert set(exact.labels) >= {"X", "S", "V", "U", "Y", "Z"}


def test_mi_check(mid):
    small = dict((n, (c, s)) for n, c, s in empirical_mi_check(SimConfig(10_000, 8), mid))
    big = dict((n, (c, s)) for n, c, s in empirical_mi_check(SimConfig(10**6, 8), mid))
    assert small["I(X;S)"][0] == 0.0
    assert abs(big["I(X;S)"][1]) < 10 / 10**6 ** 0.5
    dev_small = sum(abs(c - s) for c, s in small.values())
    dev_big = sum(abs(c - s) for c, s in big.values())
    assert dev_big < dev_small
    # At the optimum I(U;Y) = I(U;SV) exactly; the sampled slack should be ~0.
    slack = big["I(U;Y)"][1] - big["I(U;SV)"][1]
    assert abs(slack) < 3e-3
    assert big["I(U;Z)"][1] < big["I(U;SV)"][1]


def test_backends_agree(mid, monkeypatch):
    rng = np.random.default_rng(0)
    z = rng.standard_normal((5, 10_001))
    c = rng.standard_normal(5)
    s2, s4 = kernels.linear_error_moments(z, c)
    r2, r4 = _kernels_py.linear_error_moments(z, c)
    assert s2 == pytest.approx(r2, rel=1e-12)
    assert s4 == pytest.approx(r4, rel=1e-12)
    native = simulate_scheme(SimConfig(100_000, 4), mid)
    monkeypatch.setattr(kernels, "linear_error_moments", _kernels_py.linear_error_moments)
    fallback = simulate_scheme(SimConfig(100_000, 4), mid)
    assert native.empirical_D == pytest.approx(fallback.empirical_D, rel=1e-12)


def test_kernel_shape_check():
    with pytest.raises(ValueError):
        kernels.linear_error_moments(np.zeros((3, 4)), np.zeros(2))
