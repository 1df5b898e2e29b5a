import math

import mpmath
import numpy as np
import pytest

from secure_hda.core import SchemeIIIParams, SchemeIParams, SingularCovariance, UnknownLabel
from secure_hda.gaussian import assemble_joint, estimator_mse, linear_mmse, mutual_information

from conftest import random_params


def test_u_equals_x_when_alpha_k_zero(hp20):
    j = assemble_joint(hp20, SchemeIParams(0.0, 0.0))
    assert j.var("U") == hp20.P
    assert j.covariance("U", "Y") == hp20.P


def test_hp20_covariances(hp20):
    j = assemble_joint(hp20, SchemeIParams(0.990099, 0.995037))
    assert j.var("Y") == pytest.approx(3.01, abs=1e-12)
    assert j.covariance("U", "Y") == pytest.approx(2.980198, abs=1e-12)
    assert j.covariance("Y", "Z") == pytest.approx(3.0, abs=1e-12)
    assert j.var("U") == pytest.approx(1 + 0.990099**2 * 2 + 0.995037**2, abs=1e-12)
    assert j.is_psd()


def test_scheme3_rate_zero_matches_scheme1(hp20):
    j1 = assemble_joint(hp20, SchemeIParams(0.7, 0.4))
    j3 = assemble_joint(hp20, SchemeIIIParams(0.7, 0.4, 0.0))
    common = ["X", "S", "V", "W", "Wp", "U", "Y", "Z"]
    np.testing.assert_array_equal(j1.sub(common), j3.sub(common))
    assert j3.covariance("E", "V") == hp20.sigma_v2


def test_unknown_label(hp20):
    j = assemble_joint(hp20, SchemeIParams(0.5, 0.5))
    with pytest.raises(UnknownLabel):
        j.sub(["E"])
    with pytest.raises(UnknownLabel):
        mutual_information(j, ["U"], ["Vstar"])


def test_independent_mi_is_zero(hp20):
    j = assemble_joint(hp20, SchemeIParams(0.5, 0.5))
    assert mutual_information(j, ["X"], ["S"]) == 0.0
    assert mutual_information(j, ["V"], ["W", "Wp"]) == 0.0


def test_mi_u_given_side_info(rng):
    for _ in range(50):
        p = random_params(rng)
        a, k = rng.uniform(0, 1), rng.uniform(0, 2)
        j = assemble_joint(p, SchemeIParams(a, k))
        ref = 0.5 * math.log2((p.P + a * a * p.Q + k * k * p.sigma_v2) / p.P)
        assert mutual_information(j, ["U"], ["S", "V"]) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_mi_against_arbitrary_precision():
    mpmath.mp.dps = 40
    P = Q = N1 = mpmath.mpf(1)
    a, k2 = mpmath.mpf("0.5"), mpmath.mpf("0.5")
    var_u = P + a * a * Q + k2
    var_y = P + Q + N1
    c = P + a * Q
    ref = float(mpmath.log(var_u * var_y / (var_u * var_y - c * c), 2) / 2)
    from secure_hda.core import SystemParams

    j = assemble_joint(SystemParams(1, 1, 1, 2, 1), SchemeIParams(0.5, math.sqrt(0.5)))
    assert mutual_information(j, ["U"], ["Y"]) == pytest.approx(ref, rel=1e-12)


def test_mi_symmetry_and_sign(rng):
    labels = ["X", "S", "V", "W", "Wp", "U", "Y", "Z"]
    for _ in range(200):
        p = random_params(rng)
        j = assemble_joint(p, SchemeIParams(rng.uniform(0, 1), rng.uniform(0.1, 2)))
        perm = list(rng.permutation(labels))
        na = int(rng.integers(1, 3))
        nb = int(rng.integers(1, 3))
        A, B = perm[:na], perm[na:na + nb]
        try:
            ab = mutual_information(j, A, B)
        except SingularCovariance:
            continue
        assert ab == pytest.approx(mutual_information(j, B, A), abs=1e-12)
        assert ab >= -1e-9


def test_mi_singular_group(hp20):
    j = assemble_joint(hp20, SchemeIParams(0.5, 0.5))
    with pytest.raises(SingularCovariance):
        mutual_information(j, ["U"], ["X", "S", "V"])


def test_closed_form_mi_agreement(rng):
    for _ in range(1000):
        p = random_params(rng)
        a, k = rng.uniform(0, 1), rng.uniform(0, 2)
        j = assemble_joint(p, SchemeIParams(a, k))
        P, Q, N1, N2, s2 = p.P, p.Q, p.N1, p.N2, p.sigma_v2
        vu = P + a * a * Q + k * k * s2
        c = P + a * Q
        i_uy = 0.5 * math.log2(vu * (P + Q + N1) / (vu * (P + Q + N1) - c * c))
        i_uz = 0.5 * math.log2(vu * (P + Q + N2) / (vu * (P + Q + N2) - c * c))
        i_usv = 0.5 * math.log2(vu / P)
        assert mutual_information(j, ["U"], ["Y"]) == pytest.approx(i_uy, rel=1e-9)
        assert mutual_information(j, ["U"], ["Z"]) == pytest.approx(i_uz, rel=1e-9)
        assert mutual_information(j, ["U"], ["S", "V"]) == pytest.approx(i_usv, rel=1e-9)


def test_mmse_trivial_cases(hp20):
    j = assemble_joint(hp20, SchemeIParams(0.5, 0.5))
    sol = linear_mmse(j, "V", ["V"])
    assert sol.coefficients.tolist() == [1.0] and sol.mmse == 0.0
    sol = linear_mmse(j, "V", ["W"])
    assert sol.coefficients.tolist() == [0.0] and sol.mmse == hp20.sigma_v2


def test_mmse_orthogonality_and_bounds(rng):
    for _ in range(200):
        p = random_params(rng)
        j = assemble_joint(p, SchemeIIIParams(rng.uniform(0, 1), rng.uniform(0, 2), rng.uniform(0.05, 2)))
        obs = ["Vstar", "U", "Y"]
        sol = linear_mmse(j, "V", obs)
        resid = j.sub(obs, ["V"])[:, 0] - j.sub(obs) @ sol.coefficients
        assert np.max(np.abs(resid)) < 1e-9
        assert 0 <= sol.mmse <= j.var("V")
        assert estimator_mse(j, "V", obs, sol.coefficients) == pytest.approx(sol.mmse, abs=1e-12)


def test_mmse_singular_observations(hp20):
    j = assemble_joint(hp20, SchemeIParams(0.5, 0.5))
    with pytest.raises(SingularCovariance):
        linear_mmse(j, "V", ["X", "S", "V", "U"])
