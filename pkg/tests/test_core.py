import json
import math

import pytest
from hypothesis import given, strategies as st

from secure_hda.core import (
    DegradednessViolation,
    NonPositiveParam,
    ParamError,
    SchemeIIIParams,
    SystemParams,
    db_to_linear,
    linear_to_db,
    load_params,
    params_from_dict,
    validate_params,
)


def test_hp20_params_valid(hp20):
    assert validate_params(hp20) is hp20


def test_equal_noise_is_not_degraded():
    with pytest.raises(DegradednessViolation):
        validate_params(SystemParams(P=1, Q=0, N1=1, N2=1))


def test_zero_power_rejected():
    with pytest.raises(NonPositiveParam):
        validate_params(SystemParams(P=0, Q=2, N1=0.01, N2=1))


@pytest.mark.parametrize("field", ["rho", "i_eps"])
def test_fixed_fields(field):
    p = SystemParams(1, 1, 1, 2).replace(**{field: 0.5})
    with pytest.raises(ParamError):
        validate_params(p)


def test_db_conversions():
    assert db_to_linear(20) == pytest.approx(100.0, rel=1e-15)
    assert db_to_linear(0) == 1.0
    assert linear_to_db(db_to_linear(37.3)) == pytest.approx(37.3, rel=1e-12)
    with pytest.raises(NonPositiveParam):
        linear_to_db(0.0)


def test_negative_rate_rejected():
    with pytest.raises(NonPositiveParam):
        SchemeIIIParams(0.5, 0.5, -0.1)


finite = st.floats(min_value=-5, max_value=5, allow_nan=False)


@given(P=finite, Q=finite, N1=finite, N2=finite, s=finite)
def test_validation_is_exact(P, Q, N1, N2, s):
    p = SystemParams(P, Q, N1, N2, s)
    ok = P > 0 and Q >= 0 and N1 > 0 and N2 > 0 and s > 0 and N2 > N1
    if ok:
        assert validate_params(p) is p
    else:
        with pytest.raises(ParamError):
            validate_params(p)


def test_params_file_snr_alternates(tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"P": 1, "Q": 2, "N2": 1, "sigma_v2": 1, "snr1_db": 20, "snrd_db": 10}))
    p, nd = load_params(f)
    assert p.N1 == pytest.approx(0.01, rel=1e-14)
    assert nd == pytest.approx(0.1, rel=1e-14)


def test_params_file_requires_noise():
    with pytest.raises(ParamError):
        params_from_dict({"P": 1, "Q": 1, "N2": 1})
    assert math.isclose(params_from_dict({"P": 2, "N1": 1, "snr2_db": 0})[0].N2, 2.0)
