import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from secure_hda import linalg
from secure_hda.core import SingularCovariance


def _mp_det(a):
    # Exact rational Bareiss elimination on the float entries.
    m = sympy.Matrix([[sympy.Rational(x) for x in row] for row in a.tolist()])
    return float(m.det(method="bareiss"))


@settings(max_examples=200)
@given(arrays(np.float64, (5, 5), elements=st.floats(-3, 3)))
def test_det_matches_arbitrary_precision(a):
    ref = _mp_det(a)
    assert linalg.det(a) == pytest.approx(ref, rel=1e-9, abs=1e-9)


@settings(max_examples=100)
@given(arrays(np.float64, (4, 4), elements=st.floats(-2, 2)))
def test_inverse_on_spd(a):
    spd = a @ a.T + np.eye(4)
    assert np.allclose(linalg.inv(spd) @ spd, np.eye(4), atol=1e-10)
    b = np.arange(4.0)
    assert np.allclose(spd @ linalg.solve(spd, b), b, atol=1e-10)


def test_singular():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert linalg.det(a) == 0.0
    with pytest.raises(SingularCovariance):
        linalg.inv(a)
    assert linalg.cond1(a) == np.inf


def test_pivoting_needed():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert linalg.det(a) == -1.0
    assert np.array_equal(linalg.inv(a), a)
