import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import laguerre_series, laguerre_series_mass
from ptsusy.errors import EvaluationError
from ptsusy.special import (
    first_derivative,
    integrate_modulus_squared,
    laguerre,
    laguerre_deriv,
    second_derivative,
)

bounded = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def test_laguerre_seed():
    assert laguerre(0, 0.7 - 2j, 3 + 1j) == 1


def test_laguerre_first_step():
    assert laguerre(1, -0.3, -0.25) == pytest.approx(0.95, abs=1e-15)


def test_laguerre_second_degree_against_series():
    # frozen from the power-series oracle
    assert laguerre_series(2, -0.3, -0.25) == pytest.approx(1.05125, abs=1e-14)
    assert laguerre(2, -0.3, -0.25) == pytest.approx(1.05125, abs=1e-14)


def test_laguerre_broadcasts():
    z = np.array([0.1, -0.25 + 1j, 2j])
    vals = laguerre(4, 0.3j, z)
    assert vals.shape == (3,)
    assert vals[1] == pytest.approx(laguerre(4, 0.3j, -0.25 + 1j))


def test_laguerre_rejects_negative_degree():
    with pytest.raises(ValueError):
        laguerre(-1, 0, 0)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 10), a=bounded, z=bounded)
def test_recurrence_matches_series(n, a, z):
    ref, mass = laguerre_series(n, a, z), laguerre_series_mass(n, a, z)
    got = complex(laguerre(n, a, z))
    # relative 1e-10; the mass floor only matters when the sum cancels to rounding
    assert abs(got - ref) <= max(1e-10 * abs(ref), 1e-13 * mass)


@pytest.mark.parametrize(
    "n,a,z,expected",
    [(0, 0.4, 1.0, 0.0), (1, 0.4, 1.0, -1.0), (1, 2j, -3 + 1j, -1.0), (2, -0.3, -0.25, -1.95)],
)
def test_laguerre_deriv_values(n, a, z, expected):
    assert laguerre_deriv(n, a, z) == pytest.approx(expected, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(0, 10), a=bounded, z=bounded)
def test_laguerre_deriv_matches_finite_difference(n, a, z):
    f = lambda t: complex(laguerre(n, a, z + t))
    est = first_derivative(f, 0.0)
    exact = complex(laguerre_deriv(n, a, z))
    # plus a cancellation floor for the exactly-differentiated low degrees
    floor = 1e-11 * max(1.0, abs(f(0.0)))
    assert abs(exact - est.value) <= 10 * est.error_estimate + floor


def test_second_derivative_quadratic():
    est = second_derivative(lambda x: x * x, 1.0, 1e-3)
    assert est.value == pytest.approx(2, abs=1e-9)
    assert est.error_estimate < 1e-9


def test_second_derivative_oscillatory():
    est = second_derivative(lambda x: cmath.exp(1j * x), 0.0, 1e-3)
    assert est.value == pytest.approx(-1, abs=1e-8)
    assert est.error_estimate < 1e-6


def test_second_derivative_constant():
    est = second_derivative(lambda x: 3 - 2j, 0.7)
    assert est.value == 0
    assert est.error_estimate == 0


@settings(max_examples=200, deadline=None)
@given(
    c=st.lists(st.floats(-2, 2), min_size=4, max_size=4),
    x=st.floats(-2, 2),
)
def test_second_derivative_exact_on_cubics(c, x):
    f = lambda t: c[0] + c[1] * t + c[2] * t**2 + c[3] * t**3
    est = second_derivative(f, x, 1e-2)
    assert abs(est.value - (2 * c[2] + 6 * c[3] * x)) <= 1e-9


def test_second_derivative_rejects_nonfinite():
    with pytest.raises(EvaluationError):
        second_derivative(lambda x: 1 / x if x else float("nan"), 0.0)


def test_second_derivative_rejects_bad_step():
    with pytest.raises(ValueError):
        second_derivative(lambda x: x, 0.0, 0.0)


def test_integrate_zero():
    assert integrate_modulus_squared(lambda x: 0 * x, 0, 1, 10) == 0


def test_integrate_constant():
    assert integrate_modulus_squared(lambda x: np.ones_like(x), 0, 1, 1000) == pytest.approx(1, abs=1e-12)


def test_integrate_gaussian():
    val = integrate_modulus_squared(lambda x: np.exp(-x**2 / 2), -10, 10, 4000)
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_integrate_scalar_callable():
    val = integrate_modulus_squared(lambda x: complex(math.cos(x), math.sin(x)), 0, 2, 50)
    assert val == pytest.approx(2, rel=1e-12)


def test_integrate_rejects_nonfinite():
    with pytest.raises(EvaluationError):
        with np.errstate(divide="ignore"):
            integrate_modulus_squared(lambda x: 1 / x, -1, 1, 2)


@pytest.mark.parametrize("a,b,n", [(1, 0, 10), (0, 1, 1)])
def test_integrate_rejects_bad_input(a, b, n):
    with pytest.raises(ValueError):
        integrate_modulus_squared(lambda x: x, a, b, n)
