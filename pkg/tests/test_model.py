import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import v_minus_at_origin
from ptsusy.errors import ContourSingularityError, DegenerateClosureError
from ptsusy.model import (
    AnsatzConfig,
    ModelParams,
    ces_closure,
    contour_point,
    partner_minus,
    potential_from_W,
    pt_defect,
    pt_reflect,
    superpotential,
    superpotential_deriv,
    v_base,
    v_minus,
    v_plus,
)
from ptsusy.special import first_derivative

ALPHAS = [0.3, 0.7, 0.3j, 0.1 + 0.2j]
rng = np.random.default_rng(2024)
XS = rng.uniform(-6, 6, 100)


@pytest.mark.parametrize("x,expected", [(0, -0.5j), (1, 1 - 0.5j), (-1, -1 - 0.5j)])
def test_contour_point(x, expected):
    assert contour_point(x, 0.5) == expected


@pytest.mark.parametrize(
    "q,alpha,lam,g,beta",
    [
        (1, 0.3, 0.2, 1.4285714285714286, -0.6),
        (-1, 0.3, 0.8, 0.7692307692307692, 0.6),
        (1, 0.3j, 0.5 - 0.3j, 0.9174311926605504 + 0.2752293577981651j, -0.6j),
    ],
)
def test_ces_closure(q, alpha, lam, g, beta):
    c = ces_closure(q, alpha)
    assert c.lam == pytest.approx(lam, abs=1e-15)
    assert c.g == pytest.approx(g, abs=1e-15)
    assert c.beta == pytest.approx(beta, abs=1e-15)
    assert c.g * (1 - q * alpha) == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("q,alpha", [(1, 1.0), (-1, -1.0)])
def test_closure_degenerate(q, alpha):
    with pytest.raises(DegenerateClosureError):
        ces_closure(q, alpha)
    with pytest.raises(DegenerateClosureError):
        ModelParams(alpha, 0.5, q)
    with pytest.raises(DegenerateClosureError):
        partner_minus(alpha, 0.5, q, 0.3)


def test_quasi_parity_validated():
    with pytest.raises(ValueError):
        ces_closure(0, 0.3)


def test_contour_through_pole_rejected():
    # real alpha with 1 - q alpha > 0 puts a pole on the contour when epsilon = sqrt(1 - q alpha)
    with pytest.raises(ContourSingularityError):
        ModelParams(0.3, np.sqrt(0.7), 1)
    ModelParams(0.3, np.sqrt(0.7), -1)


def test_partner_minus_flags_hit_point_only():
    eps = np.sqrt(0.7)
    assert np.isfinite(partner_minus(0.3, eps, 1, 0.5))
    with pytest.raises(ContourSingularityError):
        partner_minus(0.3, eps, 1, 0.0)


def test_superpotential_harmonic():
    cfg = AnsatzConfig(lam=0, epsilon=0.5)
    assert superpotential(cfg, 0) == pytest.approx(-0.5j)
    assert superpotential_deriv(cfg, 1.3) == 1


def test_superpotential_centrifugal():
    cfg = AnsatzConfig(lam=0.2, epsilon=0.5)
    assert superpotential(cfg, 0) == pytest.approx(-0.1j, abs=1e-15)
    assert superpotential_deriv(cfg, 0) == pytest.approx(1.8, abs=1e-15)


def test_superpotential_with_coupling():
    # -0.1i - i/0.45 = -209/90 i by hand
    cfg = AnsatzConfig(lam=0.2, epsilon=0.5, couplings=(1 / 0.7,))
    assert superpotential(cfg, 0) == pytest.approx(-209 / 90 * 1j, abs=1e-14)


def test_ansatz_pole_rejected():
    with pytest.raises(ContourSingularityError):
        AnsatzConfig(lam=0.2, epsilon=0.5, couplings=(4.0,))


@settings(max_examples=100, deadline=None)
@given(
    lam=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    gs=st.lists(st.floats(0, 3), max_size=3),
    x=st.floats(-4, 4),
)
def test_superpotential_deriv_matches_finite_difference(lam, gs, x):
    try:
        cfg = AnsatzConfig(lam=lam, epsilon=0.5, couplings=tuple(gs))
    except ContourSingularityError:
        return
    if any(abs(1 + g * (x - 0.5j) ** 2) < 0.05 for g in gs):
        return
    est = first_derivative(lambda t: complex(superpotential(cfg, t)), x)
    exact = superpotential_deriv(cfg, x)
    assert abs(exact - est.value) <= 10 * est.error_estimate + 1e-10 * max(1, abs(exact))


def test_potential_from_W_harmonic():
    cfg = AnsatzConfig(lam=0, epsilon=0.5)
    assert potential_from_W(cfg, 0, 1) == pytest.approx(0.75)
    assert potential_from_W(cfg, 0, -1) == pytest.approx(-1.25)
    with pytest.raises(ValueError):
        potential_from_W(cfg, 0, 0)


def test_v_plus_values():
    assert v_plus(0.3, 0.5, 0) == pytest.approx(6.39, abs=1e-14)
    assert v_plus(0.5, 0.5, 0) == pytest.approx(5.75, abs=1e-14)
    # -0.16/(0.75 - i) = -0.0768 - 0.1024i by hand
    assert v_plus(0.3, 0.5, 1) == pytest.approx(6.6732 - 1.1024j, abs=1e-13)


def test_v_base_values():
    assert v_base(0.3, 0.5, 0) == pytest.approx(0.39, abs=1e-14)
    assert v_base(0.3j, 0.5, 0) == pytest.approx(1.11, abs=1e-14)
    x = np.linspace(-3, 3, 7)
    assert np.allclose(v_base(0.5, 0.5, x), contour_point(x, 0.5) ** 2, atol=1e-14)
    assert np.allclose(v_plus(0.3, 0.5, x), v_base(0.3, 0.5, x) + 6, atol=1e-14)


def test_v_minus_origin():
    expected = float(v_minus_at_origin("0.3", "0.5", 1))
    assert expected == pytest.approx(-15.975432098765432, abs=1e-12)
    assert v_minus(ModelParams(0.3, 0.5, 1), 0) == pytest.approx(expected, abs=1e-12)


def test_v_minus_asymptotics():
    p = ModelParams(0.3, 0.5, -1)
    x = 1e4
    assert abs(v_minus(p, x) - contour_point(x, 0.5) ** 2 - 4) < 1e-6


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("q", [1, -1])
@pytest.mark.parametrize("sign", [1, -1])
def test_factorization_identities(alpha, q, sign):
    p = ModelParams(alpha, 0.5, q)
    lhs = potential_from_W(p.ansatz(), XS, sign) - p.closure.beta
    rhs = v_plus(alpha, 0.5, XS) if sign > 0 else v_minus(p, XS)
    assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) <= 1e-10


def test_printed_minus_form_sign_breaks_identity():
    # the grouping (4g lam - 2g - 4)/(1 + g z^2) enters W^2 - W' with a plus sign
    p = ModelParams(0.3, 0.5, 1)
    c = p.closure
    z = contour_point(XS, 0.5)
    lam, g = c.lam, c.g
    common = z**2 + lam * (lam + 1) / z**2 + 8 * g**2 * z**2 / (1 + g * z**2) ** 2 + 2 * lam + 3
    grouped = (4 * g * lam - 2 * g - 4) / (1 + g * z**2)
    direct = potential_from_W(p.ansatz(), XS, -1)
    assert np.allclose(direct, common + grouped, rtol=1e-12)
    assert not np.allclose(direct, common - grouped, rtol=1e-3)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_v_plus_q_independent(alpha):
    a = potential_from_W(ModelParams(alpha, 0.5, 1).ansatz(), XS, 1) - ces_closure(1, alpha).beta
    b = potential_from_W(ModelParams(alpha, 0.5, -1).ansatz(), XS, 1) - ces_closure(-1, alpha).beta
    assert np.max(np.abs(a - b) / np.abs(a)) <= 1e-10


@pytest.mark.parametrize("alpha", [0.3, 0.7, -0.45])
def test_pt_symmetric_for_real_alpha(alpha):
    xs = np.linspace(-4, 4, 801)
    assert pt_defect(lambda x: v_plus(alpha, 0.5, x), xs) <= 1e-12
    for q in (1, -1):
        p = ModelParams(alpha, 0.5, q)
        assert pt_defect(lambda x: v_minus(p, x), xs) <= 1e-12


def test_pt_reflect_odd_imaginary():
    f = lambda x: 1j * np.asarray(x)
    assert pt_reflect(f, 0.7) == pytest.approx(0.7j)
    assert pt_defect(f, [0.1, 2.0]) == 0


def test_imaginary_alpha_breaks_partners_and_maps_them():
    xs = np.linspace(-3, 3, 601)
    assert pt_defect(lambda x: v_plus(0.3j, 0.5, x), xs) <= 1e-12
    for q in (1, -1):
        p = ModelParams(0.3j, 0.5, q)
        assert pt_defect(lambda x: v_minus(p, x), xs) > 0.1
        image = np.conj(v_minus(p, -xs))
        assert np.max(np.abs(image - v_minus(p.with_q(-q), xs))) <= 1e-10


def test_ansatz_reduction():
    xs = np.linspace(-3, 3, 13)
    for alpha in (0.3, 0.3j):
        lam = ces_closure(1, alpha).lam
        cfg = AnsatzConfig(lam=lam, epsilon=0.5, couplings=(0.0,))
        z = contour_point(xs, 0.5)
        assert np.allclose(superpotential(cfg, xs), z + lam / z, atol=1e-14)
        assert np.allclose(potential_from_W(cfg, xs, 1), v_base(alpha, 0.5, xs) + 2 * lam + 1, atol=1e-12)


def test_params_immutable():
    p = ModelParams(0.3, 0.5, 1)
    with pytest.raises(AttributeError):
        p.alpha = 1
    assert p.with_q(1) is p
    assert p.with_q(-1).q == -1
