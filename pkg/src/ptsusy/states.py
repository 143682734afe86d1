"""Analytic eigenpairs of both partner sectors and the intertwining operators.

States are unnormalized (all leading constants are 1). Complex powers use
the principal branch; on the contour Im z = -epsilon < 0 the cut along the
negative real axis is never crossed, so every state is smooth in ``x``.

Energies are eigenvalues of -d^2/dx^2 + v, with v = v_plus or v_minus.
In that frame the minus-sector zero mode (annihilated by A) sits at
-beta = 2*q*alpha, and the remaining minus-sector levels repeat the plus
ladder 4n + 8 - 2*q*alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import (
    ModelParams,
    check_quasi_parity,
    contour_point,
    superpotential,
    superpotential_deriv,
    v_minus,
    v_plus,
)
from .special import laguerre, laguerre_deriv

SECTORS = ("plus", "minus")


@dataclass(frozen=True)
class StateLabel:
    """(sector, level, quasi-parity). Minus level 0 is the zero mode."""

    sector: str
    n: int
    q: int

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be 'plus' or 'minus', got {self.sector!r}")
        if self.n < 0:
            raise ValueError(f"level must be nonnegative, got {self.n}")
        check_quasi_parity(self.q)


@dataclass(frozen=True)
class EigenPair:
    energy: complex
    psi: Callable[[float], complex]
    psi_deriv: Callable[[float], complex]
    label: StateLabel | None = None


def energy_plus(n: int, q: int, alpha: complex) -> complex:
    return complex(4 * n + 8 - 2 * check_quasi_parity(q) * alpha)


def energy_minus(n: int, q: int, alpha: complex) -> complex:
    q = check_quasi_parity(q)
    if n == 0:
        return complex(2 * q * alpha)
    return energy_plus(n - 1, q, alpha)


def _envelope(z, power):
    return np.exp(-z**2 / 2) * np.power(z, power)


def _lam(q, alpha):
    return 0.5 - q * alpha


def psi_plus(label: StateLabel, params: ModelParams, x):
    """e^{-z^2/2} z^{1/2 - q alpha} L_n^{(-q alpha)}(z^2)."""
    q, a = label.q, params.alpha
    z = contour_point(x, params.epsilon)
    return (_envelope(z, _lam(q, a)) * laguerre(label.n, -q * a, z**2))[()]


def psi_plus_deriv(label: StateLabel, params: ModelParams, x):
    q, a = label.q, params.alpha
    lam = _lam(q, a)
    z = contour_point(x, params.epsilon)
    z2 = z**2
    lag = laguerre(label.n, -q * a, z2)
    dlag = laguerre_deriv(label.n, -q * a, z2)
    return (_envelope(z, lam) * ((-z + lam / z) * lag + 2 * z * dlag))[()]


def psi_minus_ground(q: int, params: ModelParams, x):
    """Zero mode e^{-z^2/2} z^{q alpha - 1/2} / (1 + g z^2), i.e. exp(-int W)."""
    p = params.with_q(q)
    g = p.closure.g
    z = contour_point(x, p.epsilon)
    return (_envelope(z, -_lam(q, p.alpha)) / (1 + g * z**2))[()]


def psi_minus_ground_deriv(q: int, params: ModelParams, x):
    # product rule over the three factors; deliberately not written as -W*psi
    p = params.with_q(q)
    g = p.closure.g
    s = -_lam(q, p.alpha)
    z = contour_point(x, p.epsilon)
    den = 1 + g * z**2
    env = _envelope(z, s)
    return (env * ((-z + s / z) / den - 2 * g * z / den**2))[()]


def psi_minus_excited(n_plus: int, q: int, params: ModelParams, x):
    """Minus-sector state at level ``n_plus + 1``, equal to B applied to psi_plus(n_plus).

    Closed form, using x L_n'(x) = n L_n - (n + a) L_{n-1}:

        e^{-z^2/2} z^lam [ (2z + 2gz/(1+gz^2) - 2n/z) L_n(z^2) + 2(n + a)/z L_{n-1}(z^2) ]

    with a = -q alpha, lam = a + 1/2 and L_{-1} = 0.
    """
    p = params.with_q(q)
    a = -q * p.alpha
    g = p.closure.g
    n = n_plus
    z = contour_point(x, p.epsilon)
    z2 = z**2
    bracket = (2 * z + 2 * g * z / (1 + g * z2) - 2 * n / z) * laguerre(n, a, z2)
    if n > 0:
        bracket = bracket + 2 * (n + a) / z * laguerre(n - 1, a, z2)
    return (_envelope(z, a + 0.5) * bracket)[()]


def psi_minus_excited_deriv(n_plus: int, q: int, params: ModelParams, x):
    # d/dx (B psi) = -psi'' + W' psi + W psi', with psi'' = (v_plus - E) psi
    p = params.with_q(q)
    label = StateLabel("plus", n_plus, q)
    cfg = p.ansatz()
    psi = psi_plus(label, p, x)
    dpsi = psi_plus_deriv(label, p, x)
    ddpsi = (v_plus(p.alpha, p.epsilon, x) - energy_plus(n_plus, q, p.alpha)) * psi
    return -ddpsi + superpotential_deriv(cfg, x) * psi + superpotential(cfg, x) * dpsi


def wavefunction(label: StateLabel, params: ModelParams, x):
    if label.sector == "plus":
        return psi_plus(label, params, x)
    if label.n == 0:
        return psi_minus_ground(label.q, params, x)
    return psi_minus_excited(label.n - 1, label.q, params, x)


def wavefunction_deriv(label: StateLabel, params: ModelParams, x):
    if label.sector == "plus":
        return psi_plus_deriv(label, params, x)
    if label.n == 0:
        return psi_minus_ground_deriv(label.q, params, x)
    return psi_minus_excited_deriv(label.n - 1, label.q, params, x)


def energy(label: StateLabel, alpha: complex) -> complex:
    if label.sector == "plus":
        return energy_plus(label.n, label.q, alpha)
    return energy_minus(label.n, label.q, alpha)


def potential_for(label: StateLabel, params: ModelParams):
    """The potential whose Schrodinger operator has ``label`` as an eigenstate."""
    if label.sector == "plus":
        return lambda x: v_plus(params.alpha, params.epsilon, x)
    p = params.with_q(label.q)
    return lambda x: v_minus(p, x)


def eigenpair(label: StateLabel, params: ModelParams) -> EigenPair:
    p = params.with_q(label.q)
    return EigenPair(
        energy=energy(label, p.alpha),
        psi=lambda x: wavefunction(label, p, x),
        psi_deriv=lambda x: wavefunction_deriv(label, p, x),
        label=label,
    )


def apply_A(f, f_deriv, params: ModelParams, x):
    """(d/dx + W_q) f at x, with W_q the closure superpotential of ``params``."""
    return f_deriv(x) + superpotential(params.ansatz(), x) * f(x)


def apply_B(f, f_deriv, params: ModelParams, x):
    """(-d/dx + W_q) f at x."""
    return -f_deriv(x) + superpotential(params.ansatz(), x) * f(x)


def pt_image(label: StateLabel, params: ModelParams, x):
    """conj(psi(-x)) for the state ``label``."""
    return np.conj(wavefunction(label, params, -np.asarray(x, dtype=float)))
