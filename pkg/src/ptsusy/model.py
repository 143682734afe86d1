"""Parameters, closure and potentials on the shifted contour z = x - i*epsilon.

All potential functions broadcast over numpy arrays in ``x`` and return
complex values (numpy scalars for scalar input).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ContourSingularityError, DegenerateClosureError

QUASI_PARITIES = (1, -1)

# distance from a pole below which a contour point counts as singular
POLE_MARGIN = 1e-9
# |1 - q*alpha| below this is treated as an exact closure degeneracy
DEGENERACY_TOL = 1e-12

Potential = Callable[[float], complex]


def check_quasi_parity(q: int) -> int:
    if q not in QUASI_PARITIES:
        raise ValueError(f"quasi-parity must be +1 or -1, got {q!r}")
    return int(q)


def contour_point(x, epsilon: float):
    """Map real ``x`` onto the contour, z = x - i*epsilon."""
    return np.asarray(x, dtype=float) - 1j * epsilon


@dataclass(frozen=True)
class CESClosure:
    """The conditionally-exactly-solvable member fixed by (q, alpha).

    ``lam`` is the centrifugal coefficient of the superpotential, ``g`` the
    coupling of its rational term and ``beta`` the factorization energy.
    """

    lam: complex
    g: complex
    beta: complex


def ces_closure(q: int, alpha: complex) -> CESClosure:
    q = check_quasi_parity(q)
    denom = 1 - q * alpha
    if abs(denom) < DEGENERACY_TOL:
        raise DegenerateClosureError(
            f"closure is degenerate: 1 - q*alpha = 0 for q={q:+d}, alpha={alpha}"
        )
    return CESClosure(lam=complex(-q * alpha + 0.5), g=complex(1 / denom), beta=complex(-2 * q * alpha))


def _contour_poles(g: complex) -> tuple[complex, complex]:
    root = cmath.sqrt(-1 / g)
    return root, -root


def _check_rational_poles(couplings: Sequence[complex], epsilon: float) -> None:
    for g in couplings:
        if g == 0:
            continue
        for pole in _contour_poles(g):
            if abs(pole.imag + epsilon) < POLE_MARGIN:
                raise ContourSingularityError(
                    f"1 + g z^2 = 0 at z = {pole:.6g} lies on the contour Im z = -{epsilon} (g = {g})"
                )


@dataclass(frozen=True)
class AnsatzConfig:
    """Superpotential W = z + lam/z + sum_k 2 g_k z / (1 + g_k z^2)."""

    lam: complex
    epsilon: float
    couplings: tuple[complex, ...] = ()

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        object.__setattr__(self, "couplings", tuple(complex(g) for g in self.couplings))
        _check_rational_poles(self.couplings, self.epsilon)


@dataclass(frozen=True)
class ModelParams:
    """Coupling ``alpha``, contour shift ``epsilon`` and quasi-parity ``q``.

    Construction fails if the closure is degenerate or if a pole of the
    minus-sector partner potential lies on the contour.
    """

    alpha: complex
    epsilon: float
    q: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "q", check_quasi_parity(self.q))
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        _check_rational_poles((self.closure.g,), self.epsilon)

    @property
    def closure(self) -> CESClosure:
        return ces_closure(self.q, self.alpha)

    def ansatz(self) -> AnsatzConfig:
        c = self.closure
        return AnsatzConfig(lam=c.lam, epsilon=self.epsilon, couplings=(c.g,))

    def with_q(self, q: int) -> "ModelParams":
        return self if q == self.q else replace(self, q=q)


def _guard(den, what: str):
    if np.any(np.abs(den) < POLE_MARGIN):
        raise ContourSingularityError(f"{what} vanishes at a sampled contour point")


def superpotential(config: AnsatzConfig, x):
    z = contour_point(x, config.epsilon)
    _guard(z, "z")
    w = z + config.lam / z
    for g in config.couplings:
        den = 1 + g * z**2
        _guard(den, "1 + g z^2")
        w = w + 2 * g * z / den
    return w[()]


def superpotential_deriv(config: AnsatzConfig, x):
    z = contour_point(x, config.epsilon)
    _guard(z, "z")
    dw = 1 - config.lam / z**2
    for g in config.couplings:
        den = 1 + g * z**2
        _guard(den, "1 + g z^2")
        dw = dw + 2 * g * (1 - g * z**2) / den**2
    return dw[()]


def potential_from_W(config: AnsatzConfig, x, sign: int):
    """W^2 + sign*W'. sign=+1 is the potential of AB, sign=-1 that of BA."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    w = superpotential(config, x)
    return w**2 + sign * superpotential_deriv(config, x)


def v_base(alpha: complex, epsilon: float, x):
    """The shifted oscillator z^2 + (alpha^2 - 1/4)/z^2."""
    z = contour_point(x, epsilon)
    z2 = z**2
    return (z2 + (alpha**2 - 0.25) / z2)[()]


def v_plus(alpha: complex, epsilon: float, x):
    """The q-independent plus-sector partner, oscillator shifted up by 6."""
    return v_base(alpha, epsilon, x) + 6


def partner_minus(alpha: complex, epsilon: float, q: int, x):
    """Minus-sector partner for quasi-parity ``q`` without construction-time checks.

    Raises only when a sampled point sits on a pole, so callers that want
    per-point flags (curve sampling) can use it directly.
    """
    q = check_quasi_parity(q)
    c = 1 - q * alpha
    if abs(c) < DEGENERACY_TOL:
        raise DegenerateClosureError(
            f"closure is degenerate: 1 - q*alpha = 0 for q={q:+d}, alpha={alpha}"
        )
    z = contour_point(x, epsilon)
    z2 = z**2
    den = c + z2
    _guard(den, "1 - q*alpha + z^2")
    v = z2 + (alpha**2 - 2 * q * alpha + 0.75) / z2 - 4 / den + 8 * z2 / den**2 + 4
    return v[()]


def v_minus(params: ModelParams, x):
    return partner_minus(params.alpha, params.epsilon, params.q, x)


def pt_reflect(V: Potential, x):
    """PT image conj(V(-x)) of a potential (or any function of x)."""
    return np.conj(V(-np.asarray(x, dtype=float)))


def pt_defect(V: Potential, xs) -> float:
    """max |conj(V(-x)) - V(x)| over the sample points."""
    xs = np.asarray(xs, dtype=float)
    return float(np.max(np.abs(pt_reflect(V, xs) - V(xs))))
