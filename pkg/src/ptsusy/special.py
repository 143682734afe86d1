"""Complex Laguerre polynomials and small numerical-calculus helpers.

Everything here is a pure function. Laguerre evaluation broadcasts over
numpy arrays in ``z``; the calculus helpers take scalar callables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationError

ComplexFunction = Callable[[float], complex]

DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class DerivativeEstimate:
    """Richardson-extrapolated derivative with a truncation-error proxy."""

    value: complex
    error_estimate: float


def laguerre(n: int, a, z):
    """Associated Laguerre polynomial :math:`L_n^{(a)}(z)` for complex ``a``, ``z``.

    Uses the forward three-term recurrence

        (k+1) L_{k+1} = (2k + 1 + a - z) L_k - (k + a) L_{k-1}

    seeded with ``L_0 = 1`` and ``L_1 = 1 + a - z``.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    z = np.asarray(z, dtype=complex)
    prev = np.ones_like(z)
    if n == 0:
        return prev[()]
    cur = 1.0 + a - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - z) * cur - (k + a) * prev) / (k + 1)
    return cur[()]


def laguerre_deriv(n: int, a, z):
    """d/dz L_n^{(a)}(z) = -L_{n-1}^{(a+1)}(z), zero for n = 0."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if n == 0:
        return np.zeros_like(np.asarray(z, dtype=complex))[()]
    return -laguerre(n - 1, a + 1, z)


def _sample(f: ComplexFunction, xs) -> list[complex]:
    vals = [complex(f(x)) for x in xs]
    for x, v in zip(xs, vals):
        if not np.isfinite(v):
            raise EvaluationError(f"non-finite function value {v!r} at x={x!r}")
    return vals


def second_derivative(f: ComplexFunction, x: float, h: float = DEFAULT_STEP) -> DerivativeEstimate:
    """Second derivative of ``f`` at ``x`` from a Richardson pair of 3-point stencils.

    The central estimates at steps ``h`` and ``h/2`` are combined as
    ``(4 D(h/2) - D(h)) / 3``; ``error_estimate`` is ``|D(h) - D(h/2)|``.
    """
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    k = h / 2
    fm, fmk, f0, fpk, fp = _sample(f, (x - h, x - k, x, x + k, x + h))
    d_h = (fp - 2 * f0 + fm) / h**2
    d_k = (fpk - 2 * f0 + fmk) / k**2
    return DerivativeEstimate((4 * d_k - d_h) / 3, abs(d_h - d_k))


def first_derivative(f: ComplexFunction, x: float, h: float = DEFAULT_STEP) -> DerivativeEstimate:
    """First derivative by the same Richardson scheme as :func:`second_derivative`."""
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    k = h / 2
    fm, fmk, fpk, fp = _sample(f, (x - h, x - k, x + k, x + h))
    d_h = (fp - fm) / (2 * h)
    d_k = (fpk - fmk) / (2 * k)
    return DerivativeEstimate((4 * d_k - d_h) / 3, abs(d_h - d_k))


def integrate_modulus_squared(f: ComplexFunction, a: float, b: float, n: int) -> float:
    """Composite trapezoid value of the integral of |f(x)|^2 over [a, b].

    ``n`` is the number of subintervals. ``f`` is called once with the full
    node array, so it must accept numpy arrays (scalar callables that do not
    are evaluated point by point).
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if n < 2:
        raise ValueError(f"need at least two subintervals, got {n}")
    xs = np.linspace(a, b, n + 1)
    try:
        vals = np.asarray(f(xs), dtype=complex)
        if vals.shape != xs.shape:
            raise TypeError
    except TypeError:
        vals = np.array([complex(f(x)) for x in xs])
    dens = np.abs(vals) ** 2
    if not np.all(np.isfinite(dens)):
        bad = xs[~np.isfinite(dens)][0]
        raise EvaluationError(f"non-finite integrand at x={bad!r}")
    h = (b - a) / n
    return float(h * (dens.sum() - 0.5 * (dens[0] + dens[-1])))
