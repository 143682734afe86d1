"""Finite-difference verification of the analytic spectrum.

The Hamiltonian -d^2/dx^2 + V is discretized with the 3-point Laplacian
on a uniform grid with Dirichlet ends. The resulting complex-symmetric
tridiagonal matrix is handled by a banded LU with partial pivoting, and
eigenvalues near a requested shift are extracted by inverse iteration with
a Rayleigh-quotient shift update.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import states
from .errors import ContourSingularityError, DegenerateClosureError, EvaluationError, SingularShiftError
from .model import ModelParams, pt_defect, v_minus, v_plus
from .special import DEFAULT_STEP, second_derivative
from .states import EigenPair, StateLabel

log = logging.getLogger(__name__)

PIVOT_TOL = 1e-14
SHIFT_NUDGE = 1e-10 * (1 + 1j)
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError(f"need at least 3 grid points, got {self.n_points}")
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")

    @property
    def step(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def interior(self) -> np.ndarray:
        """Unknowns of the Dirichlet problem; the two end nodes are pinned to zero."""
        return self.points[1:-1]

    def refined(self) -> "GridSpec":
        """Same interval with the step halved."""
        return GridSpec(self.x_min, self.x_max, 2 * self.n_points - 1)


@dataclass(frozen=True)
class BandedOperator:
    """Symmetric tridiagonal matrix on the interior nodes of ``grid``.

    The sub- and super-diagonal are both ``off_diagonal``; the matrix is
    complex symmetric, not Hermitian.
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid: GridSpec | None = None

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=complex)
        e = np.asarray(self.off_diagonal, dtype=complex)
        if d.ndim != 1 or e.shape != (max(d.size - 1, 0),):
            raise ValueError(f"inconsistent band lengths {d.shape} and {e.shape}")
        if self.grid is not None and d.size != self.grid.n_points - 2:
            raise ValueError("diagonal length does not match the grid interior")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def size(self) -> int:
        return self.diagonal.size

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)


@dataclass(frozen=True)
class EigenEstimate:
    value: complex
    residual: float
    iterations: int
    converged: bool
    vector: np.ndarray = field(repr=False, default=None)


def discretize(V: Callable, grid: GridSpec) -> BandedOperator:
    """3-point discretization of -d^2/dx^2 + V with Dirichlet ends."""
    x = grid.interior
    h2 = grid.step**2
    pot = np.asarray(V(x), dtype=complex)
    if pot.shape != x.shape:
        pot = np.array([complex(V(xi)) for xi in x])
    if not np.all(np.isfinite(pot)):
        raise EvaluationError("potential is not finite on the grid")
    return BandedOperator(2 / h2 + pot, np.full(x.size - 1, -1 / h2, dtype=complex), grid)


class TridiagonalLU:
    """LU factors of (op - shift*I) with partial pivoting.

    Row interchanges create a second superdiagonal, stored in ``du2``;
    the layout follows the usual gttrf convention.
    """

    def __init__(self, op: BandedOperator, shift: complex = 0.0):
        n = op.size
        d = (op.diagonal - shift).tolist()
        dl = op.off_diagonal.tolist()
        du = list(dl)
        du2 = [0j] * max(n - 2, 0)
        swap = [False] * max(n - 1, 0)
        for i in range(n - 1):
            if abs(d[i]) >= abs(dl[i]):
                if abs(d[i]) <= PIVOT_TOL:
                    raise SingularShiftError(f"zero pivot at row {i}")
                fact = dl[i] / d[i]
                dl[i] = fact
                d[i + 1] -= fact * du[i]
            else:
                fact = d[i] / dl[i]
                d[i] = dl[i]
                dl[i] = fact
                tmp = du[i]
                du[i] = d[i + 1]
                d[i + 1] = tmp - fact * d[i + 1]
                if i < n - 2:
                    du2[i] = du[i + 1]
                    du[i + 1] = -fact * du[i + 1]
                swap[i] = True
        if n and abs(d[-1]) <= PIVOT_TOL:
            raise SingularShiftError(f"zero pivot at row {n - 1}")
        self._d, self._dl, self._du, self._du2, self._swap = d, dl, du, du2, swap
        self.size = n

    def solve(self, rhs) -> np.ndarray:
        d, dl, du, du2, swap = self._d, self._dl, self._du, self._du2, self._swap
        n = self.size
        b = np.asarray(rhs, dtype=complex).tolist()
        if len(b) != n:
            raise ValueError(f"rhs has length {len(b)}, operator has size {n}")
        for i in range(n - 1):
            if swap[i]:
                b[i], b[i + 1] = b[i + 1], b[i] - dl[i] * b[i + 1]
            else:
                b[i + 1] -= dl[i] * b[i]
        b[n - 1] /= d[n - 1]
        if n > 1:
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
        for i in range(n - 3, -1, -1):
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i]
        return np.array(b, dtype=complex)


def solve_shifted(op: BandedOperator, shift: complex, rhs) -> np.ndarray:
    """Solve (op - shift*I) y = rhs. Raises SingularShiftError on a vanishing pivot."""
    return TridiagonalLU(op, shift).solve(rhs)


def _rayleigh(op: BandedOperator, v: np.ndarray) -> complex:
    return complex(np.vdot(v, op.matvec(v)) / np.vdot(v, v))


def gaussian_bump(grid: GridSpec) -> np.ndarray:
    x = grid.interior
    c = 0.5 * (grid.x_min + grid.x_max)
    w = 0.1 * (grid.x_max - grid.x_min)
    return np.exp(-(((x - c) / w) ** 2)).astype(complex)


def inverse_iteration(
    op: BandedOperator,
    shift0: complex,
    tol: float = DEFAULT_TOL,
    max_iter: int = 50,
    v0=None,
) -> EigenEstimate:
    """Eigenvalue of ``op`` near ``shift0`` by Rayleigh-quotient inverse iteration.

    The first solve uses ``shift0`` itself; afterwards the shift is the
    Rayleigh quotient of the current iterate. A singular factorization means
    the shift is (numerically) an eigenvalue, and the shift is nudged by
    1e-10*(1+i) before retrying.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if v0 is None:
        if op.grid is None:
            raise ValueError("need a starting vector for an operator without a grid")
        v0 = gaussian_bump(op.grid)
    v = np.asarray(v0, dtype=complex)
    v = v / np.linalg.norm(v)
    shift = complex(shift0)
    best = None
    for it in range(1, max_iter + 1):
        try:
            y = solve_shifted(op, shift, v)
        except SingularShiftError:
            shift += SHIFT_NUDGE
            y = solve_shifted(op, shift, v)
        v = y / np.linalg.norm(y)
        lam = _rayleigh(op, v)
        res = float(np.linalg.norm(op.matvec(v) - lam * v))
        if best is None or res < best.residual:
            best = EigenEstimate(lam, res, it, False, v)
        if res <= tol:
            return EigenEstimate(lam, res, it, True, v)
        shift = lam
    log.warning("inverse iteration did not reach tol=%g in %d steps (residual %g)", tol, max_iter, best.residual)
    return EigenEstimate(best.value, best.residual, max_iter, False, best.vector)


@dataclass(frozen=True)
class PointResidual:
    x: float
    residual: float
    error_estimate: float
    scale: float
    error: str | None = None

    @property
    def relative(self) -> float:
        return self.residual / self.scale


@dataclass
class VerificationRecord:
    points: list[PointResidual]
    max_relative_residual: float
    degenerate: bool

    @property
    def failures(self) -> list[PointResidual]:
        return [p for p in self.points if p.error is not None]

    def passes(self, floor: float = 1e-7, factor: float = 10.0) -> bool:
        """Residual test: every point within max(floor, factor*error_estimate) relative."""
        if self.degenerate or self.failures:
            return False
        return all(p.relative <= max(floor, factor * p.error_estimate) for p in self.points)

    def worst_ratio(self, floor: float = 1e-7, factor: float = 10.0) -> float:
        """Largest relative residual divided by its allowed threshold."""
        return max(
            (p.relative / max(floor, factor * p.error_estimate) for p in self.points if p.error is None),
            default=float("inf"),
        )


def verify_state(state: EigenPair, V: Callable, sample_xs: Sequence[float], h: float = DEFAULT_STEP) -> VerificationRecord:
    """Pointwise |-psi'' + V psi - E psi| scaled by max(1, |psi|).

    The second derivative comes from :func:`second_derivative`; its error
    estimate is recorded next to every residual.
    """
    points = []
    all_zero = True
    for x in sample_xs:
        x = float(x)
        try:
            psi = complex(state.psi(x))
            d2 = second_derivative(state.psi, x, h)
            res = abs(-d2.value + (complex(V(x)) - state.energy) * psi)
        except (EvaluationError, ContourSingularityError, ZeroDivisionError, OverflowError) as exc:
            points.append(PointResidual(x, float("nan"), float("nan"), 1.0, error=str(exc)))
            continue
        if psi != 0:
            all_zero = False
        points.append(PointResidual(x, res, d2.error_estimate, max(1.0, abs(psi))))
    good = [p.relative for p in points if p.error is None]
    return VerificationRecord(points, max(good, default=float("nan")), degenerate=all_zero)


@dataclass(frozen=True)
class PairingResult:
    defect: float
    paired: bool


def pairing_check(energies_q_plus: Sequence[complex], energies_q_minus: Sequence[complex], tol: float = 1e-2) -> PairingResult:
    """max_n |E_n(q=+1) - conj(E_n(q=-1))|; zero for mutually conjugate ladders."""
    if len(energies_q_plus) != len(energies_q_minus):
        raise ValueError(
            f"ladders differ in length: {len(energies_q_plus)} vs {len(energies_q_minus)}"
        )
    if not energies_q_plus:
        return PairingResult(0.0, True)
    a = np.asarray(energies_q_plus, dtype=complex)
    b = np.asarray(energies_q_minus, dtype=complex)
    defect = float(np.max(np.abs(a - np.conj(b))))
    return PairingResult(defect, defect <= tol)


def ratio_spread(num, den, floor: float = 0.0) -> float:
    """stdev/|mean| of num/den over entries with |den| > floor."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    keep = np.abs(den) > floor
    r = num[keep] / den[keep]
    mean = r.mean()
    return float(np.sqrt(np.mean(np.abs(r - mean) ** 2)) / abs(mean))


def sector_operator(label: StateLabel, params: ModelParams, grid: GridSpec) -> BandedOperator:
    return discretize(states.potential_for(label, params), grid)


def numerical_energy(
    label: StateLabel,
    params: ModelParams,
    grid: GridSpec,
    op: BandedOperator | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = 50,
) -> EigenEstimate:
    """Inverse iteration seeded with the analytic energy and sampled analytic state."""
    p = params.with_q(label.q)
    if op is None:
        op = sector_operator(label, p, grid)
    v0 = states.wavefunction(label, p, grid.interior)
    return inverse_iteration(op, states.energy(label, p.alpha), tol=tol, max_iter=max_iter, v0=v0)


@dataclass
class ScanRow:
    alpha: complex
    analytic: dict[int, list[complex]] = field(default_factory=dict)
    numerical: dict[int, list[EigenEstimate]] = field(default_factory=dict)
    pt_defect_vplus: float | None = None
    pt_defect_vminus: dict[int, float] = field(default_factory=dict)
    pairing_analytic: float | None = None
    pairing_numerical: float | None = None
    flags: list[str] = field(default_factory=list)


def _scan_one(alpha: complex, epsilon: float, levels: int, grid: GridSpec, sample_xs: np.ndarray) -> ScanRow:
    row = ScanRow(alpha=alpha)
    vp = lambda x: v_plus(alpha, epsilon, x)
    row.pt_defect_vplus = pt_defect(vp, sample_xs)
    op = discretize(vp, grid)
    for q in (1, -1):
        row.analytic[q] = [states.energy_plus(n, q, alpha) for n in range(levels)]
        try:
            params = ModelParams(alpha, epsilon, q)
        except DegenerateClosureError:
            row.flags.append(f"degenerate_closure_q{'p' if q > 0 else 'm'}")
            continue
        except ContourSingularityError:
            row.flags.append(f"contour_singular_q{'p' if q > 0 else 'm'}")
            continue
        row.pt_defect_vminus[q] = pt_defect(lambda x: v_minus(params, x), sample_xs)
        ests = [numerical_energy(StateLabel("plus", n, q), params, grid, op=op) for n in range(levels)]
        row.numerical[q] = ests
        if not all(e.converged for e in ests):
            row.flags.append(f"not_converged_q{'p' if q > 0 else 'm'}")
    row.pairing_analytic = pairing_check(row.analytic[1], row.analytic[-1]).defect
    if 1 in row.numerical and -1 in row.numerical:
        row.pairing_numerical = pairing_check(
            [e.value for e in row.numerical[1]], [e.value for e in row.numerical[-1]]
        ).defect
    return row


def alpha_scan(
    path: Sequence[complex],
    epsilon: float,
    levels: int,
    grid: GridSpec,
    sample_xs=None,
) -> list[ScanRow]:
    """Spectra and symmetry diagnostics along a path of couplings.

    For each alpha: analytic and numerically confirmed plus-sector energies
    for both quasi-parities, PT defects of v_plus and both v_minus branches
    on ``sample_xs`` (default [-4, 4] in steps of 0.01) and the pairing
    defect between the two ladders. Degenerate points are flagged and the
    scan carries on. Rows come back in path order.
    """
    if sample_xs is None:
        sample_xs = np.linspace(-4.0, 4.0, 801)
    sample_xs = np.asarray(sample_xs, dtype=float)
    return [_scan_one(complex(a), epsilon, levels, grid, sample_xs) for a in path]
