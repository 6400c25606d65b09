"""Symmetric-tridiagonal eigensolver: Sturm counts, certified bisection,
inverse iteration, and the closed-form eigenvalue oracles for path graphs.

Only the two lowest eigenvalues and the ground state are ever needed, so
eigenvalues are extracted one at a time by bisection on the Sturm count,
which gives a certified bracket at any requested index.  Double precision
limits how small a spectral gap can be resolved; results whose gap falls
below 10^3 ulp of the matrix norm bound carry ``precision_limited=True``
and downstream fits drop such points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .operators import TridiagonalOperator, apply_operator

__all__ = [
    "SpectralResult",
    "ConvergenceError",
    "PositivityError",
    "sturm_count",
    "eigenvalue",
    "ground_state",
    "spectrum_low",
    "dirichlet_ground_energy",
    "free_spectrum",
]

EPS = float(np.finfo(float).eps)
DEFAULT_REL_TOL = 1e-14
LAMBDA_FLOOR = 1e-300
RESIDUAL_SCALE = 1e-11
GAP_ULP_FACTOR = 1e3
MAX_SWEEPS = 50
# iterate-change threshold: the shift sits within ~ulp of the true ground
# energy, so one extra sweep shrinks the first-excited admixture by orders
# of magnitude; iterating until the vector stops moving removes admixture
# that the residual test alone cannot see when the gap is small.
CHANGE_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """Inverse iteration failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class PositivityError(RuntimeError):
    """Computed ground state has a significantly negative entry."""


@dataclass(frozen=True)
class SpectralResult:
    """Low-lying spectrum of one operator.

    ``lambda1``/``gap`` are None when only the ground state was requested.
    ``precision_limited`` marks gaps at or below the double-precision noise
    floor; such gaps are reported but not trustworthy.
    """

    lambda0: float
    ground_state: np.ndarray
    lambda1: float | None = None
    gap: float | None = None
    precision_limited: bool = False


def _pivot_scale(op: TridiagonalOperator) -> float:
    return float(np.max(np.abs(op.diag))) + 2.0


def _offsq(op: TridiagonalOperator) -> np.ndarray:
    return op.offdiag * op.offdiag


def sturm_count(op: TridiagonalOperator, mu: float) -> int:
    """Number of eigenvalues of ``op`` strictly below ``mu``."""
    subst = EPS * _pivot_scale(op)
    return int(_kernels.sturm_count(op.diag, _offsq(op), float(mu), subst))


def _eigenvalue_bracket(
    op: TridiagonalOperator, index: int, rel_tol: float
) -> tuple[float, float]:
    n = op.n
    if not 0 <= index <= n - 1:
        raise ValueError(f"eigenvalue index {index} out of range 0..{n - 1}")
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    subst = EPS * _pivot_scale(op)
    lo, hi = _kernels.bisect_bracket(
        op.diag, _offsq(op), index, 0.0, op.norm_bound, rel_tol, LAMBDA_FLOOR, subst
    )
    return float(lo), float(hi)


def eigenvalue(op: TridiagonalOperator, index: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """The index-th smallest eigenvalue, midpoint of a certified bracket.

    The initial bracket is [0, 4 + max strength]; bisection stops once the
    bracket width is below rel_tol * max(|midpoint|, 1e-300).
    """
    lo, hi = _eigenvalue_bracket(op, index, rel_tol)
    return 0.5 * (lo + hi)


def ground_state(
    op: TridiagonalOperator,
    tol: float | None = None,
    _lambda0: float | None = None,
) -> SpectralResult:
    """Positive normalized ground state by inverse iteration.

    The shift is the bisection ground energy; if the shifted factorization
    hits a pivot below 10^3 eps * scale the shift is nudged up by 2 ulp of
    the norm bound and the factorization redone.  Tiny pivots beyond that
    are kept as-is (they drive the solve along the wanted direction); only
    a microscopic overflow floor replaces exact zeros.  Converged when
    ||H v - lambda0 v|| <= tol (default 1e-11 * (4 + max strength)) and the
    iterate has stopped moving.
    """
    if tol is None:
        tol = RESIDUAL_SCALE * op.norm_bound
    if not tol > 0:
        raise ValueError("tol must be positive")
    lam0 = eigenvalue(op, 0) if _lambda0 is None else _lambda0

    scale = _pivot_scale(op)
    pivot_min = 1e3 * EPS * scale
    overflow_floor = 1e-150 * scale
    nudge = 2.0 * math.ulp(op.norm_bound)
    piv, mult, min_abs = _kernels.factor_shifted(
        op.diag, op.offdiag, lam0, overflow_floor
    )
    if min_abs < pivot_min:
        piv, mult, _ = _kernels.factor_shifted(
            op.diag, op.offdiag, lam0 + nudge, overflow_floor
        )

    n = op.n
    v = np.full(n, 1.0 / math.sqrt(n))
    residual = math.inf
    for _ in range(MAX_SWEEPS):
        w = _kernels.solve_factored(piv, mult, op.offdiag, v)
        norm_w = float(np.linalg.norm(w))
        if not math.isfinite(norm_w) or norm_w == 0.0:
            raise ConvergenceError(
                "inverse iteration produced a non-finite iterate", residual=residual
            )
        w /= norm_w
        if float(np.sum(w)) < 0.0:
            w = -w
        change = float(np.linalg.norm(w - v))
        v = w
        residual = float(np.linalg.norm(apply_operator(op, v) - lam0 * v))
        if residual <= tol and change <= CHANGE_TOL:
            break
    else:
        raise ConvergenceError(
            f"inverse iteration did not converge in {MAX_SWEEPS} sweeps "
            f"(last residual {residual:.3e}, tol {tol:.3e})",
            residual=residual,
        )

    if float(np.min(v)) < -1e-14:
        raise PositivityError(
            f"positivity violated: ground-state entry {float(np.min(v)):.3e}"
        )
    v.flags.writeable = False
    return SpectralResult(lambda0=lam0, ground_state=v)


def spectrum_low(
    op: TridiagonalOperator,
    rel_tol: float = DEFAULT_REL_TOL,
    tol: float | None = None,
) -> SpectralResult:
    """Two lowest eigenvalues, their gap, and the ground state."""
    lo0, hi0 = _eigenvalue_bracket(op, 0, rel_tol)
    lo1, hi1 = _eigenvalue_bracket(op, 1, rel_tol)
    lam0 = 0.5 * (lo0 + hi0)
    lam1 = 0.5 * (lo1 + hi1)
    gap = lam1 - lam0
    limited = gap < GAP_ULP_FACTOR * math.ulp(op.norm_bound) or lo1 <= hi0
    gs = ground_state(op, tol, _lambda0=lam0)
    return SpectralResult(
        lambda0=lam0,
        ground_state=gs.ground_state,
        lambda1=lam1,
        gap=gap,
        precision_limited=limited,
    )


def dirichlet_ground_energy(m: int) -> float:
    """Lowest energy of the path on 2m+1 sites with the center pinned to zero,
    equivalently of a path of m free sites next to one Dirichlet endpoint:
    2 - 2 cos(pi / (2m+1))."""
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    return 2.0 - 2.0 * math.cos(math.pi / (2 * m + 1))


def free_spectrum(k: int) -> np.ndarray:
    """All 2k+1 eigenvalues of the potential-free path Laplacian, ascending:
    2 - 2 cos(pi m / (2k+1)), m = 0..2k.  Used as a test oracle."""
    if int(k) != k or k < 1:
        raise ValueError(f"half-width k must be a positive integer, got {k}")
    n = 2 * k + 1
    m = np.arange(n)
    return 2.0 - 2.0 * np.cos(np.pi * m / n)
