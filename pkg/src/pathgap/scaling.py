"""Volume sweeps of the spectral gap and scaling-law fits.

Without a potential the gap of the path on n = 2k+1 sites falls off like
pi^2 / n^2; any non-empty compactly supported potential pushes the decay to
order n^-3, with n^3 * gap confined to a band proportional to 1 / total
strength in the single-site case.  This module runs the (k, strength)
sweeps, forms the scaled sequences n^p * gap, fits power laws on log-log
axes, and evaluates the cubic band.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigensolver import (
    ConvergenceError,
    PositivityError,
    dirichlet_ground_energy,
    spectrum_low,
)
from .operators import Potential, assemble_hamiltonian, build_path

__all__ = [
    "GapPoint",
    "GapSeries",
    "ScalingFit",
    "geometric_grid",
    "linear_grid",
    "gap_series",
    "scaled_sequence",
    "fit_power_law",
    "fit_inverse_alpha",
    "cubic_band_check",
    "series_to_csv",
    "series_from_csv",
]

CSV_HEADER = "k,n,alpha_sum,lambda0,lambda1,gap,gap_n2,gap_n3,precision_limited"


@dataclass(frozen=True)
class GapPoint:
    k: int
    n: int
    lambda0: float
    lambda1: float
    gap: float
    precision_limited: bool


@dataclass(frozen=True)
class GapSeries:
    """Gap sweep over strictly increasing k for one fixed potential.

    ``potential`` is None for series re-read from CSV (only the total
    strength survives serialization, in the alpha_sum column).
    """

    potential: Potential | None
    points: tuple[GapPoint, ...]

    @property
    def alpha_sum(self) -> float:
        return self.potential.strength_sum if self.potential is not None else math.nan


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares power law gap ~ prefactor * n^exponent plus band
    statistics of the scaled sequence n^band_power * gap."""

    exponent: float
    prefactor: float
    r_squared: float
    band_min: float
    band_max: float
    band_ratio: float
    band_power: int
    points_excluded: int

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "prefactor": self.prefactor,
            "r_squared": self.r_squared,
            "band_min": self.band_min,
            "band_max": self.band_max,
            "band_ratio": self.band_ratio,
            "band_power": self.band_power,
            "points_excluded": self.points_excluded,
        }


def geometric_grid(lo: int, hi: int, count: int) -> list[int]:
    """count geometrically spaced integers from lo to hi (deduplicated)."""
    _check_grid(lo, hi, count)
    if count == 1 or lo == hi:
        return [lo] if lo == hi else [lo, hi][:count]
    ratio = (hi / lo) ** (1.0 / (count - 1))
    return sorted({round(lo * ratio**i) for i in range(count)})


def linear_grid(lo: int, hi: int, count: int) -> list[int]:
    """count evenly spaced integers from lo to hi (deduplicated)."""
    _check_grid(lo, hi, count)
    if count == 1:
        return [lo]
    return sorted({round(v) for v in np.linspace(lo, hi, count)})


def _check_grid(lo: int, hi: int, count: int) -> None:
    if lo < 1 or hi < lo:
        raise ValueError(f"grid needs 1 <= min <= max, got {lo}..{hi}")
    if count < 1:
        raise ValueError(f"grid needs count >= 1, got {count}")


def gap_series(potential: Potential, k_values: list[int]) -> GapSeries:
    """spectrum_low over the given k values (sorted, duplicates rejected).

    A failure at any point aborts the sweep, naming the offending k.
    """
    ks = sorted(k_values)
    if len(set(ks)) != len(ks):
        raise ValueError("k grid contains duplicates")
    points = []
    for k in ks:
        op = assemble_hamiltonian(build_path(k), potential)
        try:
            res = spectrum_low(op)
        except ConvergenceError as err:
            raise ConvergenceError(
                f"gap sweep aborted at k = {k}: {err}", err.residual
            ) from err
        except PositivityError as err:
            raise PositivityError(f"gap sweep aborted at k = {k}: {err}") from err
        points.append(
            GapPoint(
                k=k,
                n=2 * k + 1,
                lambda0=res.lambda0,
                lambda1=res.lambda1,
                gap=res.gap,
                precision_limited=res.precision_limited,
            )
        )
    return GapSeries(potential=potential, points=tuple(points))


def scaled_sequence(series: GapSeries, p: float) -> list[tuple[int, float]]:
    """[(k, n^p * gap)] over all points, flagged ones included."""
    return [(pt.k, pt.n**p * pt.gap) for pt in series.points]


def _usable(series: GapSeries) -> list[GapPoint]:
    return [pt for pt in series.points if not pt.precision_limited and pt.gap > 0]


def _band(points: list[GapPoint], power: int, band_k_min: int) -> tuple[float, float]:
    vals = [pt.n**power * pt.gap for pt in points if pt.k >= band_k_min]
    if not vals:
        vals = [pt.n**power * pt.gap for pt in points]
    return min(vals), max(vals)


def fit_power_law(series: GapSeries, band_k_min: int = 100) -> ScalingFit:
    """Ordinary least squares of log gap against log n.

    Flagged (precision-limited) points are excluded; at least 3 usable
    points are required.  Band statistics are taken over the scaled
    sequence at the fitted exponent rounded to the nearest integer, using
    points with k >= band_k_min (all usable points if none qualify).
    """
    pts = _usable(series)
    if len(pts) < 3:
        raise ValueError(
            f"power-law fit needs at least 3 usable points, have {len(pts)}"
        )
    x = np.log([pt.n for pt in pts])
    y = np.log([pt.gap for pt in pts])
    exponent, intercept = np.polyfit(x, y, 1)
    resid = y - (exponent * x + intercept)
    ss_res = float(np.dot(resid, resid))
    centered = y - y.mean()
    ss_tot = float(np.dot(centered, centered))
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res <= 1e-28 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    power = int(round(-float(exponent)))
    band_min, band_max = _band(pts, power, band_k_min)
    return ScalingFit(
        exponent=float(exponent),
        prefactor=float(math.exp(intercept)),
        r_squared=r_squared,
        band_min=band_min,
        band_max=band_max,
        band_ratio=band_max / band_min,
        band_power=power,
        points_excluded=len(series.points) - len(pts),
    )


def fit_inverse_alpha(samples: list[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares c for scaled_gap ~ c / alpha; returns (c, max relative
    residual).  Samples are (alpha, scaled gap) at one fixed k."""
    if len(samples) < 3:
        raise ValueError(f"inverse-strength fit needs >= 3 samples, have {len(samples)}")
    alphas = np.array([a for a, _ in samples], dtype=float)
    ys = np.array([y for _, y in samples], dtype=float)
    if np.any(alphas <= 0):
        raise ValueError("all strengths must be positive")
    if np.any(ys <= 0):
        raise ValueError("all scaled gaps must be positive")
    x = 1.0 / alphas
    c = float(np.dot(ys, x) / np.dot(x, x))
    rel = np.abs(ys - c * x) / np.abs(ys)
    return c, float(np.max(rel))


def cubic_band_check(
    series: GapSeries, band_k_min: int = 100
) -> tuple[ScalingFit, bool]:
    """Band of n^3 * gap over the sweep, plus whether the lower band is
    asymptotically meaningful.

    The upper band is always finite on a computed grid.  The lower band is
    claimed by the theory only for a single-site potential at the origin or
    when the total strength is small enough that the lower-bound formula
    (inverse total strength term plus the non-positive side-energy deficit,
    its unknown constant taken as 1) stays positive across the grid.
    """
    pot = series.potential
    if pot is None or pot.is_empty:
        raise ValueError("cubic band check requires a non-empty potential")
    pts = _usable(series)
    if len(pts) < 3:
        raise ValueError(f"cubic band check needs >= 3 usable points, have {len(pts)}")
    fit = fit_power_law(series, band_k_min=band_k_min)
    band_min, band_max = _band(pts, 3, band_k_min)
    fit = ScalingFit(
        exponent=fit.exponent,
        prefactor=fit.prefactor,
        r_squared=fit.r_squared,
        band_min=band_min,
        band_max=band_max,
        band_ratio=band_max / band_min,
        band_power=3,
        points_excluded=fit.points_excluded,
    )
    if pot.sites == (0,):
        applicable = True
    else:
        rmin, rmax = pot.site_min, pot.site_max
        margin = math.inf
        for pt in pts:
            k = pt.k
            theta_max = max(
                dirichlet_ground_energy(k + rmin), dirichlet_ground_energy(k - rmax)
            )
            dge_k = dirichlet_ground_energy(k)
            margin = min(
                margin, dge_k / (pot.strength_sum * k) + dge_k - theta_max
            )
        applicable = margin > 0
    return fit, applicable


def series_to_csv(series: GapSeries, timestamp: str | None = None) -> str:
    """CSV with one row per k; floats carry 17 significant digits."""
    lines = []
    if timestamp is not None:
        lines.append(f"# generated {timestamp}")
    lines.append(CSV_HEADER)
    alpha_sum = series.alpha_sum
    if math.isnan(alpha_sum):
        alpha_sum = 0.0
    for pt in series.points:
        lines.append(
            ",".join(
                [
                    str(pt.k),
                    str(pt.n),
                    format(alpha_sum, ".17g"),
                    format(pt.lambda0, ".17g"),
                    format(pt.lambda1, ".17g"),
                    format(pt.gap, ".17g"),
                    format(pt.n**2 * pt.gap, ".17g"),
                    format(pt.n**3 * pt.gap, ".17g"),
                    "true" if pt.precision_limited else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def series_from_csv(text: str) -> GapSeries:
    """Inverse of series_to_csv (the potential itself is not recoverable)."""
    rows = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError(
            f"unrecognized gap-scan CSV (expected header {CSV_HEADER!r})"
        )
    points = []
    for row in rows[1:]:
        fields = row.split(",")
        if len(fields) != 9:
            raise ValueError(f"malformed CSV row: {row!r}")
        points.append(
            GapPoint(
                k=int(fields[0]),
                n=int(fields[1]),
                lambda0=float(fields[3]),
                lambda1=float(fields[4]),
                gap=float(fields[5]),
                precision_limited=fields[8] == "true",
            )
        )
    return GapSeries(potential=None, points=tuple(points))
