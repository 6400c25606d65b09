"""Path graphs, compactly supported potentials, and tridiagonal Hamiltonians.

The configuration space is the path graph on vertices -k..k (an odd number
n = 2k+1 of sites).  The operator of interest is the unweighted graph
Laplacian plus a diagonal potential supported on finitely many sites, which
is symmetric tridiagonal: diagonal = vertex degree + potential strength,
off-diagonal = -1 on every edge.

Sites are the public coordinate system; internally arrays are 0-indexed with
index = site + k.  All types are immutable after construction and every
operation is a pure function.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PathGraph",
    "Potential",
    "TridiagonalOperator",
    "build_path",
    "build_potential",
    "assemble_hamiltonian",
    "apply_operator",
    "quadratic_form",
    "rayleigh_quotient",
]


@dataclass(frozen=True)
class PathGraph:
    """Path graph on the integer sites -k..k."""

    k: int

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    @property
    def vertices(self) -> range:
        return range(-self.k, self.k + 1)

    def degree(self, site: int) -> int:
        if not -self.k <= site <= self.k:
            raise ValueError(f"site {site} outside vertex range -{self.k}..{self.k}")
        return 1 if abs(site) == self.k else 2


@dataclass(frozen=True)
class Potential:
    """Finite map site -> strength with all strengths > 0.

    The empty potential (free Laplacian baseline) is only available through
    ``build_potential([], empty_baseline=True)``; bound evaluations reject it.
    """

    entries: tuple[tuple[int, float], ...]

    @property
    def is_empty(self) -> bool:
        return not self.entries

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.entries)

    @property
    def site_min(self) -> int:
        """Leftmost supported site (r_min)."""
        self._require_nonempty()
        return self.entries[0][0]

    @property
    def site_max(self) -> int:
        """Rightmost supported site (r_max)."""
        self._require_nonempty()
        return self.entries[-1][0]

    @property
    def strength_min(self) -> float:
        """Smallest strength over the support."""
        self._require_nonempty()
        return min(a for _, a in self.entries)

    @property
    def strength_sum(self) -> float:
        """Total strength over the support (0 for the empty baseline)."""
        return float(sum(a for _, a in self.entries))

    @property
    def strength_max(self) -> float:
        return max((a for _, a in self.entries), default=0.0)

    def strength_at(self, site: int) -> float:
        for s, a in self.entries:
            if s == site:
                return a
        return 0.0

    def scaled(self, factor: float) -> "Potential":
        """Potential with every strength multiplied by ``factor`` > 0."""
        if self.is_empty:
            raise ValueError("cannot scale the empty baseline potential")
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return Potential(tuple((s, a * factor) for s, a in self.entries))

    def spec_string(self) -> str:
        """Inverse of the CLI spec syntax, ``none`` for the empty baseline."""
        if self.is_empty:
            return "none"
        return ",".join(f"{s}:{a:g}" for s, a in self.entries)

    def _require_nonempty(self) -> None:
        if self.is_empty:
            raise ValueError("empty baseline potential has no support")


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix: Laplacian of a path plus the potential.

    ``diag`` has length n = 2k+1, ``offdiag`` length n-1 (all entries -1).
    Arrays are frozen (read-only) at construction.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    k: int
    potential: Potential = field(compare=False)

    @property
    def n(self) -> int:
        return int(self.diag.shape[0])

    @property
    def norm_bound(self) -> float:
        """Gershgorin-style bound: every eigenvalue lies in [0, 4 + max strength]."""
        return 4.0 + self.potential.strength_max

    def index_of(self, site: int) -> int:
        if not -self.k <= site <= self.k:
            raise ValueError(f"site {site} outside vertex range -{self.k}..{self.k}")
        return site + self.k


def build_path(k: int) -> PathGraph:
    """Path graph with 2k+1 vertices -k..k; rejects k < 1."""
    if int(k) != k or k < 1:
        raise ValueError(f"half-width k must be a positive integer, got {k}")
    return PathGraph(int(k))


def build_potential(
    pairs: list[tuple[int, float]] | tuple[tuple[int, float], ...],
    *,
    empty_baseline: bool = False,
) -> Potential:
    """Potential from (site, strength) pairs.

    Strengths must be strictly positive and sites pairwise distinct.  An
    empty list is only accepted with ``empty_baseline=True`` (free Laplacian).
    """
    pairs = list(pairs)
    if not pairs:
        if not empty_baseline:
            raise ValueError("empty potential requires empty_baseline=True")
        return Potential(())
    seen: set[int] = set()
    for site, strength in pairs:
        if int(site) != site:
            raise ValueError(f"site {site!r} is not an integer")
        if site in seen:
            raise ValueError(f"duplicate site {site}")
        seen.add(int(site))
        if not strength > 0:
            raise ValueError(f"non-positive strength {strength} at site {site}")
    entries = tuple(sorted((int(s), float(a)) for s, a in pairs))
    return Potential(entries)


def assemble_hamiltonian(graph: PathGraph, potential: Potential) -> TridiagonalOperator:
    """Tridiagonal operator diag(v) = degree(v) + strength(v), offdiag = -1.

    For non-empty potentials the support must leave a non-empty sub-path on
    each side: k + site_min >= 1 and k - site_max >= 1 (required downstream
    by the bound evaluations).
    """
    k, n = graph.k, graph.n
    if not potential.is_empty:
        rmin, rmax = potential.site_min, potential.site_max
        if rmin < -k or rmax > k:
            raise ValueError(
                f"potential sites {rmin}..{rmax} outside vertex range -{k}..{k}"
            )
        if k + rmin < 1 or k - rmax < 1:
            raise ValueError(
                f"potential support {rmin}..{rmax} leaves an empty side sub-path "
                f"(need k + site_min >= 1 and k - site_max >= 1, k = {k})"
            )
    diag = np.full(n, 2.0)
    diag[0] = diag[-1] = 1.0
    for site, strength in potential.entries:
        diag[site + k] += strength
    offdiag = np.full(n - 1, -1.0)
    diag.flags.writeable = False
    offdiag.flags.writeable = False
    return TridiagonalOperator(diag=diag, offdiag=offdiag, k=k, potential=potential)


def apply_operator(op: TridiagonalOperator, f: np.ndarray) -> np.ndarray:
    """Matrix-vector product H f."""
    f = np.asarray(f, dtype=float)
    if f.shape != (op.n,):
        raise ValueError(f"vector length {f.shape} does not match n = {op.n}")
    out = op.diag * f
    out[:-1] += op.offdiag * f[1:]
    out[1:] += op.offdiag * f[:-1]
    return out


def quadratic_form(op: TridiagonalOperator, f: np.ndarray) -> float:
    """Energy of f: sum of squared gradients along edges plus potential term.

    Agrees with <f, H f> up to rounding; evaluated in the gradient form so the
    result is a sum of non-negative terms (exactly 0 for constants when the
    potential is empty).
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (op.n,):
        raise ValueError(f"vector length {f.shape} does not match n = {op.n}")
    grad = np.diff(f)
    value = float(np.dot(grad, grad))
    for site, strength in op.potential.entries:
        value += strength * float(f[site + op.k]) ** 2
    return value


def rayleigh_quotient(op: TridiagonalOperator, f: np.ndarray) -> float:
    """quadratic_form(op, f) / ||f||^2; rejects the zero vector."""
    f = np.asarray(f, dtype=float)
    norm_sq = float(np.dot(f, f))
    if norm_sq == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector is undefined")
    return quadratic_form(op, f) / norm_sq
