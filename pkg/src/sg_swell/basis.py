"""Haar wavelet bases on [-1, 1] with density 1/2, and a small Legendre basis.

All Haar functions are piecewise constant on the finest dyadic cells, so a
basis is fully described by the table ``values[j, c]`` of function ``j`` on
cell ``c``.  Every cell carries probability mass ``1/K``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "HaarBasis",
    "BivariateHaarBasis",
    "QuadratureSpec",
    "haar_basis",
    "bivariate_haar_basis",
    "evaluate",
    "project",
    "reconstruct",
    "legendre_project_demo",
    "legendre_reconstruct",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre rule applied on every smooth sub-piece of a cell."""

    points: int = 50

    def __post_init__(self):
        if self.points < 1:
            raise ValueError(f"points per smooth piece must be >= 1, got {self.points}")

    def rule(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        x, w = np.polynomial.legendre.leggauss(self.points)
        half = 0.5 * (b - a)
        return 0.5 * (a + b) + half * x, half * w


def _level(j: int) -> int:
    # constant function has level 0, the mother wavelet level 1, ...
    return 0 if j == 0 else int(np.floor(np.log2(j))) + 1


def _haar_table(n_levels: int) -> np.ndarray:
    K = 2**n_levels
    values = np.zeros((K, K))
    values[0] = 1.0
    for lev in range(n_levels):
        width = K >> lev  # finest cells covered by one wavelet at this level
        amp = 2.0 ** (lev / 2)
        for m in range(2**lev):
            j = 2**lev + m
            start = m * width
            values[j, start : start + width // 2] = amp
            values[j, start + width // 2 : start + width] = -amp
    return values


@dataclass(frozen=True, eq=False)
class HaarBasis:
    """Orthonormal Haar basis with ``K = 2**n_levels`` functions.

    Ordering is level-major, left to right within a level; ``psi_1 = 1`` and
    ``psi_2`` is ``+1`` on ``[-1, 0)`` and ``-1`` on ``(0, 1]``.
    """

    n_levels: int
    values: np.ndarray = field(repr=False)

    @property
    def K(self) -> int:
        return self.values.shape[0]

    @property
    def ndim(self) -> int:
        return 1

    @property
    def cell_edges(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.K + 1)

    @property
    def cells(self) -> list[tuple[float, float]]:
        e = self.cell_edges
        return [(e[c], e[c + 1]) for c in range(self.K)]

    @property
    def cell_midpoints(self) -> np.ndarray:
        e = self.cell_edges
        return 0.5 * (e[:-1] + e[1:])

    def level(self, k: int) -> int:
        """Resolution level of the 1-based function ``k`` (constant and mother share level 0)."""
        return max(_level(k - 1) - 1, 0)

    def cell_index(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        c = np.ceil((xi + 1.0) * self.K / 2.0).astype(int) - 1
        return np.clip(c, 0, self.K - 1)


@dataclass(frozen=True, eq=False)
class BivariateHaarBasis:
    """Tensor Haar basis in ``(xi_1, xi_2)`` restricted to a graded enumeration.

    The retained set is the full tensor product of ``2**levels[0]`` functions in
    ``xi_1`` and ``2**levels[1]`` in ``xi_2`` so that products stay in the span.
    ``pairs[k] = (a, b)`` gives the 0-based univariate indices of function ``k``.
    Cells are enumerated ``c = c1 * n2 + c2``.
    """

    levels: tuple[int, int]
    pairs: tuple[tuple[int, int], ...]
    values: np.ndarray = field(repr=False)
    components: tuple[HaarBasis, HaarBasis] = field(repr=False)

    @property
    def K(self) -> int:
        return self.values.shape[0]

    @property
    def ndim(self) -> int:
        return 2

    @property
    def cells(self) -> list[tuple[tuple[float, float], tuple[float, float]]]:
        c1, c2 = self.components
        return [(a, b) for a in c1.cells for b in c2.cells]

    @property
    def cell_midpoints(self) -> np.ndarray:
        m1, m2 = (b.cell_midpoints for b in self.components)
        return np.array([(a, b) for a in m1 for b in m2])


def haar_basis(n_levels: int) -> HaarBasis:
    if n_levels < 0:
        raise ValueError(f"n_levels must be >= 0, got {n_levels}")
    return HaarBasis(n_levels, _haar_table(n_levels))


def bivariate_haar_basis(K: int | None = None, levels: tuple[int, int] | None = None) -> BivariateHaarBasis:
    """Build the bivariate basis from a total size ``K`` (power of two) or explicit levels.

    ``K = 2**L`` splits as ``ceil(L/2)`` levels in ``xi_1`` and ``floor(L/2)`` in ``xi_2``,
    so K=2 resolves only ``xi_1``, K=4 is the four-quadrant basis, K=8 adds level 1 in ``xi_1``.
    """
    if levels is None:
        if K is None or K < 1 or K & (K - 1):
            raise ValueError(f"K must be a positive power of two, got {K}")
        L = int(np.log2(K))
        levels = ((L + 1) // 2, L // 2)
    b1, b2 = haar_basis(levels[0]), haar_basis(levels[1])
    pairs = [(a, b) for a in range(b1.K) for b in range(b2.K)]
    pairs.sort(key=lambda p: (_level(p[0]) + _level(p[1]), _level(p[1]), p[0], p[1]))
    values = np.array([np.kron(b1.values[a], b2.values[b]) for a, b in pairs])
    return BivariateHaarBasis(tuple(levels), tuple(pairs), values, (b1, b2))


def evaluate(basis: HaarBasis | BivariateHaarBasis, k: int, xi) -> float:
    """Value of the 1-based basis function ``k`` at ``xi``; breakpoints take the left cell."""
    if not 1 <= k <= basis.K:
        raise IndexError(f"basis index {k} outside 1..{basis.K}")
    if basis.ndim == 1:
        xi = float(xi)
        if not -1.0 <= xi <= 1.0:
            raise ValueError(f"xi={xi} outside [-1, 1]")
        return float(basis.values[k - 1, basis.cell_index(xi)])
    x1, x2 = (float(v) for v in xi)
    if not (-1.0 <= x1 <= 1.0 and -1.0 <= x2 <= 1.0):
        raise ValueError(f"xi={xi} outside [-1, 1]^2")
    a, b = basis.pairs[k - 1]
    c1, c2 = basis.components
    return float(c1.values[a, c1.cell_index(x1)] * c2.values[b, c2.cell_index(x2)])


def _pieces(lo: float, hi: float, breaks: Sequence[float]) -> list[tuple[float, float]]:
    inner = sorted(x for x in breaks if lo < x < hi)
    edges = [lo, *inner, hi]
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _clip(cell: tuple[float, float], support) -> tuple[float, float] | None:
    if support is None:
        return cell
    lo, hi = max(cell[0], support[0]), min(cell[1], support[1])
    return (lo, hi) if hi > lo else None


def _cell_averages_1d(basis: HaarBasis, f, spec: QuadratureSpec, breakpoints, support):
    sums = []
    for cell in basis.cells:
        width = cell[1] - cell[0]
        region = _clip(cell, support)
        total = 0.0
        if region is not None:
            for a, b in _pieces(*region, breakpoints or ()):
                x, w = spec.rule(a, b)
                vals = np.asarray(f(x), dtype=float)
                total = total + vals @ w
        sums.append(np.asarray(total, dtype=float) / width)
    return np.stack(sums, axis=-1)


def _cell_averages_2d(basis: BivariateHaarBasis, f, spec: QuadratureSpec, breakpoints, support):
    b1, b2 = basis.components
    br1, br2 = breakpoints if breakpoints is not None else ((), ())
    s1, s2 = support if support is not None else (None, None)
    out = []
    for cell1 in b1.cells:
        for cell2 in b2.cells:
            area = (cell1[1] - cell1[0]) * (cell2[1] - cell2[0])
            r1, r2 = _clip(cell1, s1), _clip(cell2, s2)
            total = 0.0
            if r1 is not None and r2 is not None:
                for p1 in _pieces(*r1, br1):
                    x1, w1 = spec.rule(*p1)
                    for p2 in _pieces(*r2, br2):
                        x2, w2 = spec.rule(*p2)
                        X1, X2 = np.meshgrid(x1, x2, indexing="ij")
                        vals = np.asarray(f(X1.ravel(), X2.ravel()), dtype=float)
                        total = total + vals @ np.outer(w1, w2).ravel()
            out.append(np.asarray(total, dtype=float) / area)
    return np.stack(out, axis=-1)


def project(
    basis: HaarBasis | BivariateHaarBasis,
    f: Callable,
    spec: QuadratureSpec = QuadratureSpec(),
    breakpoints=None,
    support=None,
) -> np.ndarray:
    """Coefficients ``<f, psi_k>`` by Gauss quadrature on every finest cell.

    ``f`` maps quadrature points to values (``f(xi)`` in 1D, ``f(xi1, xi2)`` in 2D) and
    may return extra leading batch axes; coefficients get the same leading axes.
    ``breakpoints`` lists where ``f`` is non-smooth (per dimension in 2D) and ``support``
    an interval (per dimension) outside which ``f`` vanishes.
    """
    if basis.ndim == 1:
        avg = _cell_averages_1d(basis, f, spec, breakpoints, support)
    else:
        avg = _cell_averages_2d(basis, f, spec, breakpoints, support)
    if not np.all(np.isfinite(avg)):
        raise FloatingPointError("non-finite function values encountered during projection")
    return avg @ basis.values.T / basis.K


def reconstruct(basis: HaarBasis | BivariateHaarBasis, coeffs, xi) -> float:
    coeffs = np.asarray(coeffs, dtype=float)
    return float(sum(coeffs[k - 1] * evaluate(basis, k, xi) for k in range(1, basis.K + 1)))


def legendre_project_demo(f: Callable, K: int, spec: QuadratureSpec = QuadratureSpec(), breakpoints=()) -> np.ndarray:
    """Coefficients of ``f`` in the orthonormal Legendre basis ``sqrt(2n+1) P_n`` on [-1, 1]."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    coeffs = np.zeros(K)
    for a, b in _pieces(-1.0, 1.0, breakpoints):
        x, w = spec.rule(a, b)
        vals = np.asarray(f(x), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("non-finite function values encountered during projection")
        for n in range(K):
            phi = np.sqrt(2 * n + 1) * np.polynomial.legendre.Legendre.basis(n)(x)
            coeffs[n] += 0.5 * (vals * phi) @ w
    return coeffs


def legendre_reconstruct(coeffs, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    scaled = [c * np.sqrt(2 * n + 1) for n, c in enumerate(coeffs)]
    return np.polynomial.legendre.legval(xi, scaled)
