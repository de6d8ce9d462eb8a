"""Post-processing: well-balance error, L2 error and EOC, entropy, moments.

Functions take a solver from :mod:`sg_swell.dg` for its quadrature weights
and algebra; fields are coefficient arrays in the solver's layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dg import boundary_entropy_flux, entropy_rate_cells, total_entropy
from .timestep import IntegrationResult, integrate

__all__ = [
    "WBError",
    "Moments",
    "wb_error_l1",
    "l2_error",
    "eoc",
    "eoc_table",
    "entropy_rate",
    "entropy_of",
    "moments_and_quantiles",
    "EntropySeries",
    "entropy_series_callback",
    "EntropyBudget",
    "integrate_with_budget",
]


@dataclass(frozen=True)
class WBError:
    raw: np.ndarray  # per mode, sum of J w |dH|
    normalized: np.ndarray  # raw / |Omega|


def _surface(solver, U):
    return U[..., 0, :] + solver.b


def wb_error_l1(solver, U, U0) -> WBError:
    """Per-mode discrete L1 distance of the surface ``H = h + b`` between two states."""
    U, U0 = np.asarray(U, float), np.asarray(U0, float)
    if U.shape != U0.shape or U.shape[:-2] != solver.b.shape[:-1]:
        raise ValueError(f"field shapes {U.shape} and {U0.shape} do not match the mesh {solver.b.shape[:-1]}")
    dH = np.abs(_surface(solver, U) - _surface(solver, U0))
    w = solver.quadrature_weights()
    raw = np.sum(w[..., None] * dH, axis=tuple(range(w.ndim)))
    return WBError(raw, raw / solver.domain_measure())


def l2_error(solver, U, U_exact) -> np.ndarray:
    """Discrete L2 error per conservative variable and mode, shape ``(nvar, K)``.

    Nodal quadrature; the norm is normalized by the domain measure.
    """
    U, U_exact = np.asarray(U, float), np.asarray(U_exact, float)
    if U.shape != U_exact.shape:
        raise ValueError(f"field shapes {U.shape} and {U_exact.shape} differ")
    w = solver.quadrature_weights()
    sq = np.sum(w[..., None, None] * (U - U_exact) ** 2, axis=tuple(range(w.ndim)))
    return np.sqrt(sq / solver.domain_measure())


def eoc(err_m, err_n, ratio: float = 2.0):
    """Observed order between a coarse error ``err_m`` and the refined ``err_n``."""
    return np.log10(np.asarray(err_m, float) / np.asarray(err_n, float)) / np.log10(ratio)


def eoc_table(resolutions, errors) -> list:
    """Rows ``(resolution, error, eoc)``; the first row has ``eoc = nan``.

    Successive resolutions must differ by a factor of two.
    """
    resolutions = list(resolutions)
    if len(resolutions) < 2:
        raise ValueError("an EOC study needs at least two resolutions")
    for a, b in zip(resolutions[:-1], resolutions[1:]):
        if b != 2 * a:
            raise ValueError(f"resolutions must double between runs, got {a} -> {b}")
    rows = []
    for i, (n, e) in enumerate(zip(resolutions, errors)):
        rows.append((n, np.asarray(e), eoc(errors[i - 1], e) if i else np.full(np.shape(e), np.nan)))
    return rows


def entropy_rate(solver, U, t: float = 0.0) -> float:
    """``(1/|Omega|) sum J w  w(U) . dU/dt`` from one RHS evaluation."""
    Uc = solver.to_cells(U)
    return entropy_rate_cells(solver, Uc, solver.rhs_cells(Uc, t))


def entropy_of(solver, U) -> float:
    """Total entropy ``int eta dOmega`` by nodal quadrature."""
    return total_entropy(solver, solver.to_cells(U))


@dataclass(frozen=True)
class Moments:
    mean: np.ndarray
    std: np.ndarray
    probabilities: tuple
    quantiles: np.ndarray  # (len(probabilities), ...)


def moments_and_quantiles(coeffs, basis, probabilities=(0.05, 0.5, 0.95)) -> Moments:
    """Mean, standard deviation and exact quantiles of a Haar expansion.

    The reconstruction takes ``K`` equiprobable values (one per finest cell), so
    quantiles come from that discrete distribution (inverted CDF).
    """
    coeffs = np.asarray(coeffs, float)
    values = coeffs @ basis.values
    mean = coeffs[..., 0]
    std = np.sqrt(np.sum(coeffs[..., 1:] ** 2, axis=-1))
    probs = tuple(float(p) for p in probabilities)
    if any(not 0.0 <= p <= 1.0 for p in probs):
        raise ValueError(f"probabilities must lie in [0, 1], got {probs}")
    q = np.quantile(values, probs, axis=-1, method="inverted_cdf") if probs else np.empty((0,) + mean.shape)
    return Moments(mean, std, probs, np.asarray(q))


@dataclass
class EntropySeries:
    """Callback recording ``(t, int eta)`` every ``period`` steps and at the final step."""

    solver: object
    period: int = 1
    t_final: float | None = None
    cells: bool = False  # states passed in cell space rather than coefficients
    times: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def __call__(self, n: int, t: float, u) -> None:
        last = self.t_final is not None and abs(t - self.t_final) <= 1e-12 * max(1.0, abs(self.t_final))
        if n % self.period == 0 or last:
            self.times.append(float(t))
            self.values.append(total_entropy(self.solver, u) if self.cells else entropy_of(self.solver, u))

    def max_increase(self) -> float:
        v = np.asarray(self.values)
        return float(np.max(np.diff(v))) if v.size > 1 else 0.0


def entropy_series_callback(solver, period: int = 1, t_final: float | None = None, cells: bool = False) -> EntropySeries:
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    return EntropySeries(solver, period, t_final, cells)


@dataclass
class EntropyBudget:
    """Series of ``int eta`` and of the entropy that left through open boundaries.

    ``balanced = eta + outflow`` is the quantity an entropy stable scheme cannot
    increase (up to time discretization error); with periodic or wall-only
    setups ``outflow`` stays zero or only books the wall-face dissipation.
    """

    times: np.ndarray
    eta: np.ndarray
    outflow: np.ndarray

    @property
    def balanced(self) -> np.ndarray:
        return self.eta + self.outflow

    def max_increase(self, balanced: bool = True) -> float:
        v = self.balanced if balanced else self.eta
        return float(np.max(np.diff(v))) if v.size > 1 else 0.0


def integrate_with_budget(solver, Uc0, t0: float, t_final: float, dt: float, period: int = 1, callbacks=()):
    """March in cell space while integrating the boundary entropy flux alongside.

    The accumulated flux is carried as one extra unknown so it is advanced by
    the same Runge-Kutta stages as the field.  Returns ``(result, budget)``;
    ``result.u`` is the final cell-space state.
    """
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    shape = np.shape(Uc0)
    size = int(np.prod(shape))
    track = any(bc != "periodic" for bc in solver.bcs)

    def rhs(y, t):
        Uc = y[:size].reshape(shape)
        out = np.empty_like(y)
        out[:size] = solver.rhs_cells(Uc, t).ravel()
        out[size] = boundary_entropy_flux(solver, Uc) if track else 0.0
        return out

    times, eta, outflow = [], [], []
    tol = 1e-12 * max(1.0, abs(t_final))

    def record(n, t, y):
        Uc = y[:size].reshape(shape)
        if n % period == 0 or abs(t - t_final) <= tol:
            times.append(float(t))
            eta.append(total_entropy(solver, Uc))
            outflow.append(float(y[size]))
        for cb in callbacks:
            cb(n, t, Uc)

    y0 = np.concatenate([np.asarray(Uc0, float).ravel(), [0.0]])
    res = integrate(rhs, y0, t0, t_final, dt, callbacks=[record])
    budget = EntropyBudget(np.array(times), np.array(eta), np.array(outflow))
    return IntegrationResult(res.u[:size].reshape(shape), res.t, res.steps), budget
