"""Stochastic Galerkin shallow water model: fluxes, entropy pair, wave speeds.

States are arrays with the variable axis second to last and the K stochastic
coefficients (or cell values) last: ``(..., 2, K)`` holds ``(h, q)`` in 1D and
``(..., 3, K)`` holds ``(h, q1, q2)`` in 2D.  Every function takes an algebra
object first, so the same code runs on coefficients (``GalerkinAlgebra``) and
on stochastic cell values (``CellAlgebra``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EntropyQuantities",
    "velocity",
    "flux_1d",
    "flux_2d",
    "entropy_quantities_1d",
    "entropy_quantities_2d",
    "entropy_variables",
    "entropy_density",
    "wave_speed_bound",
    "roe_flux_1d",
    "roe_entropy_pair",
]


@dataclass(frozen=True)
class EntropyQuantities:
    eta: np.ndarray
    H: tuple  # one entry per space dimension
    w: np.ndarray
    phi: tuple  # potential split per direction; their sum is the total potential
    v: tuple

    @property
    def phi_total(self):
        return sum(self.phi)


def velocity(alg, U) -> np.ndarray:
    """Velocity coefficients ``P(h)^{-1} q`` for every momentum component, shape ``(..., d, K)``."""
    h = U[..., :1, :]
    return alg.solve_height(h, U[..., 1:, :])


def flux_1d(alg, U, g: float) -> np.ndarray:
    h, q = U[..., 0, :], U[..., 1, :]
    v = alg.solve_height(h, q)
    return np.stack([q, alg.mul(q, v) + 0.5 * g * alg.mul(h, h)], axis=-2)


def flux_2d(alg, U, g: float) -> tuple[np.ndarray, np.ndarray]:
    h, q1, q2 = U[..., 0, :], U[..., 1, :], U[..., 2, :]
    v1, v2 = alg.solve_height(h, q1), alg.solve_height(h, q2)
    p = 0.5 * g * alg.mul(h, h)
    fx = np.stack([q1, alg.mul(q1, v1) + p, alg.mul(q1, v2)], axis=-2)
    fy = np.stack([q2, alg.mul(q2, v1), alg.mul(q2, v2) + p], axis=-2)
    return fx, fy


def entropy_density(alg, U, b, g: float) -> np.ndarray:
    """Entropy ``eta`` (total energy) for 1D or 2D states."""
    h = U[..., 0, :]
    kinetic = sum(alg.dot(q, alg.solve_height(h, q)) for q in np.moveaxis(U[..., 1:, :], -2, 0))
    return 0.5 * (kinetic + g * alg.dot(h, h)) + g * alg.dot(h, b)


def entropy_variables(alg, U, b, g: float) -> np.ndarray:
    h = U[..., 0, :]
    vs = alg.solve_height(h[..., None, :], U[..., 1:, :])
    w0 = g * (h + b) - 0.5 * sum(alg.mul(v, v) for v in np.moveaxis(vs, -2, 0))
    return np.concatenate([w0[..., None, :], vs], axis=-2)


def _entropy_quantities(alg, U, b, g):
    h = U[..., 0, :]
    qs = list(np.moveaxis(U[..., 1:, :], -2, 0))
    vs = [alg.solve_height(h, q) for q in qs]
    eta = 0.5 * (sum(alg.dot(q, v) for q, v in zip(qs, vs)) + g * alg.dot(h, h)) + g * alg.dot(h, b)
    H = tuple(
        0.5 * sum(alg.dot(v, alg.mul(qd, v)) for v in vs) + g * alg.dot(qd, h) + g * alg.dot(qd, b)
        for qd in qs
    )
    w0 = g * (h + b) - 0.5 * sum(alg.mul(v, v) for v in vs)
    w = np.stack([w0, *vs], axis=-2)
    hh = alg.mul(h, h)
    phi = tuple(0.5 * g * alg.dot(v, hh) for v in vs)
    return EntropyQuantities(eta, H, w, phi, tuple(vs))


def entropy_quantities_1d(alg, U, b, g: float) -> EntropyQuantities:
    """Entropy, entropy flux, entropy variables ``(w_h; v)`` and potential ``g/2 v^T P(h) h``."""
    return _entropy_quantities(alg, U, b, g)


def entropy_quantities_2d(alg, U, b, g: float) -> EntropyQuantities:
    """2D analogue; ``phi`` is split per direction and ``H = (H1, H2)``."""
    return _entropy_quantities(alg, U, b, g)


def wave_speed_bound(alg, U, g: float, direction: int = 0) -> np.ndarray:
    """``max_k |lam_k(v_n)| + sqrt(g lam_k(h))`` over stochastic cells, per leading index."""
    h = U[..., 0, :]
    lam_h = alg.eigvals(h)
    alg.check_height(h)
    lam_v = alg.eigvals(alg.solve_height(h, U[..., 1 + direction, :]))
    return np.max(np.abs(lam_v) + np.sqrt(g * lam_h), axis=-1)


def roe_flux_1d(alg, U, g: float) -> np.ndarray:
    """Flux written in the Roe variables ``alpha = h^{1/2}``, ``beta = P(alpha)^{-1} q``."""
    h, q = U[..., 0, :], U[..., 1, :]
    alpha = alg.sqrt(h)
    beta = alg.solve(alpha, q)
    a2 = alg.mul(alpha, alpha)
    return np.stack([q, alg.mul(beta, beta) + 0.5 * g * alg.mul(a2, a2)], axis=-2)


def roe_entropy_pair(alg, U, b, g: float) -> tuple[np.ndarray, np.ndarray]:
    h, q = U[..., 0, :], U[..., 1, :]
    alpha = alg.sqrt(h)
    beta = alg.solve(alpha, q)
    a2 = alg.mul(alpha, alpha)
    eta = 0.5 * (g * alg.dot(a2, a2) + alg.dot(beta, beta)) + g * alg.dot(alpha, alg.mul(alpha, b))
    H = (
        0.5 * alg.dot(beta, alg.mul(beta, alg.solve(alpha, beta)))
        + g * alg.dot(alpha, alg.pow_apply(alpha, 2, beta))
        + g * alg.dot(beta, alg.mul(alpha, b))
    )
    return eta, H
