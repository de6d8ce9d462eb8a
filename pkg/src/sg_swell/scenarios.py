"""Initial conditions, stochastic bathymetries and the manufactured solution.

Bathymetry generators return Haar coefficients with the evaluation points as
leading axes, ``(*x.shape, K)``.  States are built in coefficient space with
the variable axis second to last, matching :mod:`sg_swell.dg`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .algebra import GalerkinAlgebra
from .basis import (
    BivariateHaarBasis,
    HaarBasis,
    QuadratureSpec,
    bivariate_haar_basis,
    haar_basis,
    project,
)
from .dg import DGSolver1D, DGSolver2D, Mesh1D, Mesh2D, lgl_operators
from .errors import NonPositiveHeight
from .model import flux_2d

__all__ = [
    "Scenario",
    "Setup",
    "SCENARIOS",
    "build",
    "bottom_uncertain_height_1d",
    "bottom_uncertain_position_1d",
    "bottom_uncertain_position_2d",
    "bottom_gaussian_2d",
    "bottom_dambreak_1d",
    "ic_lake_at_rest",
    "ic_dambreak_1d",
    "ic_dambreak_2d_circular",
    "ic_perturbation_2d",
    "mms_fields",
    "mms_source",
    "MMSSource",
    "check_admissible",
]

LAKE_LEVEL = 4.0 / 3.0


def _bump(r):
    # 1 - r^2/4 on |r| <= 2, zero outside
    return np.where(np.abs(r) <= 2.0, 1.0 - 0.25 * r**2, 0.0)


def _cell_average(f, lo, hi, width, spec: QuadratureSpec):
    """Average of ``f`` over ``[lo, hi]`` (vectorized bounds) divided by the cell ``width``.

    Empty intervals (``hi <= lo``) contribute zero.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
    live = hi > lo
    xg, wg = np.polynomial.legendre.leggauss(spec.points)
    half = 0.5 * np.where(live, hi - lo, 0.0)
    mid = 0.5 * (hi + lo)
    pts = mid[..., None] + half[..., None] * xg
    return np.sum(f(pts) * wg, axis=-1) * half / width


# {{{ bathymetries


def bottom_uncertain_height_1d(basis: HaarBasis, c: float, x, x0: float = 10.0) -> np.ndarray:
    """Bump ``(1 + c xi)(1 - (x-x0)^2/4)`` projected in closed form.

    Mode 1 carries the deterministic bump, a wavelet on level ``l`` carries
    ``-c 2^(-1.5 l) / 2`` times it.
    """
    if not 0.0 < c < 1.0:
        raise ValueError(f"amplitude c must lie in (0, 1), got {c}")
    scale = np.array(
        [1.0] + [-0.5 * c * 2.0 ** (-1.5 * basis.level(k)) for k in range(2, basis.K + 1)]
    )
    return _bump(np.asarray(x, float) - x0)[..., None] * scale


def bottom_uncertain_height_1d_quadrature(basis: HaarBasis, c: float, x, x0: float = 10.0, spec=QuadratureSpec()):
    """Same field as :func:`bottom_uncertain_height_1d` by direct projection (cross-check)."""
    x = np.asarray(x, float)
    bump = _bump(x - x0)
    return project(basis, lambda xi: np.multiply.outer(bump, 1.0 + c * xi), spec)


def bottom_uncertain_position_1d(
    basis: HaarBasis, c: float, spec: QuadratureSpec = QuadratureSpec(), x=0.0, x0: float = 10.0
) -> np.ndarray:
    """Bump centred at ``x0 + c xi``, projected pointwise in ``x``.

    On each Haar cell only the part of the cell where the bump is wetted,
    ``(x-x0-2)/c <= xi <= (x-x0+2)/c``, contributes; the integrand is smooth there.
    """
    if c <= 0:
        raise ValueError(f"amplitude c must be positive, got {c}")
    x = np.asarray(x, float)
    s_lo, s_hi = (x - x0 - 2.0) / c, (x - x0 + 2.0) / c
    xe = x[..., None]
    avgs = []
    for a, b in basis.cells:
        lo, hi = np.maximum(a, s_lo), np.minimum(b, s_hi)
        avgs.append(_cell_average(lambda xi: 1.0 - 0.25 * (xe - x0 - c * xi) ** 2, lo, hi, b - a, spec))
    return np.stack(avgs, axis=-1) @ basis.values.T / basis.K


def bottom_uncertain_position_2d(
    basis2: BivariateHaarBasis,
    c: float,
    spec: QuadratureSpec = QuadratureSpec(),
    x=0.0,
    y=0.0,
    center: tuple[float, float] = (10.0, 10.0),
) -> np.ndarray:
    """``1 - (x-x0)^2 (y-y0)^2 / 16`` on the box ``|x-x0|, |y-y0| <= 2`` with ``(x0, y0) = center + c xi``.

    The wetted region in ``(xi_1, xi_2)`` is a rectangle, so each Haar cell
    reduces to a tensor Gauss rule on its intersection with that rectangle.
    """
    if c <= 0:
        raise ValueError(f"amplitude c must be positive, got {c}")
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    xc, yc = center
    sx = ((x - xc - 2.0) / c, (x - xc + 2.0) / c)
    sy = ((y - yc - 2.0) / c, (y - yc + 2.0) / c)
    xg, wg = np.polynomial.legendre.leggauss(spec.points)
    avgs = []
    for (a1, b1), (a2, b2) in basis2.cells:
        lo1, hi1 = np.maximum(a1, sx[0]), np.minimum(b1, sx[1])
        lo2, hi2 = np.maximum(a2, sy[0]), np.minimum(b2, sy[1])
        h1 = 0.5 * np.where(hi1 > lo1, hi1 - lo1, 0.0)
        h2 = 0.5 * np.where(hi2 > lo2, hi2 - lo2, 0.0)
        p1 = (0.5 * (lo1 + hi1))[..., None] + h1[..., None] * xg
        p2 = (0.5 * (lo2 + hi2))[..., None] + h2[..., None] * xg
        dx = x[..., None] - xc - c * p1  # (..., q)
        dy = y[..., None] - yc - c * p2
        # integrand 1 - dx^2 dy^2 / 16 integrates separably over the tensor rule
        i1 = np.sum(wg * h1[..., None], axis=-1)
        i2 = np.sum(wg * h2[..., None], axis=-1)
        m1 = np.sum(wg * dx**2 * h1[..., None], axis=-1)
        m2 = np.sum(wg * dy**2 * h2[..., None], axis=-1)
        avgs.append((i1 * i2 - m1 * m2 / 16.0) / ((b1 - a1) * (b2 - a2)))
    return np.stack(avgs, axis=-1) @ basis2.values.T / basis2.K


def bottom_gaussian_2d(basis2: BivariateHaarBasis, x, y, spec: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """``0.8 exp(-5 (x-0.9+0.1 xi_1)^2 - 50 (y-1+0.1 xi_2)^2)``; separable, so cell averages factor."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    xe, ye = x[..., None], y[..., None]
    avgs = []
    for (a1, b1), (a2, b2) in basis2.cells:
        f1 = _cell_average(lambda xi: np.exp(-5.0 * (xe - 0.9 + 0.1 * xi) ** 2), a1, b1, b1 - a1, spec)
        f2 = _cell_average(lambda xi: np.exp(-50.0 * (ye - 1.0 + 0.1 * xi) ** 2), a2, b2, b2 - a2, spec)
        avgs.append(0.8 * f1 * f2)
    return np.stack(avgs, axis=-1) @ basis2.values.T / basis2.K


def bottom_dambreak_1d(basis: HaarBasis, x, spec: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """``(cos(5 pi x) + 2 + xi)^2 / 9`` on ``|x| <= 0.2``, ``(1 + xi)/9`` elsewhere."""
    x = np.asarray(x, float)
    inner = np.abs(x) <= 0.2
    cx = np.cos(5.0 * np.pi * x)

    def f(xi):
        return np.where(inner[..., None], np.add.outer(cx + 2.0, xi) ** 2, 1.0 + np.multiply.outer(np.ones_like(x), xi)) / 9.0

    return project(basis, f, spec)


# }}}


# {{{ initial conditions


def check_admissible(alg: GalerkinAlgebra, h, where: str = "initial state") -> None:
    lam = alg.to_cells(h)
    if np.any(lam <= alg.eps_pos):
        idx = tuple(int(i) for i in np.unravel_index(np.argmin(lam), lam.shape))
        raise NonPositiveHeight(f"{where}: height eigenvalue {lam[idx]:.3e} at node {idx[:-1]}, stochastic cell {idx[-1]}")


def _state(h, momenta) -> np.ndarray:
    return np.stack([h, *momenta], axis=-2)


def ic_lake_at_rest(alg: GalerkinAlgebra, b, ndim: int = 1, level: float = LAKE_LEVEL) -> np.ndarray:
    """Surface ``level * e_1`` at rest over ``b``: ``h = H - b``, zero momenta."""
    b = np.asarray(b, float)
    H = np.zeros_like(b)
    H[..., 0] = level
    h = H - b
    check_admissible(alg, h, "lake at rest")
    return _state(h, [np.zeros_like(h)] * ndim)


def ic_dambreak_1d(alg: GalerkinAlgebra, x, b, offset: float = 2.0) -> np.ndarray:
    """Mean surface ``1 + offset`` for ``x <= 0`` and ``0.5 + offset`` otherwise, at rest over ``b``.

    With ``offset = 0`` the stochastic crest pierces the surface and the state
    is rejected; the default keeps every stochastic cell wet through the run.
    """
    x = np.asarray(x, float)
    H = np.zeros(x.shape + (alg.K,))
    H[..., 0] = np.where(x <= 0.0, 1.0, 0.5) + offset
    h = H - b
    check_admissible(alg, h, "dam break")
    return _state(h, [np.zeros_like(h)])


def ic_dambreak_2d_circular(alg: GalerkinAlgebra, X, Y, center=(10.0, 10.0), radius: float = 1.5) -> np.ndarray:
    """Mean depth 2 inside the disc, 1.5 outside, at rest."""
    r = np.hypot(np.asarray(X) - center[0], np.asarray(Y) - center[1])
    h = np.zeros(r.shape + (alg.K,))
    h[..., 0] = np.where(r <= radius, 2.0, 1.5)
    check_admissible(alg, h, "circular dam break")
    return _state(h, [np.zeros_like(h)] * 2)


def ic_perturbation_2d(alg: GalerkinAlgebra, X, Y, b) -> np.ndarray:
    """Surface ``1.01`` on ``0.05 <= x <= 0.15``, ``1`` elsewhere, over ``b``; at rest."""
    X = np.asarray(X, float)
    H = np.zeros(X.shape + (alg.K,))
    H[..., 0] = np.where((X >= 0.05) & (X <= 0.15), 1.01, 1.0)
    h = H - b
    check_admissible(alg, h, "perturbation")
    return _state(h, [np.zeros_like(h)] * 2)


# }}}


# {{{ manufactured solution (K = 2)

MMS_V1 = np.array([0.64, 0.0])
MMS_V2 = np.array([-0.75, 0.0])


def _mms_parts(x, y, t):
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    tp = 2 * np.pi
    ct, st = np.cos(tp * t), np.sin(tp * t)
    cx, cy, sx, sy = np.cos(tp * x), np.cos(tp * y), np.sin(tp * x), np.sin(tp * y)
    px, py = np.sin(np.pi * x), np.sin(np.pi * y)
    qx, qy = np.cos(np.pi * x), np.cos(np.pi * y)
    H = np.stack([1 + 0.05 * cx * cy * ct, 0.05 + 0.05 * px * py * ct], axis=-1)
    Ht = np.stack([-0.05 * cx * cy * tp * st, -0.05 * px * py * tp * st], axis=-1)
    Hx = np.stack([-0.05 * tp * sx * cy * ct, 0.05 * np.pi * qx * py * ct], axis=-1)
    Hy = np.stack([-0.05 * tp * cx * sy * ct, 0.05 * np.pi * px * qy * ct], axis=-1)
    b = np.stack([0.7 + 0.05 * sx * sy, 0.15 + 0.05 * cx * cy], axis=-1)
    bx = np.stack([0.05 * tp * cx * sy, -0.05 * tp * sx * cy], axis=-1)
    by = np.stack([0.05 * tp * sx * cy, -0.05 * tp * cx * sy], axis=-1)
    return H, Ht, Hx, Hy, b, bx, by


def _mms_conservative(alg, h):
    v1 = np.broadcast_to(MMS_V1, h.shape)
    v2 = np.broadcast_to(MMS_V2, h.shape)
    return _state(h, [alg.mul(h, v1), alg.mul(h, v2)])


def mms_fields(alg: GalerkinAlgebra, x, y, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Manufactured state ``(h, P(h) v1, P(h) v2)`` and bathymetry at ``(x, y, t)``, K = 2."""
    if alg.K != 2:
        raise ValueError(f"the manufactured solution is defined for K=2, got K={alg.K}")
    H, _, _, _, b, _, _ = _mms_parts(x, y, t)
    return _mms_conservative(alg, H - b), b


def mms_source(alg: GalerkinAlgebra, x, y, t: float, g: float, method: str = "fd", eps: float = 1e-8) -> np.ndarray:
    """Forcing ``u_t + J1 u_x + J2 u_y + (0; g P(h) b_x; g P(h) b_y)``.

    ``method="fd"`` takes the central difference of the flux along the analytic
    derivative with step ``eps``; ``method="exact"`` uses the exact directional
    derivative.  Output has shape ``(*x.shape, 3, K)`` in coefficient space.
    """
    if alg.K != 2:
        raise ValueError(f"the manufactured solution is defined for K=2, got K={alg.K}")
    H, Ht, Hx, Hy, b, bx, by = _mms_parts(x, y, t)
    h = H - b
    u = _mms_conservative(alg, h)
    # all maps h -> u are linear, so derivatives of u follow from those of h
    ut = _mms_conservative(alg, Ht)
    ux = _mms_conservative(alg, Hx - bx)
    uy = _mms_conservative(alg, Hy - by)
    if method == "fd":
        jx = (flux_2d(alg, u + eps * ux, g)[0] - flux_2d(alg, u - eps * ux, g)[0]) / (2 * eps)
        jy = (flux_2d(alg, u + eps * uy, g)[1] - flux_2d(alg, u - eps * uy, g)[1]) / (2 * eps)
    elif method == "exact":
        jx = _flux_jvp(alg, u, ux, g, 0)
        jy = _flux_jvp(alg, u, uy, g, 1)
    else:
        raise ValueError(f"unknown source method {method!r}; use 'fd' or 'exact'")
    zero = np.zeros_like(h)
    bath = _state(zero, [g * alg.mul(h, bx), g * alg.mul(h, by)])
    return ut + jx + jy + bath


def _flux_jvp(alg, U, dU, g, direction):
    # exact directional derivative of the Galerkin flux, evaluated cellwise
    Uc, dc = alg.to_cells(U), alg.to_cells(dU)
    h, dh = Uc[..., 0, :], dc[..., 0, :]
    v = [Uc[..., 1 + d, :] / h for d in range(2)]
    dq = [dc[..., 1 + d, :] for d in range(2)]
    n = direction
    mom = [v[n] * dq[m] + v[m] * dq[n] - v[n] * v[m] * dh for m in range(2)]
    mom[n] = mom[n] + g * h * dh
    return alg.from_cells(_state(dq[n], mom))


@dataclass
class MMSSource:
    """Callable forcing in cell space for :class:`DGSolver2D` (``source(t)``).

    The forcing is a combination of ``1, cos(2 pi t), cos(2 pi t)^2`` and
    ``sin(2 pi t)`` with space-dependent fields.  With ``precompute`` those
    fields are fitted from four evaluations and checked against a fifth, so
    each call costs a few array operations.
    """

    alg: GalerkinAlgebra
    X: np.ndarray
    Y: np.ndarray
    g: float
    method: str = "exact"
    eps: float = 1e-8
    precompute: bool = True
    _fields: np.ndarray | None = field(default=None, init=False, repr=False)

    _SAMPLE_TIMES = (0.0, 0.25, 0.5, 1.0 / 3.0)

    @staticmethod
    def _basis(t):
        c, s = np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)
        return np.array([1.0, c, c * c, s])

    def direct(self, t: float) -> np.ndarray:
        return self.alg.to_cells(mms_source(self.alg, self.X, self.Y, t, self.g, self.method, self.eps))

    def __post_init__(self):
        if not self.precompute:
            return
        A = np.array([self._basis(t) for t in self._SAMPLE_TIMES])
        samples = np.stack([self.direct(t) for t in self._SAMPLE_TIMES])
        self._fields = np.tensordot(np.linalg.inv(A), samples, axes=1)
        probe = 0.123
        scale = max(1.0, float(np.max(np.abs(samples))))
        if np.max(np.abs(self(probe) - self.direct(probe))) > 1e-9 * scale:
            self._fields = None  # structure assumption violated; evaluate directly

    def __call__(self, t: float) -> np.ndarray:
        if self._fields is None:
            return self.direct(t)
        return np.tensordot(self._basis(t), self._fields, axes=1)


# }}}


# {{{ scenario registry


@dataclass(frozen=True)
class Scenario:
    """Everything needed to set up one run; ``elements`` is per direction."""

    name: str
    ndim: int
    domain: tuple
    K: int = 2
    N: int = 3
    elements: int = 16
    g: float = 9.81
    dt: float = 0.1
    t_final: float = 100.0
    bc: tuple = ("periodic", "periodic")
    family: str = "ec1d"
    mode: str = "EC"
    c: float = 0.5
    quad_points: int = 50
    mms_method: str = "exact"
    offset: float = 2.0  # surface lift of the 1D dam break
    compiled: bool = True

    def with_(self, **kw) -> "Scenario":
        return replace(self, **kw)


@dataclass
class Setup:
    scenario: Scenario
    basis: object
    alg: GalerkinAlgebra
    solver: object
    U0: np.ndarray
    exact: Callable | None = field(default=None, repr=False)  # t -> exact state (MMS only)


def _basis(sc: Scenario):
    if sc.K < 1 or sc.K & (sc.K - 1):
        raise ValueError(f"K must be a power of two, got {sc.K}")
    if sc.ndim == 1:
        return haar_basis(int(np.log2(sc.K)))
    return bivariate_haar_basis(sc.K)


def _mesh(sc: Scenario):
    if sc.ndim == 1:
        return Mesh1D(sc.domain[0], sc.domain[1], sc.elements)
    return Mesh2D(*sc.domain, sc.elements, sc.elements)


def build(sc: Scenario) -> Setup:
    """Construct basis, algebra, operators, solver and the initial state."""
    basis = _basis(sc)
    alg = GalerkinAlgebra(basis)
    ops = lgl_operators(sc.N)
    mesh = _mesh(sc)
    spec = QuadratureSpec(sc.quad_points)
    exact = None
    source = None
    if sc.ndim == 1:
        x = mesh.node_coordinates(ops)
        if sc.name == "wb_height_1d":
            b = bottom_uncertain_height_1d(basis, sc.c, x)
            U0 = ic_lake_at_rest(alg, b, 1)
        elif sc.name == "wb_position_1d":
            b = bottom_uncertain_position_1d(basis, sc.c, spec, x)
            U0 = ic_lake_at_rest(alg, b, 1)
        elif sc.name == "dambreak_1d":
            b = bottom_dambreak_1d(basis, x, spec)
            U0 = ic_dambreak_1d(alg, x, b, sc.offset)
        else:
            raise ValueError(f"unknown 1D scenario {sc.name!r}")
        solver = DGSolver1D(alg, ops, mesh, b, sc.g, sc.family, sc.mode, sc.bc[0], compiled=sc.compiled)
    else:
        X, Y = mesh.node_coordinates(ops)
        if sc.name == "wb_position_2d":
            b = bottom_uncertain_position_2d(basis, sc.c, spec, X, Y)
            U0 = ic_lake_at_rest(alg, b, 2)
        elif sc.name == "dambreak_2d":
            b = bottom_uncertain_position_2d(basis, sc.c, spec, X, Y)
            U0 = ic_dambreak_2d_circular(alg, X, Y)
        elif sc.name == "perturbation_2d":
            b = bottom_gaussian_2d(basis, X, Y, spec)
            U0 = ic_perturbation_2d(alg, X, Y, b)
        elif sc.name == "mms_2d":
            U0, b = mms_fields(alg, X, Y, 0.0)
            source = MMSSource(alg, X, Y, sc.g, sc.mms_method)

            def exact(t, alg=alg, X=X, Y=Y):
                return mms_fields(alg, X, Y, t)[0]

        else:
            raise ValueError(f"unknown 2D scenario {sc.name!r}")
        solver = DGSolver2D(alg, ops, mesh, b, sc.g, sc.family, sc.mode, tuple(sc.bc), source, compiled=sc.compiled)
    solver.set_reference(U0)
    return Setup(sc, basis, alg, solver, U0, exact)


_P = ("periodic", "periodic")

SCENARIOS: dict[str, Scenario] = {
    "wb_height_1d": Scenario("wb_height_1d", 1, (0.0, 20.0), c=0.25, bc=("periodic",)),
    "wb_position_1d": Scenario("wb_position_1d", 1, (0.0, 20.0), c=0.5, bc=("periodic",)),
    "wb_position_2d": Scenario(
        "wb_position_2d", 2, (0.0, 20.0, 0.0, 20.0), elements=4, family="ec2d", c=0.5
    ),
    "dambreak_1d": Scenario("dambreak_1d", 1, (-1.0, 1.0), dt=1e-3, t_final=0.65, bc=("periodic",)),
    "dambreak_2d": Scenario(
        "dambreak_2d", 2, (0.0, 20.0, 0.0, 20.0), elements=8, dt=1e-2, t_final=0.5, family="ec2d", c=0.5
    ),
    "perturbation_2d": Scenario(
        "perturbation_2d", 2, (0.0, 2.0, 0.0, 2.0), N=4, elements=8, dt=1e-3, t_final=1.8,
        bc=("characteristic", "periodic"), family="ec2d", mode="ES",
    ),
    "mms_2d": Scenario(
        "mms_2d", 2, (0.0, 1.0, 0.0, 1.0), elements=8, dt=5e-4, t_final=0.5, family="ec2d", mode="ES"
    ),
}

# }}}
