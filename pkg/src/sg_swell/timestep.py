"""Five-stage fourth-order low-storage Runge-Kutta (2N storage) with fixed steps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonPositiveHeight, UnstableRun

__all__ = ["LSRK54", "LSRK54_COEFFS", "step", "integrate", "IntegrationResult"]


@dataclass(frozen=True)
class LSRK54:
    """Carpenter-Kennedy (1994) coefficients, solution 3."""

    A: tuple = (
        0.0,
        -567301805773.0 / 1357537059087.0,
        -2404267990393.0 / 2016746695238.0,
        -3550918686646.0 / 2091501179385.0,
        -1275806237668.0 / 842570457699.0,
    )
    B: tuple = (
        1432997174477.0 / 9575080441755.0,
        5161836677717.0 / 13612068292357.0,
        1720146321549.0 / 2090206949498.0,
        3134564353537.0 / 4481467310338.0,
        2277821191437.0 / 14882151754819.0,
    )
    @property
    def c(self) -> tuple:
        """Stage times implied by ``A`` and ``B``.

        Derived rather than tabulated: the commonly quoted rational literal for
        the third stage time is off by about 4e-8 from what the recursion
        actually integrates, which shows up with time-dependent forcing.
        """
        t, dt, out = 0.0, 0.0, []
        for a, b in zip(self.A, self.B):
            out.append(t)
            dt = a * dt + 1.0
            t += b * dt
        return tuple(out)

    @property
    def stages(self) -> int:
        return len(self.A)


LSRK54_COEFFS = LSRK54()


def step(rhs: Callable, u, t: float, dt: float, scheme: LSRK54 = LSRK54_COEFFS, check: Callable | None = None):
    """One 2N-storage step; ``check(u)`` may validate the new state (e.g. admissibility)."""
    if dt <= 0:
        raise ValueError(f"time step must be positive, got {dt}")
    u = np.array(u, dtype=float, copy=True)
    du = np.zeros_like(u)
    for i in range(scheme.stages):
        try:
            k = rhs(u, t + scheme.c[i] * dt)
        except NonPositiveHeight as exc:
            raise NonPositiveHeight(f"{exc} (t={t:.6g}, stage {i})") from exc
        du *= scheme.A[i]
        du += dt * k
        u += scheme.B[i] * du
    if not np.all(np.isfinite(u)):
        raise UnstableRun(f"non-finite values after step at t={t:.6g} with dt={dt:g}")
    if check is not None:
        check(u)
    return u


@dataclass
class IntegrationResult:
    u: np.ndarray
    t: float
    steps: int
    records: dict = field(default_factory=dict)


def integrate(
    rhs: Callable,
    u0,
    t0: float,
    t_final: float,
    dt: float,
    callbacks: Sequence[Callable] = (),
    check: Callable | None = None,
) -> IntegrationResult:
    """March with fixed ``dt``; the last step is shortened to land on ``t_final``.

    Each callback is called as ``cb(step_index, t, u)`` after every step and once
    at ``t0`` with step index 0.
    """
    if t_final < t0:
        raise ValueError(f"t_final={t_final} precedes t0={t0}")
    if dt <= 0:
        raise ValueError(f"time step must be positive, got {dt}")
    u = np.array(u0, dtype=float, copy=True)
    t = t0
    n = 0
    for cb in callbacks:
        cb(0, t, u)
    # tolerance avoids a spurious sliver step from accumulated rounding in t
    while t_final - t > 1e-12 * max(1.0, abs(t_final)):
        h = min(dt, t_final - t)
        u = step(rhs, u, t, h, check=check)
        n += 1
        t = t0 + n * dt if h == dt else t_final
        for cb in callbacks:
            cb(n, t, u)
    return IntegrationResult(u, t, n)
