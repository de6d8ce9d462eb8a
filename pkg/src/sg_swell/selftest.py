"""Property suites behind ``sg-swell selftest`` and the algebraic acceptance checks.

Every check returns a :class:`Check` with the measured defect and its
tolerance; nothing here depends on pytest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import GalerkinAlgebra, sg_compose_check
from .basis import QuadratureSpec, haar_basis, project
from .dg import lgl_operators
from .fluxes import FAMILIES, llf_dissipation, primitives, tadmor_residual
from .model import flux_1d, entropy_density, roe_entropy_pair, roe_flux_1d, _entropy_quantities

__all__ = ["Check", "run_all", "SUITES"]


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.value:.3e} (tol {self.tol:.0e})"


KS = (1, 2, 4, 8)


def _alg(K):
    return GalerkinAlgebra(haar_basis(int(np.log2(K))))


def _positive(alg, rng, n, lo=0.5, hi=2.0):
    # coefficient vectors with strictly positive cell values
    return alg.from_cells(rng.uniform(lo, hi, size=(n, alg.K)))


def _state(alg, rng, n, ndim=1):
    h = _positive(alg, rng, n)
    vs = [alg.from_cells(rng.uniform(-1.0, 1.0, size=(n, alg.K))) for _ in range(ndim)]
    return np.stack([h, *[alg.mul(h, v) for v in vs]], axis=-2)


def sg_matrix_identities(seed: int = 0, trials: int = 20) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = dict(commute=0.0, compose=0.0, inverse=0.0, sqrt=0.0)
    for K in (2, 4, 8):
        alg = _alg(K)
        for _ in range(trials):
            v, w = rng.standard_normal(K), rng.standard_normal(K)
            Pv, Pw = alg.matrix(v), alg.matrix(w)
            worst["commute"] = max(worst["commute"], np.max(np.abs(Pv @ Pw - Pw @ Pv)))
            lhs, rhs = sg_compose_check(alg.eig, v, w)
            dense = alg.matrix(alg.mul(v, w))
            worst["compose"] = max(worst["compose"], np.max(np.abs(lhs - rhs)), np.max(np.abs(dense - Pv @ Pw)))
            p = _positive(alg, rng, 1)[0]
            worst["inverse"] = max(worst["inverse"], np.max(np.abs(alg.matrix(alg.inv(p)) - np.linalg.inv(alg.matrix(p)))))
            r = alg.sqrt(p)
            worst["sqrt"] = max(worst["sqrt"], np.max(np.abs(alg.mul(r, r) - p)))
    return [
        Check("SG matrices commute", worst["commute"], 1e-11),
        Check("SG matrix of a product", worst["compose"], 1e-11),
        Check("SG matrix of an inverse", worst["inverse"], 1e-11),
        Check("SG square root", worst["sqrt"], 1e-11),
    ]


def roe_equivalence(seed: int = 1, g: float = 9.81) -> list[Check]:
    rng = np.random.default_rng(seed)
    dflux = deta = dH = 0.0
    for K in KS:
        alg = _alg(K)
        U = _state(alg, rng, 50)
        b = alg.from_cells(rng.uniform(0.0, 0.5, size=(50, K)))
        dflux = max(dflux, np.max(np.abs(flux_1d(alg, U, g) - roe_flux_1d(alg, U, g))))
        eta_r, H_r = roe_entropy_pair(alg, U, b, g)
        q = _entropy_quantities(alg, U, b, g)
        deta = max(deta, np.max(np.abs(entropy_density(alg, U, b, g) - eta_r)))
        dH = max(dH, np.max(np.abs(q.H[0] - H_r)))
    return [
        Check("flux in Roe variables", dflux, 1e-11),
        Check("entropy in Roe variables", deta, 1e-11),
        Check("entropy flux in Roe variables", dH, 1e-11),
    ]


def tadmor(seed: int = 2, g: float = 9.81) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for fam, ndim, dirs in (("ec1d", 1, (0,)), ("ec1d_alt", 1, (0,)), ("ec2d", 2, (0, 1))):
        for d in dirs:
            worst = 0.0
            for K in KS:
                alg = _alg(K)
                UL, UR = _state(alg, rng, 50, ndim), _state(alg, rng, 50, ndim)
                bL, bR = (alg.from_cells(rng.uniform(0.0, 0.5, size=(50, K))) for _ in range(2))
                worst = max(worst, np.max(np.abs(tadmor_residual(fam, alg, UL, UR, bL, bR, g, d))))
            out.append(Check(f"Tadmor residual {fam} direction {d}", worst, 1e-12))
    # LLF interface flux must produce entropy, never destroy it
    alg = _alg(4)
    UL, UR = _state(alg, rng, 200), _state(alg, rng, 200)
    b = np.zeros((200, 4))
    F = FAMILIES["ec1d"].flux(alg, primitives(alg, UL), primitives(alg, UR), g, 0) + llf_dissipation(alg, UL, UR, g)
    res = tadmor_residual("ec1d", alg, UL, UR, b, b, g, flux=F)
    out.append(Check("LLF interface residual is non-positive", max(float(np.max(res)), 0.0), 1e-12))
    return out


def consistency(seed: int = 3, g: float = 9.81) -> list[Check]:
    rng = np.random.default_rng(seed)
    cons = sym = 0.0
    for fam, ndim, dirs in (("ec1d", 1, (0,)), ("ec1d_alt", 1, (0,)), ("ec2d", 2, (0, 1))):
        family = FAMILIES[fam]
        for K in KS:
            alg = _alg(K)
            U, V = _state(alg, rng, 30, ndim), _state(alg, rng, 30, ndim)
            P, Q = primitives(alg, U), primitives(alg, V)
            for d in dirs:
                exact = flux_1d(alg, U, g) if ndim == 1 else _flux2(alg, U, g)[d]
                cons = max(cons, np.max(np.abs(family.flux(alg, P, P, g, d) - exact)))
                sym = max(sym, np.max(np.abs(family.flux(alg, P, Q, g, d) - family.flux(alg, Q, P, g, d))))
    return [Check("EC flux consistency F#(U,U) = F(U)", cons, 1e-13), Check("EC flux symmetry", sym, 1e-13)]


def _flux2(alg, U, g):
    from .model import flux_2d

    return flux_2d(alg, U, g)


def deterministic_reduction(seed: int = 4, g: float = 9.81) -> list[Check]:
    """K = 1 fluxes against textbook deterministic formulas."""
    rng = np.random.default_rng(seed)
    alg = _alg(1)
    hL, hR = rng.uniform(0.5, 2.0, (2, 40))
    vL, vR = rng.uniform(-1.0, 1.0, (2, 40))
    UL = np.stack([hL, hL * vL], axis=-1)[..., None]
    UR = np.stack([hR, hR * vR], axis=-1)[..., None]
    F = FAMILIES["ec1d"].flux(alg, primitives(alg, UL), primitives(alg, UR), g, 0)[..., 0]
    h, v = 0.5 * (hL + hR), 0.5 * (vL + vR)
    ref = np.stack([h * v, h * v * v + 0.25 * g * (hL**2 + hR**2)], axis=-1)
    phys = flux_1d(alg, UL, g)[..., 0]
    phys_ref = np.stack([hL * vL, hL * vL**2 + 0.5 * g * hL**2], axis=-1)
    return [
        Check("K=1 EC flux equals deterministic EC flux", float(np.max(np.abs(F - ref))), 1e-13),
        Check("K=1 physical flux equals deterministic flux", float(np.max(np.abs(phys - phys_ref))), 1e-13),
    ]


def haar_no_overshoot(seed: int = 5, n: int = 100, K: int = 8) -> list[Check]:
    rng = np.random.default_rng(seed)
    basis = haar_basis(int(np.log2(K)))
    spec = QuadratureSpec(20)
    nodes = np.concatenate([spec.rule(a, b)[0] for a, b in basis.cells] + [np.linspace(-1, 1, 10001)])
    worst = 0.0
    for _ in range(n):
        a = rng.standard_normal(4)
        jump_at, jump = rng.uniform(-1, 1), rng.standard_normal()

        def f(x, a=a, jump_at=jump_at, jump=jump):
            return a[0] + a[1] * np.sin(3 * a[2] * x) + a[3] * x**2 + jump * (x > jump_at)

        c = project(basis, f, spec, breakpoints=[jump_at])
        vals = c @ basis.values
        fv = f(nodes)
        worst = max(worst, float(np.max(vals) - np.max(fv)), float(np.min(fv) - np.min(vals)))
    return [Check(f"Haar projection within [min f, max f] ({n} random f)", max(worst, 0.0), 1e-12)]


def sbp(max_N: int = 8) -> list[Check]:
    worst = 0.0
    for N in range(1, max_N + 1):
        worst = max(worst, lgl_operators(N).sbp_defect())
    return [Check("SBP property Q + Q^T = B", worst, 1e-13)]


SUITES = {
    "sg_matrix": sg_matrix_identities,
    "roe": roe_equivalence,
    "tadmor": tadmor,
    "consistency": consistency,
    "k1": deterministic_reduction,
    "haar": haar_no_overshoot,
    "sbp": sbp,
}


def run_all() -> list[Check]:
    checks = []
    for suite in SUITES.values():
        checks.extend(suite())
    return checks
