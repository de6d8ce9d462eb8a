import numpy as np
import pytest

from sg_swell.fluxes import (
    FAMILIES,
    ec_flux_1d,
    ec_flux_2d,
    ec_flux_alt_1d,
    ec_source_1d,
    ec_source_2d,
    ec_source_alt_1d,
    es_interface_flux,
    get_family,
    llf_dissipation,
    source_balance_identity,
    tadmor_residual,
)
from sg_swell.model import entropy_quantities_1d, flux_1d, flux_2d

from conftest import make_alg, positive, random_state

G = 9.81
ONE_D = ("ec1d", "ec1d_alt")


def _pair(alg, rng, n, ndim=1):
    UL, UR = random_state(alg, rng, n, ndim), random_state(alg, rng, n, ndim)
    bL, bR = (alg.from_cells(rng.uniform(0.0, 0.5, (n, alg.K))) for _ in range(2))
    return UL, UR, bL, bR


def _lake_pair(alg, rng):
    bL, bR = (alg.from_cells(rng.uniform(0.0, 0.5, (1, alg.K)))[0] for _ in range(2))
    level = 2.0 * np.eye(alg.K)[0]
    z = np.zeros(alg.K)
    return np.stack([level - bL, z]), np.stack([level - bR, z]), bL, bR


@pytest.mark.parametrize("K", [1, 2, 4, 8])
def test_consistency_1d(rng, K):
    alg = make_alg(K)
    U = random_state(alg, rng, 30)
    assert np.max(np.abs(ec_flux_1d(alg, U, U, G) - flux_1d(alg, U, G))) < 1e-13
    assert np.max(np.abs(ec_flux_alt_1d(alg, U, U, G) - flux_1d(alg, U, G))) < 1e-12
    assert np.max(np.abs(es_interface_flux("ec1d", alg, U, U, G) - flux_1d(alg, U, G))) < 1e-13


@pytest.mark.parametrize("K", [2, 4, 8])
def test_consistency_2d(rng, K):
    alg = make_alg(K)
    U = random_state(alg, rng, 30, ndim=2)
    F = flux_2d(alg, U, G)
    for d in (0, 1):
        assert np.max(np.abs(ec_flux_2d(alg, U, U, d, G) - F[d])) < 1e-13


def test_symmetry(rng):
    alg = make_alg(4)
    UL, UR, _, _ = _pair(alg, rng, 30)
    for f in (ec_flux_1d, ec_flux_alt_1d):
        assert np.max(np.abs(f(alg, UL, UR, G) - f(alg, UR, UL, G))) < 1e-13
    VL, VR, _, _ = _pair(alg, rng, 30, ndim=2)
    for d in (0, 1):
        assert np.max(np.abs(ec_flux_2d(alg, VL, VR, d, G) - ec_flux_2d(alg, VR, VL, d, G))) < 1e-13


def test_deterministic_ec_flux():
    alg = make_alg(1)
    hL, vL, hR, vR = 1.3, 0.4, 0.8, -0.2
    UL = np.array([[hL], [hL * vL]])
    UR = np.array([[hR], [hR * vR]])
    h, v = 0.5 * (hL + hR), 0.5 * (vL + vR)
    F = ec_flux_1d(alg, UL, UR, G)[:, 0]
    assert np.allclose(F, [h * v, 0.25 * G * (hL**2 + hR**2) + h * v * v], atol=1e-14)
    S = ec_source_1d(alg, UL, UR, np.array([0.1]), np.array([0.4]), G)[:, 0]
    # added to the flux, so it carries the opposite sign of the right-hand side term
    assert np.allclose(S, [0.0, 0.5 * G * h * 0.3], atol=1e-14)


def test_deterministic_2d_flux():
    alg = make_alg(1)
    L = (1.3, 0.4, -0.1)
    R = (0.8, -0.2, 0.3)
    UL = np.array([[L[0]], [L[0] * L[1]], [L[0] * L[2]]])
    UR = np.array([[R[0]], [R[0] * R[1]], [R[0] * R[2]]])
    h = 0.5 * (L[0] + R[0])
    u, v = 0.5 * (L[1] + R[1]), 0.5 * (L[2] + R[2])
    hh = 0.5 * (L[0] ** 2 + R[0] ** 2)
    Fx = ec_flux_2d(alg, UL, UR, 0, G)[:, 0]
    Fy = ec_flux_2d(alg, UL, UR, 1, G)[:, 0]
    assert np.allclose(Fx, [h * u, h * u * u + 0.5 * G * hh, h * u * v], atol=1e-14)
    assert np.allclose(Fy, [h * v, h * u * v, h * v * v + 0.5 * G * hh], atol=1e-14)


def test_flat_bottom_sources_vanish(rng):
    alg = make_alg(4)
    UL, UR, bL, _ = _pair(alg, rng, 10)
    assert np.allclose(ec_source_1d(alg, UL, UR, bL, bL, G), 0.0)
    assert np.allclose(ec_source_alt_1d(alg, UL, UR, bL, bL, G), 0.0)
    VL, VR, _, _ = _pair(alg, rng, 10, ndim=2)
    for d in (0, 1):
        assert np.allclose(ec_source_2d(alg, VL, VR, bL, bL, d, G), 0.0)


def test_alt_source_equal_velocities(rng):
    # with equal velocities the correction term of the alternative source vanishes
    alg = make_alg(4)
    h = positive(alg, rng, 2)
    v = rng.standard_normal(4)
    UL = np.stack([h[0], alg.mul(h[0], v)])
    UR = np.stack([h[1], alg.mul(h[1], v)])
    bL, bR = rng.uniform(0, 0.3, (2, 4))
    jb, jh = bR - bL, h[1] - h[0]
    expect = 0.5 * G * alg.mul(0.5 * (h[0] + h[1]), jb) - 0.125 * G * alg.mul(jh, jb)
    assert np.allclose(ec_source_alt_1d(alg, UL, UR, bL, bR, G)[1], expect, atol=1e-13)


@pytest.mark.parametrize("K", [1, 2, 4, 8])
@pytest.mark.parametrize("family", ONE_D)
def test_tadmor_1d(rng, K, family):
    alg = make_alg(K)
    UL, UR, bL, bR = _pair(alg, rng, 50)
    assert np.max(np.abs(tadmor_residual(family, alg, UL, UR, bL, bR, G))) < 1e-12
    assert np.max(np.abs(tadmor_residual(family, alg, UL, UL, bL, bL, G))) < 1e-12


@pytest.mark.parametrize("K", [2, 4, 8])
@pytest.mark.parametrize("direction", [0, 1])
def test_tadmor_2d(rng, K, direction):
    alg = make_alg(K)
    UL, UR, bL, bR = _pair(alg, rng, 50, ndim=2)
    assert np.max(np.abs(tadmor_residual("ec2d", alg, UL, UR, bL, bR, G, direction))) < 1e-12


def test_source_balance_identity(rng):
    alg = make_alg(4)
    UL, UR, bL, bR = _pair(alg, rng, 50)
    assert np.max(np.abs(source_balance_identity(alg, UL, UR, bL, bR, G))) < 1e-12


@pytest.mark.parametrize("family", ONE_D)
def test_lake_at_rest_no_net_update(rng, family):
    alg = make_alg(8)
    fam = get_family(family)
    UL, UR, bL, bR = _lake_pair(alg, rng)
    from sg_swell.fluxes import primitives

    L, R = primitives(alg, UL, bL), primitives(alg, UR, bR)
    F = fam.flux(alg, L, R, G, 0)
    # interface update for the left cell: F + S(L, R) minus its own flux
    net_L = F + fam.source(alg, L, R, G, 0) - flux_1d(alg, UL, G)
    net_R = F + fam.source(alg, R, L, G, 0) - flux_1d(alg, UR, G)
    assert np.max(np.abs(net_L)) < 1e-13 and np.max(np.abs(net_R)) < 1e-13
    if family == "ec1d_alt":
        assert np.allclose(F[0], 0.0)


def test_lake_at_rest_2d(rng):
    alg = make_alg(4)
    UL, UR, bL, bR = _lake_pair(alg, rng)
    z = np.zeros(alg.K)
    VL, VR = np.stack([UL[0], z, z]), np.stack([UR[0], z, z])
    for d in (0, 1):
        net = ec_flux_2d(alg, VL, VR, d, G) + ec_source_2d(alg, VL, VR, bL, bR, d, G) - flux_2d(alg, VL, G)[d]
        assert np.max(np.abs(net)) < 1e-13


def test_2d_source_embeds_1d(rng):
    alg = make_alg(4)
    UL, UR, bL, bR = _pair(alg, rng, 10)
    z = np.zeros_like(UL[..., :1, :])
    VL, VR = np.concatenate([UL, z], axis=-2), np.concatenate([UR, z], axis=-2)
    s2 = ec_source_2d(alg, VL, VR, bL, bR, 0, G)
    assert np.allclose(s2[..., :2, :], ec_source_1d(alg, UL, UR, bL, bR, G), atol=1e-14)
    assert np.allclose(s2[..., 2, :], 0.0)


def test_es_interface_produces_entropy(rng):
    for K in (1, 4):
        alg = make_alg(K)
        UL, UR, _, _ = _pair(alg, rng, 200)
        b = np.zeros_like(UL[..., 0, :])
        F = es_interface_flux("ec1d", alg, UL, UR, G)
        assert np.max(tadmor_residual("ec1d", alg, UL, UR, b, b, G, flux=F)) <= 1e-12


def test_llf_dissipation_k1():
    alg = make_alg(1)
    UL = np.array([[2.0], [1.0]])
    UR = np.array([[1.0], [-0.5]])
    lam = max(0.5 + np.sqrt(2 * G), 0.5 + np.sqrt(G))
    assert np.allclose(llf_dissipation(alg, UL, UR, G), -0.5 * lam * (UR - UL))


def test_unknown_family():
    with pytest.raises(ValueError):
        get_family("nope")
    assert set(FAMILIES) == {"ec1d", "ec1d_alt", "ec2d"}
