"""Compiled flux-differencing volume kernel for the kinetic-energy type EC family.

Operates on cell-space arrays reshaped to ``(batch, nodes, rest, K)`` with the
differentiation axis second.  Pairs are visited once and the symmetric flux is
scattered to both nodes.  ``ec_volume`` is ``None`` when numba is unavailable.
"""

from __future__ import annotations

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None


def _volume(h, vn, vt, b, D, g, nvar, normal):
    # momentum slots: the normal component goes to 1 + normal, the other to 2 - normal
    A, M, R, C = h.shape
    out = np.zeros((A, M, R, nvar, C))
    jn = 1 + normal
    jt = 2 - normal
    for a in range(A):
        for r in range(R):
            for c in range(C):
                for i in range(M):
                    hi, vi, ti, bi = h[a, i, r, c], vn[a, i, r, c], vt[a, i, r, c], b[a, i, r, c]
                    dii = D[i, i]
                    if dii != 0.0:
                        out[a, i, r, 0, c] += dii * hi * vi
                        out[a, i, r, jn, c] += dii * (hi * vi * vi + 0.5 * g * hi * hi)
                        if nvar == 3:
                            out[a, i, r, jt, c] += dii * hi * vi * ti
                    for m in range(i + 1, M):
                        hm, vm, tm, bm = h[a, m, r, c], vn[a, m, r, c], vt[a, m, r, c], b[a, m, r, c]
                        havg = 0.5 * (hi + hm)
                        vavg = 0.5 * (vi + vm)
                        f0 = havg * vavg
                        f1 = 0.25 * g * (hi * hi + hm * hm) + vavg * havg * vavg
                        s = 0.5 * g * havg * (bm - bi)
                        dim, dmi = D[i, m], D[m, i]
                        out[a, i, r, 0, c] += dim * f0
                        out[a, i, r, jn, c] += dim * (f1 + s)
                        out[a, m, r, 0, c] += dmi * f0
                        out[a, m, r, jn, c] += dmi * (f1 - s)
                        if nvar == 3:
                            f2 = f0 * 0.5 * (ti + tm)
                            out[a, i, r, jt, c] += dim * f2
                            out[a, m, r, jt, c] += dmi * f2
    return out


ec_volume = numba.njit(cache=True)(_volume) if numba is not None else None


def _faces(hL, vL, tL, bL, hR, vR, tR, bR, g, es, nvar, normal):
    """Interface flux plus source minus the one-sided physical flux, for both sides.

    Inputs are ``(faces, K)`` cell values; returns ``(cL, cR)`` of shape
    ``(faces, nvar, K)``: ``cL = F* + S(L, R) - F(U_L)``, ``cR = F* + S(R, L) - F(U_R)``.
    """
    nf, C = hL.shape
    cL = np.zeros((nf, nvar, C))
    cR = np.zeros((nf, nvar, C))
    jn = 1 + normal
    jt = 2 - normal
    for f in range(nf):
        lam = 0.0
        if es:
            for c in range(C):
                sl = abs(vL[f, c]) + np.sqrt(g * hL[f, c])
                sr = abs(vR[f, c]) + np.sqrt(g * hR[f, c])
                lam = max(lam, sl, sr)
        for c in range(C):
            hl, vl, tl, bl = hL[f, c], vL[f, c], tL[f, c], bL[f, c]
            hr, vr, tr, br = hR[f, c], vR[f, c], tR[f, c], bR[f, c]
            havg = 0.5 * (hl + hr)
            vavg = 0.5 * (vl + vr)
            f0 = havg * vavg
            f1 = 0.25 * g * (hl * hl + hr * hr) + vavg * havg * vavg
            f2 = f0 * 0.5 * (tl + tr)
            if es:
                f0 -= 0.5 * lam * (hr - hl)
                f1 -= 0.5 * lam * (hr * vr - hl * vl)
                f2 -= 0.5 * lam * (hr * tr - hl * tl)
            s = 0.5 * g * havg * (br - bl)
            cL[f, 0, c] = f0 - hl * vl
            cR[f, 0, c] = f0 - hr * vr
            cL[f, jn, c] = f1 + s - (hl * vl * vl + 0.5 * g * hl * hl)
            cR[f, jn, c] = f1 - s - (hr * vr * vr + 0.5 * g * hr * hr)
            if nvar == 3:
                cL[f, jt, c] = f2 - hl * vl * tl
                cR[f, jt, c] = f2 - hr * vr * tr
    return cL, cR


ec_faces = numba.njit(cache=True)(_faces) if numba is not None else None
