"""Hot numeric kernels: numba loops with pure-numpy fallbacks.

Each kernel performs the same arithmetic in the same term order in both
flavors, so a fixed backend produces bit-stable results and the two
backends agree to the last few ulps (they may differ in the final bit
because numpy's vectorized libm calls are not the scalar libm calls).

Exported names resolve to the backend selected in :mod:`pshcert._backend`.
The dictionaries ``NUMPY_KERNELS`` and ``NUMBA_KERNELS`` keep both
flavors importable for benchmarks and cross-checks.

Conventions: points in C are passed as separate float64 arrays of real
and imaginary parts; log of a modulus is always computed as
``0.5*log(dx*dx + dy*dy)``, which yields -inf exactly at a pole hit.
"""

from __future__ import annotations

import numpy as np

from ._backend import USING_NUMBA, compile_kernel

# Radial cutoff profile: 1 on [0, CHI_PLATEAU], 0 on [CHI_SUPPORT, inf),
# exp-smoothstep in between (all derivatives vanish at both junctions).
CHI_PLATEAU = 0.25
CHI_SUPPORT = 0.75

# Taper profile: the squared exp-smoothstep g(t)^2 with g = 1 on [0, 1/2]
# and g = 0 on [1, inf). Squaring makes (taper')^2 <= 4*max(g'^2)*taper
# an algebraic identity rather than an asymptotic fact.


# ---------------------------------------------------------------------------
# cutoff profile chi
# ---------------------------------------------------------------------------

def _chi_scalar(s):
    if s <= 0.25:
        return 1.0
    if s >= 0.75:
        return 0.0
    u = (s - 0.25) / 0.5
    a = np.exp(-1.0 / (1.0 - u))
    b = np.exp(-1.0 / u)
    return a / (a + b)


def chi_many_numpy(s):
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    out[s <= 0.25] = 1.0
    mid = (s > 0.25) & (s < 0.75)
    if np.any(mid):
        u = (s[mid] - 0.25) / 0.5
        a = np.exp(-1.0 / (1.0 - u))
        b = np.exp(-1.0 / u)
        out[mid] = a / (a + b)
    return out


def _chi_many_loop(s, out):
    for i in range(s.shape[0]):
        out[i] = _chi_scalar(s[i])


# ---------------------------------------------------------------------------
# taper profile (value and first two derivatives of g(t)^2)
# ---------------------------------------------------------------------------

def taper_many_numpy(t):
    """Return (lam, lam', lam'') of the taper profile at each t >= 0."""
    t = np.asarray(t, dtype=np.float64)
    lam = np.zeros_like(t)
    d1 = np.zeros_like(t)
    d2 = np.zeros_like(t)
    lam[t <= 0.5] = 1.0
    mid = (t > 0.5) & (t < 1.0)
    if np.any(mid):
        tm = t[mid]
        p = 1.0 - tm
        q = tm - 0.5
        a = np.exp(-1.0 / p)
        b = np.exp(-1.0 / q)
        ap = -a / (p * p)
        bp = b / (q * q)
        app = a * (1.0 - 2.0 * p) / (p * p * p * p)
        bpp = b * (1.0 - 2.0 * q) / (q * q * q * q)
        s = a + b
        g = a / s
        gp = (ap * b - a * bp) / (s * s)
        gpp = ((app * b - a * bpp) * s - 2.0 * (ap * b - a * bp) * (ap + bp)) / (
            s * s * s
        )
        lam[mid] = g * g
        d1[mid] = 2.0 * g * gp
        d2[mid] = 2.0 * (gp * gp + g * gpp)
    return lam, d1, d2


def _taper_scalar(t):
    if t <= 0.5:
        return 1.0, 0.0, 0.0
    if t >= 1.0:
        return 0.0, 0.0, 0.0
    p = 1.0 - t
    q = t - 0.5
    a = np.exp(-1.0 / p)
    b = np.exp(-1.0 / q)
    ap = -a / (p * p)
    bp = b / (q * q)
    app = a * (1.0 - 2.0 * p) / (p * p * p * p)
    bpp = b * (1.0 - 2.0 * q) / (q * q * q * q)
    s = a + b
    g = a / s
    gp = (ap * b - a * bp) / (s * s)
    gpp = ((app * b - a * bpp) * s - 2.0 * (ap * b - a * bp) * (ap + bp)) / (s * s * s)
    return g * g, 2.0 * g * gp, 2.0 * (gp * gp + g * gpp)


def _taper_many_loop(t, lam, d1, d2):
    for i in range(t.shape[0]):
        v0, v1, v2 = _taper_scalar(t[i])
        lam[i] = v0
        d1[i] = v1
        d2[i] = v2


# ---------------------------------------------------------------------------
# truncated log-pole series
# ---------------------------------------------------------------------------

def sigma_many_numpy(zr, zi, ar, ai, delta):
    """sum_j delta_j * log|z - a_j| at each point, -inf on an exact pole hit."""
    out = np.zeros_like(zr)
    with np.errstate(divide="ignore"):
        for j in range(ar.shape[0]):
            dx = zr - ar[j]
            dy = zi - ai[j]
            out = out + delta[j] * (0.5 * np.log(dx * dx + dy * dy))
    return out


def _sigma_many_loop(zr, zi, ar, ai, delta, out):
    npts = zr.shape[0]
    npoles = ar.shape[0]
    for i in range(npts):
        acc = 0.0
        for j in range(npoles):
            dx = zr[i] - ar[j]
            dy = zi[i] - ai[j]
            acc = acc + delta[j] * (0.5 * np.log(dx * dx + dy * dy))
        out[i] = acc


# ---------------------------------------------------------------------------
# plateau-glued subharmonic function u
# ---------------------------------------------------------------------------

def u_many_numpy(zr, zi, ar, ai, rad, eps):
    """max(|z|^2 + eps_j*chi(|z-a_j|/r_j)*log|z-a_j|, 1) inside the disc
    around a_j that contains z (the discs are disjoint), |z|^2 elsewhere."""
    m2 = zr * zr + zi * zi
    out = m2.copy()
    claimed = np.zeros(zr.shape[0], dtype=bool)
    for j in range(ar.shape[0]):
        dx = zr - ar[j]
        dy = zi - ai[j]
        d2 = dx * dx + dy * dy
        mask = (~claimed) & (d2 < rad[j] * rad[j])
        if not np.any(mask):
            continue
        claimed |= mask
        d2m = d2[mask]
        s = np.sqrt(d2m) / rad[j]
        c = chi_many_numpy(s)
        val = m2[mask]
        inner = c > 0.0
        if np.any(inner):
            with np.errstate(divide="ignore"):
                half_log = 0.5 * np.log(d2m[inner])
            val = val.copy()
            val[inner] = m2[mask][inner] + (eps[j] * c[inner]) * half_log
        out[mask] = np.maximum(val, 1.0)
    return out


def _u_many_loop(zr, zi, ar, ai, rad, eps, out):
    npts = zr.shape[0]
    ndiscs = ar.shape[0]
    for i in range(npts):
        x = zr[i]
        y = zi[i]
        m2 = x * x + y * y
        val = m2
        for j in range(ndiscs):
            dx = x - ar[j]
            dy = y - ai[j]
            d2 = dx * dx + dy * dy
            if d2 < rad[j] * rad[j]:
                s = np.sqrt(d2) / rad[j]
                c = _chi_scalar(s)
                if c > 0.0:
                    val = m2 + (eps[j] * c) * (0.5 * np.log(d2))
                if val < 1.0:
                    val = 1.0
                break
        out[i] = val


# ---------------------------------------------------------------------------
# smallest eigenvalue of Hermitian 2x2 matrices [[a, b], [conj(b), c]]
# ---------------------------------------------------------------------------

def min_eig_2x2_many_numpy(a, c, br, bi):
    # det/lmax resolves a tiny bottom eigenvalue without cancellation,
    # but only when m >= 0 (else lmax = m + disc itself cancels); for
    # m < 0 the direct branch m - disc adds same-sign terms and is exact
    m = 0.5 * (a + c)
    d = 0.5 * (a - c)
    b2 = br * br + bi * bi
    disc = np.sqrt(d * d + b2)
    lmax = m + disc
    det = a * c - b2
    lo = m - disc
    use_quot = (m >= 0.0) & (lmax > 0.0)
    quot = np.divide(det, lmax, out=np.zeros_like(lmax), where=use_quot)
    return np.where(use_quot, quot, lo)


def _min_eig_2x2_loop(a, c, br, bi, out):
    for i in range(a.shape[0]):
        m = 0.5 * (a[i] + c[i])
        d = 0.5 * (a[i] - c[i])
        b2 = br[i] * br[i] + bi[i] * bi[i]
        disc = np.sqrt(d * d + b2)
        lmax = m + disc
        if m >= 0.0 and lmax > 0.0:
            out[i] = (a[i] * c[i] - b2) / lmax
        else:
            out[i] = m - disc


# ---------------------------------------------------------------------------
# smallest eigenvalue of Hermitian n x n matrices via cyclic Jacobi
# ---------------------------------------------------------------------------

_JACOBI_SWEEPS = 60
_JACOBI_TOL = 1e-14


def _jacobi_min_eig_single(hr, hi, n):
    # in-place cyclic-by-row complex Jacobi on the (real, imag) parts
    for _ in range(_JACOBI_SWEEPS):
        off = 0.0
        scale = 1e-300
        for p in range(n):
            scale = max(scale, abs(hr[p, p]))
            for q in range(p + 1, n):
                off = max(off, np.sqrt(hr[p, q] ** 2 + hi[p, q] ** 2))
        if off <= _JACOBI_TOL * max(scale, 1.0):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = np.sqrt(hr[p, q] ** 2 + hi[p, q] ** 2)
                if r <= 1e-300:
                    continue
                wr = hr[p, q] / r
                wi = hi[p, q] / r
                tau = (hr[q, q] - hr[p, p]) / (2.0 * r)
                if tau >= 0.0:
                    tt = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    tt = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                cc = 1.0 / np.sqrt(1.0 + tt * tt)
                ss = tt * cc
                hr[p, p] = hr[p, p] - tt * r
                hr[q, q] = hr[q, q] + tt * r
                hr[p, q] = 0.0
                hi[p, q] = 0.0
                hr[q, p] = 0.0
                hi[q, p] = 0.0
                for k in range(n):
                    if k == p or k == q:
                        continue
                    xr = hr[k, p]
                    xi = hi[k, p]
                    yr = hr[k, q]
                    yi = hi[k, q]
                    # A[k,p] <- c*x - s*conj(w)*y ; A[k,q] <- s*w*x + c*y
                    cwyr = wr * yr + wi * yi
                    cwyi = wr * yi - wi * yr
                    hr[k, p] = cc * xr - ss * cwyr
                    hi[k, p] = cc * xi - ss * cwyi
                    wxr = wr * xr - wi * xi
                    wxi = wr * xi + wi * xr
                    hr[k, q] = ss * wxr + cc * yr
                    hi[k, q] = ss * wxi + cc * yi
                    hr[p, k] = hr[k, p]
                    hi[p, k] = -hi[k, p]
                    hr[q, k] = hr[k, q]
                    hi[q, k] = -hi[k, q]
    mn = hr[0, 0]
    for p in range(1, n):
        if hr[p, p] < mn:
            mn = hr[p, p]
    return mn


def _jacobi_min_eig_many_loop(hr, hi, out):
    n = hr.shape[1]
    for i in range(hr.shape[0]):
        out[i] = _jacobi_min_eig_single(hr[i].copy(), hi[i].copy(), n)


def jacobi_min_eig_many_numpy(hr, hi):
    """Cyclic Jacobi, vectorized across the batch (same rotation order)."""
    hr = hr.copy()
    hi = hi.copy()
    nmat, n, _ = hr.shape
    idx = np.arange(nmat)
    for _ in range(_JACOBI_SWEEPS):
        offs = np.sqrt(hr**2 + hi**2)
        for p in range(n):
            offs[:, p, p] = 0.0
        off = offs.reshape(nmat, -1).max(axis=1)
        diag = np.abs(hr[:, np.arange(n), np.arange(n)]).max(axis=1)
        if np.all(off <= _JACOBI_TOL * np.maximum(diag, 1.0)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = np.sqrt(hr[:, p, q] ** 2 + hi[:, p, q] ** 2)
                act = r > 1e-300
                if not np.any(act):
                    continue
                rs = np.where(act, r, 1.0)
                wr = np.where(act, hr[:, p, q] / rs, 1.0)
                wi = np.where(act, hi[:, p, q] / rs, 0.0)
                tau = (hr[:, q, q] - hr[:, p, p]) / (2.0 * rs)
                with np.errstate(divide="ignore", invalid="ignore",
                                 over="ignore"):
                    tt = np.where(
                        tau >= 0.0,
                        1.0 / (tau + np.sqrt(1.0 + tau * tau)),
                        -1.0 / (-tau + np.sqrt(1.0 + tau * tau)),
                    )
                tt = np.where(act, tt, 0.0)
                cc = 1.0 / np.sqrt(1.0 + tt * tt)
                ss = tt * cc
                tr = tt * r
                hr[idx, p, p] = hr[:, p, p] - tr
                hr[idx, q, q] = hr[:, q, q] + tr
                hr[idx, p, q] = np.where(act, 0.0, hr[:, p, q])
                hi[idx, p, q] = np.where(act, 0.0, hi[:, p, q])
                hr[idx, q, p] = hr[:, p, q]
                hi[idx, q, p] = -hi[:, p, q]
                for k in range(n):
                    if k == p or k == q:
                        continue
                    xr = hr[:, k, p].copy()
                    xi = hi[:, k, p].copy()
                    yr = hr[:, k, q].copy()
                    yi = hi[:, k, q].copy()
                    cwyr = wr * yr + wi * yi
                    cwyi = wr * yi - wi * yr
                    nxr = cc * xr - ss * cwyr
                    nxi = cc * xi - ss * cwyi
                    wxr = wr * xr - wi * xi
                    wxi = wr * xi + wi * xr
                    nyr = ss * wxr + cc * yr
                    nyi = ss * wxi + cc * yi
                    hr[idx, k, p] = np.where(act, nxr, xr)
                    hi[idx, k, p] = np.where(act, nxi, xi)
                    hr[idx, k, q] = np.where(act, nyr, yr)
                    hi[idx, k, q] = np.where(act, nyi, yi)
                    hr[idx, p, k] = hr[:, k, p]
                    hi[idx, p, k] = -hi[:, k, p]
                    hr[idx, q, k] = hr[:, k, q]
                    hi[idx, q, k] = -hi[:, k, q]
    return hr[:, np.arange(n), np.arange(n)].min(axis=1)


# ---------------------------------------------------------------------------
# backend wiring
# ---------------------------------------------------------------------------

def _wrap_chi(loop):
    def chi_many(s):
        s = np.ascontiguousarray(np.asarray(s, dtype=np.float64).ravel())
        out = np.empty_like(s)
        loop(s, out)
        return out

    return chi_many


def _wrap_taper(loop):
    def taper_many(t):
        t = np.ascontiguousarray(np.asarray(t, dtype=np.float64).ravel())
        lam = np.empty_like(t)
        d1 = np.empty_like(t)
        d2 = np.empty_like(t)
        loop(t, lam, d1, d2)
        return lam, d1, d2

    return taper_many


def _wrap_sigma(loop):
    def sigma_many(zr, zi, ar, ai, delta):
        zr = np.ascontiguousarray(zr, dtype=np.float64)
        zi = np.ascontiguousarray(zi, dtype=np.float64)
        out = np.empty_like(zr)
        loop(zr, zi, ar, ai, delta, out)
        return out

    return sigma_many


def _wrap_u(loop):
    def u_many(zr, zi, ar, ai, rad, eps):
        zr = np.ascontiguousarray(zr, dtype=np.float64)
        zi = np.ascontiguousarray(zi, dtype=np.float64)
        out = np.empty_like(zr)
        loop(zr, zi, ar, ai, rad, eps, out)
        return out

    return u_many


def _wrap_min2(loop):
    def min_eig_2x2_many(a, c, br, bi):
        a = np.ascontiguousarray(a, dtype=np.float64)
        out = np.empty_like(a)
        loop(a, np.ascontiguousarray(c, dtype=np.float64),
             np.ascontiguousarray(br, dtype=np.float64),
             np.ascontiguousarray(bi, dtype=np.float64), out)
        return out

    return min_eig_2x2_many


def _wrap_jacobi(loop):
    def jacobi_min_eig_many(hr, hi):
        hr = np.ascontiguousarray(hr, dtype=np.float64)
        hi = np.ascontiguousarray(hi, dtype=np.float64)
        out = np.empty(hr.shape[0], dtype=np.float64)
        loop(hr, hi, out)
        return out

    return jacobi_min_eig_many


NUMPY_KERNELS = {
    "chi_many": chi_many_numpy,
    "taper_many": taper_many_numpy,
    "sigma_many": sigma_many_numpy,
    "u_many": u_many_numpy,
    "min_eig_2x2_many": min_eig_2x2_many_numpy,
    "jacobi_min_eig_many": jacobi_min_eig_many_numpy,
}

NUMBA_KERNELS = None
if USING_NUMBA:
    _chi_scalar = compile_kernel(_chi_scalar)
    _taper_scalar = compile_kernel(_taper_scalar)
    _jacobi_min_eig_single = compile_kernel(_jacobi_min_eig_single)
    NUMBA_KERNELS = {
        "chi_many": _wrap_chi(compile_kernel(_chi_many_loop)),
        "taper_many": _wrap_taper(compile_kernel(_taper_many_loop)),
        "sigma_many": _wrap_sigma(compile_kernel(_sigma_many_loop)),
        "u_many": _wrap_u(compile_kernel(_u_many_loop)),
        "min_eig_2x2_many": _wrap_min2(compile_kernel(_min_eig_2x2_loop)),
        "jacobi_min_eig_many": _wrap_jacobi(compile_kernel(_jacobi_min_eig_many_loop)),
    }

_ACTIVE = NUMBA_KERNELS if USING_NUMBA else NUMPY_KERNELS

chi_many = _ACTIVE["chi_many"]
taper_many = _ACTIVE["taper_many"]
sigma_many = _ACTIVE["sigma_many"]
u_many = _ACTIVE["u_many"]
min_eig_2x2_many = _ACTIVE["min_eig_2x2_many"]
jacobi_min_eig_many = _ACTIVE["jacobi_min_eig_many"]
