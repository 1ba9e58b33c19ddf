"""Numerical hot loops with a numba fast path and a pure-numpy fallback.

Set POINTERLAB_NO_NUMBA=1 to force the numpy path (useful for debugging and
for the benchmark in benchmarks/bench_kernels.py, which times both).  Both
implementations of every kernel are importable regardless of the flag; the
module-level dispatch names (dawson_batch, i_integrals_batch, ...) point at
whichever path is active.
"""

import os

import numpy as np

_SQRT_PI = np.sqrt(np.pi)

# Dawson evaluation is piecewise: Maclaurin series on [0, 1), Chebyshev
# tables on [1, 8) (fitted at import time against the slow sampling-series
# reference below), asymptotic series on [8, inf).
_CHEB_LO = 1.0
_CHEB_HI = 8.0
_CHEB_NSUB = 14
_CHEB_DEG = 20


def _dawson_reference(x):
    """Slow, accurate Dawson values for positive x (sampling series).

    Linear combination of Gaussians on a uniform grid (step h); the
    discretization error decays like exp(-pi^2/(4 h^2)), far below 1e-15
    at h = 0.25.  Only used to build the Chebyshev tables.
    """
    x = np.asarray(x, dtype=np.float64)
    h = 0.25
    n = np.arange(-61, 121, 2, dtype=np.float64)  # odd integers
    t = x[..., None] - n * h
    return np.sum(np.exp(-t * t) / n, axis=-1) / _SQRT_PI


def _build_cheb_tables():
    edges = np.linspace(_CHEB_LO, _CHEB_HI, _CHEB_NSUB + 1)
    coefs = np.empty((_CHEB_NSUB, _CHEB_DEG + 1))
    k = np.arange(_CHEB_DEG + 1)
    # Chebyshev nodes of the first kind; coefficients by discrete cosine sum
    theta = (k + 0.5) * np.pi / (_CHEB_DEG + 1)
    tnodes = np.cos(theta)
    for i in range(_CHEB_NSUB):
        a, b = edges[i], edges[i + 1]
        xs = 0.5 * (b - a) * tnodes + 0.5 * (b + a)
        fv = _dawson_reference(xs)
        for j in range(_CHEB_DEG + 1):
            coefs[i, j] = 2.0 / (_CHEB_DEG + 1) * np.sum(fv * np.cos(j * theta))
        coefs[i, 0] *= 0.5
    return edges, coefs


_CHEB_EDGES, _CHEB_COEFS = _build_cheb_tables()
_CHEB_W = (_CHEB_HI - _CHEB_LO) / _CHEB_NSUB


def dawson_numpy(x):
    """Vectorized Dawson function, pure numpy."""
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    out = np.empty_like(ax)

    small = ax < _CHEB_LO
    if np.any(small):
        xs = ax[small]
        x2 = -2.0 * xs * xs
        term = xs.copy()
        acc = xs.copy()
        for kk in range(1, 24):
            term = term * x2 / (2.0 * kk + 1.0)
            acc += term
        out[small] = acc

    mid = (ax >= _CHEB_LO) & (ax < _CHEB_HI)
    if np.any(mid):
        xm = ax[mid]
        idx = np.minimum(((xm - _CHEB_LO) / _CHEB_W).astype(np.int64), _CHEB_NSUB - 1)
        a = _CHEB_EDGES[idx]
        t = 2.0 * (xm - a) / _CHEB_W - 1.0
        # Clenshaw recurrence
        b1 = np.zeros_like(t)
        b2 = np.zeros_like(t)
        c = _CHEB_COEFS[idx]
        for j in range(_CHEB_DEG, 0, -1):
            b1, b2 = 2.0 * t * b1 - b2 + c[:, j], b1
        out[mid] = t * b1 - b2 + c[:, 0]

    big = ax >= _CHEB_HI
    if np.any(big):
        xb = ax[big]
        inv2x2 = 0.5 / (xb * xb)
        term = np.ones_like(xb)
        acc = np.ones_like(xb)
        for kk in range(1, 26):
            term = term * (2.0 * kk - 1.0) * inv2x2
            acc += term
        out[big] = acc / (2.0 * xb)

    return np.copysign(out, x) if out.ndim else float(np.copysign(out, x))


_I_PREF = 1.0 / (2.0 ** 2.5 * np.pi ** 1.5)


def i_integrals_numpy(z, x, spread, coupling, abs_tol=1e-9, rel_tol=1e-8,
                      m0=32, m_max=1 << 14):
    """Closed-form outcome integrals (I1, I2, I3) on a batch of points.

    Uniform-node trapezoid over the angle with node doubling; spectrally
    accurate because the integrand is smooth and periodic.  Returns
    (I1, I2, I3, err) as arrays of the broadcast shape of z, x.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    z, x = np.broadcast_arrays(z, x)
    shape = z.shape
    zf, xf = z.ravel(), x.ravel()
    const1 = 1.0 / np.sqrt(2.0 * np.pi * spread * spread)
    cpref = _I_PREF / (spread * spread)

    n = zf.size
    I1 = np.empty(n)
    I2 = np.empty(n)
    I3 = np.empty(n)
    err = np.empty(n)
    chunk = max(1, (1 << 22) // m_max)
    for i0 in range(0, n, chunk):
        s = slice(i0, min(i0 + chunk, n))
        I1[s], I2[s], I3[s], err[s] = _i_chunk_numpy(
            zf[s], xf[s], spread, coupling, const1, cpref,
            abs_tol, rel_tol, m0, m_max)
    return I1.reshape(shape), I2.reshape(shape), I3.reshape(shape), err.reshape(shape)


def _i_sums_numpy(zc, xc, spread, coupling, phi):
    a = zc[:, None] * np.cos(phi) + xc[:, None] * np.sin(phi)
    u1 = (a - coupling) / (2.0 * spread)
    u2 = (a + coupling) / (2.0 * spread)
    t1 = (a - coupling) * dawson_numpy(u1)
    t2 = (a + coupling) * dawson_numpy(u2)
    g1 = np.sum(t1 + t2, axis=1)
    d = t2 - t1
    g2 = np.sum(d * np.cos(phi), axis=1)
    g3 = np.sum(d * np.sin(phi), axis=1)
    return g1, g2, g3


def _i_chunk_numpy(zc, xc, spread, coupling, const1, cpref,
                   abs_tol, rel_tol, m0, m_max):
    m = m0
    phi = 2.0 * np.pi * np.arange(m) / m
    s1, s2, s3 = _i_sums_numpy(zc, xc, spread, coupling, phi)
    h = 2.0 * np.pi / m
    I1 = const1 - cpref * h * s1
    I2 = cpref * h * s2
    I3 = cpref * h * s3
    err = np.full(zc.shape, np.inf)
    while m < m_max:
        phi_new = 2.0 * np.pi * (np.arange(m) + 0.5) / m
        n1, n2, n3 = _i_sums_numpy(zc, xc, spread, coupling, phi_new)
        m *= 2
        s1, s2, s3 = s1 + n1, s2 + n2, s3 + n3
        h = 2.0 * np.pi / m
        J1 = const1 - cpref * h * s1
        J2 = cpref * h * s2
        J3 = cpref * h * s3
        err = np.maximum(np.abs(J1 - I1),
                         np.maximum(np.abs(J2 - I2), np.abs(J3 - I3)))
        I1, I2, I3 = J1, J2, J3
        tol = np.maximum(abs_tol, rel_tol * np.maximum(
            np.abs(I1), np.maximum(np.abs(I2), np.abs(I3))))
        if np.all(err <= tol):
            break
    return I1, I2, I3, err


def coherent_density_numpy(z, x, cz, cx, amp_h, amp_v, spread):
    """Coherent two-component density for a grid of displaced Gaussians."""
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    z, x = np.broadcast_arrays(z, x)
    shape = z.shape
    zf, xf = z.ravel(), x.ravel()
    norm2 = 1.0 / np.sqrt(2.0 * np.pi * spread * spread)
    inv4s2 = 1.0 / (4.0 * spread * spread)
    out = np.empty(zf.size)
    chunk = max(1, (1 << 22) // max(1, cz.size))
    for i0 in range(0, zf.size, chunk):
        s = slice(i0, min(i0 + chunk, zf.size))
        dz = zf[s, None] - cz
        dx = xf[s, None] - cx
        g = norm2 * np.exp(-(dz * dz + dx * dx) * inv4s2)
        sh = g @ amp_h
        sv = g @ amp_v
        out[s] = sh * sh + sv * sv
    return out.reshape(shape)


_env = os.environ.get("POINTERLAB_NO_NUMBA", "")
USING_NUMBA = _env not in ("1", "true", "yes")

if USING_NUMBA:
    try:
        from numba import njit, prange
    except ImportError:
        USING_NUMBA = False

if USING_NUMBA:

    @njit(cache=False)
    def _dawson_scalar(x):
        ax = abs(x)
        if ax < _CHEB_LO:
            x2 = -2.0 * ax * ax
            term = ax
            acc = ax
            for kk in range(1, 24):
                term = term * x2 / (2.0 * kk + 1.0)
                acc += term
                if abs(term) < 1e-18:
                    break
            val = acc
        elif ax < _CHEB_HI:
            idx = int((ax - _CHEB_LO) / _CHEB_W)
            if idx >= _CHEB_NSUB:
                idx = _CHEB_NSUB - 1
            a = _CHEB_EDGES[idx]
            t = 2.0 * (ax - a) / _CHEB_W - 1.0
            b1 = 0.0
            b2 = 0.0
            for j in range(_CHEB_DEG, 0, -1):
                b1, b2 = 2.0 * t * b1 - b2 + _CHEB_COEFS[idx, j], b1
            val = t * b1 - b2 + _CHEB_COEFS[idx, 0]
        else:
            inv2x2 = 0.5 / (ax * ax)
            term = 1.0
            acc = 1.0
            for kk in range(1, 26):
                term = term * (2.0 * kk - 1.0) * inv2x2
                acc += term
                if term < 1e-18:
                    break
            val = acc / (2.0 * ax)
        return -val if x < 0.0 else val

    @njit(cache=False)
    def _dawson_batch_nb(x):
        out = np.empty(x.size)
        for i in range(x.size):
            out[i] = _dawson_scalar(x[i])
        return out

    def dawson_numba(x):
        x = np.asarray(x, dtype=np.float64)
        return _dawson_batch_nb(x.ravel()).reshape(x.shape)

    @njit(cache=False)
    def _i_point_nb(z, x, spread, coupling, const1, cpref,
                    abs_tol, rel_tol, m0, m_max):
        m = m0
        s1 = 0.0
        s2 = 0.0
        s3 = 0.0
        for j in range(m):
            phi = 2.0 * np.pi * j / m
            c = np.cos(phi)
            s = np.sin(phi)
            a = z * c + x * s
            t1 = (a - coupling) * _dawson_scalar((a - coupling) / (2.0 * spread))
            t2 = (a + coupling) * _dawson_scalar((a + coupling) / (2.0 * spread))
            s1 += t1 + t2
            d = t2 - t1
            s2 += d * c
            s3 += d * s
        h = 2.0 * np.pi / m
        I1 = const1 - cpref * h * s1
        I2 = cpref * h * s2
        I3 = cpref * h * s3
        err = np.inf
        while m < m_max:
            for j in range(m):
                phi = 2.0 * np.pi * (j + 0.5) / m
                c = np.cos(phi)
                s = np.sin(phi)
                a = z * c + x * s
                t1 = (a - coupling) * _dawson_scalar((a - coupling) / (2.0 * spread))
                t2 = (a + coupling) * _dawson_scalar((a + coupling) / (2.0 * spread))
                s1 += t1 + t2
                d = t2 - t1
                s2 += d * c
                s3 += d * s
            m *= 2
            h = 2.0 * np.pi / m
            J1 = const1 - cpref * h * s1
            J2 = cpref * h * s2
            J3 = cpref * h * s3
            err = max(abs(J1 - I1), abs(J2 - I2), abs(J3 - I3))
            I1, I2, I3 = J1, J2, J3
            tol = max(abs_tol, rel_tol * max(abs(I1), abs(I2), abs(I3)))
            if err <= tol:
                break
        return I1, I2, I3, err

    @njit(cache=False, parallel=True)
    def _i_batch_nb(zf, xf, spread, coupling, const1, cpref,
                    abs_tol, rel_tol, m0, m_max):
        n = zf.size
        I1 = np.empty(n)
        I2 = np.empty(n)
        I3 = np.empty(n)
        err = np.empty(n)
        for i in prange(n):
            I1[i], I2[i], I3[i], err[i] = _i_point_nb(
                zf[i], xf[i], spread, coupling, const1, cpref,
                abs_tol, rel_tol, m0, m_max)
        return I1, I2, I3, err

    def i_integrals_numba(z, x, spread, coupling, abs_tol=1e-9, rel_tol=1e-8,
                          m0=32, m_max=1 << 14):
        z = np.atleast_1d(np.asarray(z, dtype=np.float64))
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        z, x = np.broadcast_arrays(z, x)
        shape = z.shape
        const1 = 1.0 / np.sqrt(2.0 * np.pi * spread * spread)
        cpref = _I_PREF / (spread * spread)
        I1, I2, I3, err = _i_batch_nb(
            np.ascontiguousarray(z.ravel()), np.ascontiguousarray(x.ravel()),
            spread, coupling, const1, cpref, abs_tol, rel_tol, m0, m_max)
        return (I1.reshape(shape), I2.reshape(shape), I3.reshape(shape),
                err.reshape(shape))

    @njit(cache=False, parallel=True)
    def _density_nb(zf, xf, cz, cx, amp_h, amp_v, spread):
        norm2 = 1.0 / np.sqrt(2.0 * np.pi * spread * spread)
        inv4s2 = 1.0 / (4.0 * spread * spread)
        out = np.empty(zf.size)
        for i in prange(zf.size):
            sh = 0.0
            sv = 0.0
            for s in range(cz.size):
                dz = zf[i] - cz[s]
                dx = xf[i] - cx[s]
                g = norm2 * np.exp(-(dz * dz + dx * dx) * inv4s2)
                sh += amp_h[s] * g
                sv += amp_v[s] * g
            out[i] = sh * sh + sv * sv
        return out

    def coherent_density_numba(z, x, cz, cx, amp_h, amp_v, spread):
        z = np.atleast_1d(np.asarray(z, dtype=np.float64))
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        z, x = np.broadcast_arrays(z, x)
        shape = z.shape
        out = _density_nb(np.ascontiguousarray(z.ravel()),
                          np.ascontiguousarray(x.ravel()),
                          cz, cx, amp_h, amp_v, spread)
        return out.reshape(shape)

    dawson_batch = dawson_numba
    i_integrals_batch = i_integrals_numba
    coherent_density = coherent_density_numba
else:
    dawson_batch = dawson_numpy
    i_integrals_batch = i_integrals_numpy
    coherent_density = coherent_density_numpy
