# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Every routine here has a twin with the same signature in ``_kernels_py``.
Phases are passed as the fractional part ``beta`` and rebuilt per index as
exp(2*pi*i*frac(beta*q)) so long sums do not accumulate rounding from
repeated multiplication.  Accumulation is Neumaier-compensated in index
order.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, pow, fabs, M_PI

cnp.import_array()

cdef extern from "math.h" nogil:
    void sincos(double x, double *s, double *c)


cdef inline void _phase(double beta, double q, double *re, double *im) noexcept nogil:
    cdef double t = beta * q
    t -= floor(t)
    sincos(2.0 * M_PI * t, im, re)


cdef inline void _nadd(double *s, double *c, double v) noexcept nogil:
    cdef double t = s[0] + v
    if fabs(s[0]) >= fabs(v):
        c[0] += (s[0] - t) + v
    else:
        c[0] += (v - t) + s[0]
    s[0] = t


cdef inline double _ipow(double x, int s) noexcept nogil:
    cdef double r = 1.0
    while s > 0:
        if s & 1:
            r *= x
        x *= x
        s >>= 1
    return r


def lerch_direct(double beta, cnp.ndarray[cnp.complex128_t, ndim=1] X,
                 cnp.ndarray[cnp.int64_t, ndim=1] N, int s):
    """out[i] = sum_{q < N[i]} e(beta q) / (X[i] + q)^s."""
    cdef Py_ssize_t n = X.shape[0], i
    cdef long long q
    cdef double sr, si, cr, ci, pr, pi_, xr, xi, ar, ai, br, bi, t, den
    cdef int j
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    with nogil:
        for i in range(n):
            sr = 0.0; si = 0.0; cr = 0.0; ci = 0.0
            for q in range(N[i]):
                xr = X[i].real + q
                xi = X[i].imag
                # (ar + i ai) = (X + q)^s
                ar = 1.0; ai = 0.0
                for j in range(s):
                    t = ar * xr - ai * xi
                    ai = ar * xi + ai * xr
                    ar = t
                _phase(beta, <double>q, &pr, &pi_)
                # phase / (ar + i ai)
                den = ar * ar + ai * ai
                br = (pr * ar + pi_ * ai) / den
                bi = (pi_ * ar - pr * ai) / den
                _nadd(&sr, &cr, br)
                _nadd(&si, &ci, bi)
            out[i] = (sr + cr) + 1j * (si + ci)
    return out


def phase_power_block(double beta, long long P, long long N,
                      cnp.ndarray[cnp.float64_t, ndim=1] s):
    """out[j] = sum_{p=P}^{P+N-1} e(beta p) (P/p)^{s[j]}."""
    cdef Py_ssize_t m = s.shape[0], j
    cdef long long p
    cdef double r, v, pr, pi_
    cdef cnp.ndarray[cnp.float64_t, ndim=2] acc = np.zeros((m, 4), dtype=np.float64)
    cdef double[:, :] a = acc
    cdef double[:] sv = s
    with nogil:
        for p in range(P, P + N):
            _phase(beta, <double>p, &pr, &pi_)
            r = <double>P / <double>p
            for j in range(m):
                # consecutive integer orders reuse the previous power
                if j > 0 and sv[j] == sv[j - 1] + 1.0:
                    v = v * r
                else:
                    v = pow(r, sv[j])
                _nadd(&a[j, 0], &a[j, 2], pr * v)
                _nadd(&a[j, 1], &a[j, 3], pi_ * v)
    return (acc[:, 0] + acc[:, 2]) + 1j * (acc[:, 1] + acc[:, 3])


def phased_sum(double beta, cnp.ndarray[cnp.complex128_t, ndim=1] vals, long long q0=0):
    """sum_q e(beta (q0+q)) vals[q]."""
    cdef Py_ssize_t n = vals.shape[0], q
    cdef double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0, pr, pi_, vr, vi
    cdef double complex[:] vv = vals
    with nogil:
        for q in range(n):
            _phase(beta, <double>(q0 + q), &pr, &pi_)
            vr = vv[q].real
            vi = vv[q].imag
            _nadd(&sr, &cr, pr * vr - pi_ * vi)
            _nadd(&si, &ci, pr * vi + pi_ * vr)
    return complex(sr + cr, si + ci)


def form_rows(double w, double wp, int k, double beta, long long P, long long N):
    """out[p-1] = sum_{q<N} e(beta q) ((w-wp)/((q+pw)(q+pwp)))^k for p=1..P."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(P, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] phr = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] phi = np.empty(N, dtype=np.float64)
    cdef double[:] ur = phr
    cdef double[:] ui = phi
    cdef long long p, q
    cdef double sr, si, cr, ci, d = w - wp, f, pr, pi_
    with nogil:
        for q in range(N):
            _phase(beta, <double>q, &pr, &pi_)
            ur[q] = pr
            ui[q] = pi_
        for p in range(1, P + 1):
            sr = 0.0; si = 0.0; cr = 0.0; ci = 0.0
            for q in range(N):
                f = _ipow(d / ((q + p * w) * (q + p * wp)), k)
                _nadd(&sr, &cr, ur[q] * f)
                _nadd(&si, &ci, ui[q] * f)
            out[p - 1] = (sr + cr) + 1j * (si + ci)
    return out
