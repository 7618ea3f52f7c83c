"""numpy fallback for the compiled kernels (same signatures, same semantics)."""
import math

import numpy as np


def _phase(beta, q):
    t = beta * np.asarray(q, dtype=np.float64)
    t -= np.floor(t)
    return np.exp(2j * np.pi * t)


def _csum(v):
    # exactly rounded sums of each component; order independent
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


class _Acc:
    """Neumaier-compensated vector accumulator."""

    def __init__(self, shape):
        self.s = np.zeros(shape, dtype=np.complex128)
        self.c = np.zeros(shape, dtype=np.complex128)

    def _part(self, s, c, v):
        t = s + v
        big = np.abs(s) >= np.abs(v)
        c += np.where(big, (s - t) + v, (v - t) + s)
        return t, c

    def add(self, v, mask=None):
        if mask is not None:
            v = np.where(mask, v, 0.0)
        sr, cr = self._part(self.s.real.copy(), self.c.real.copy(), v.real)
        si, ci = self._part(self.s.imag.copy(), self.c.imag.copy(), v.imag)
        self.s = sr + 1j * si
        self.c = cr + 1j * ci

    def value(self):
        return self.s + self.c


def lerch_direct(beta, X, N, s):
    X = np.asarray(X, dtype=np.complex128)
    N = np.asarray(N, dtype=np.int64)
    acc = _Acc(X.shape)
    nmax = int(N.max()) if N.size else 0
    for q in range(nmax):
        mask = q < N
        acc.add(_phase(beta, q) / (X + q) ** s, mask)
    return acc.value()


def phase_power_block(beta, P, N, s):
    s = np.asarray(s, dtype=np.float64)
    p = np.arange(P, P + N, dtype=np.float64)
    ph = _phase(beta, p)
    r = P / p
    out = np.empty(s.shape, dtype=np.complex128)
    for j, sj in enumerate(s):
        out[j] = _csum(ph * r ** sj)
    return out


def phased_sum(beta, vals, q0=0):
    vals = np.asarray(vals, dtype=np.complex128)
    return _csum(_phase(beta, np.arange(q0, q0 + vals.size)) * vals)


def form_rows(w, wp, k, beta, P, N):
    q = np.arange(N, dtype=np.float64)
    ph = _phase(beta, q)
    out = np.empty(P, dtype=np.complex128)
    d = w - wp
    for p in range(1, P + 1):
        out[p - 1] = _csum(ph * (d / ((q + p * w) * (q + p * wp))) ** k)
    return out
