"""Twisted zeta functions of indefinite forms and narrow classes.

Z_Q(k; alpha, beta) = sum_{p>=1, q>=0} e(alpha p + beta q) / Q(p, q)^k with
Q(p, q) = (q + p w)(q + p w') / (w - w').  Two routes: the lattice sum
itself ("direct") and the Kronecker-limit-type closed form through
derivatives of F_{2k} ("hzn").  Also the generalised Dedekind eta series,
the twisted Eisenstein series, and the rational zeta-value combinations W_k.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import special as sc

from . import _lerch, kernels
from .errors import DomainError, NonConvergent, NormMinusOneField, TwistNotInS
from .hzn import dop, f_series, hzn_eval, hzn_family
from .numerics import _euler_tail, compensated_sum, quad_halfline, quad_panel
from .quadfield import (FieldData, IndefForm, MinusCycle, QuadIrr, class_index, forms_of,
                        in_set_S, narrow_classes, wide_red_sets)
from .special import li_phase, zeta_int
from .values import ComplexValue, TwistPair, as_complex, as_twist

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ZetaResult:
    value: ComplexValue
    route: str
    terms_used: int

    def __post_init__(self):
        if self.route not in ("direct", "hzn"):
            raise ValueError(f"unknown route {self.route!r}")
        if self.terms_used < 1:
            raise ValueError("terms_used must be >= 1")

    def __complex__(self):
        return self.value.value


@dataclass(frozen=True)
class EtaSeriesParams:
    """Arguments of A(tau, s, beta, alpha).  beta may be any real here."""

    tau: complex
    s: int
    beta: float
    alpha: float

    def __post_init__(self):
        if not complex(self.tau).imag > 0:
            raise DomainError("Im(tau) must be positive")


# ---------------------------------------------------------------- direct route

def _row_tails(w: float, wp: float, k: int, beta: float, P: int, N: int) -> np.ndarray:
    """sum_{q>=N} e(beta q) (d/((q+pw)(q+pw')))^k for p = 1..P.

    With c = p(w+w')/2, h = p(w-w')/2 the summand is d^k ((q+c)^2 - h^2)^{-k};
    the binomial series in (h/(q+c))^2 turns each row into Lerch sums.
    """
    d = w - wp
    p = np.arange(1, P + 1, dtype=np.float64)
    c = p * (w + wp) / 2
    h = p * (w - wp) / 2
    Y = N + c
    r2 = (h / Y) ** 2
    int_b = _lerch.is_integral(beta)
    zN = complex(_lerch.phase(beta, N))
    out = np.zeros(P, dtype=np.complex128)
    coef = np.ones(P)
    for j in range(400):
        s = 2 * k + 2 * j
        if int_b:
            L = sc.zeta(float(s), Y).astype(np.complex128)
        else:
            L = zN * _lerch.lerch(beta, s, Y + 0j)
        # h^(2j) L regrouped so long rows (Y ~ 1e5) neither overflow nor produce nan
        Yh = Y ** (k + j)
        term = coef * r2 ** j * ((L * Yh) * Yh) * Y ** (-2.0 * k)
        out += term
        if j > 2 and float(np.max(np.abs(term) / np.maximum(np.abs(out), 1e-300))) < 1e-18:
            break
        coef = coef * (k + j) / (j + 1)
    else:
        raise NonConvergent("row tail series did not settle")
    return d ** k * out


def _rows(w: float, wp: float, k: int, beta: float, P: int) -> Tuple[np.ndarray, int]:
    """R(p) = sum_{q>=0} e(beta q) Q(p, q)^{-k} for p = 1..P, and the q-head length."""
    # N large enough that h/(N+c) <= 1/2 on every row
    N = max(64, int(math.ceil(P * (w - 3 * wp) / 2)) + 1)
    b = _lerch.frac(beta)
    head = kernels.form_rows(w, wp, k, b, P, N)
    return head + _row_tails(w, wp, k, b, P, N), N


def _direct(k: int, form: IndefForm, t: TwistPair, p0: int = 128, J: int = 10) -> Tuple[complex, float, int]:
    w, wp = form.w, form.wprime
    a, b = t.alpha.alpha, t.beta.alpha
    if not _lerch.is_integral(a):
        # the Euler tail gains a factor ~ 2 pi |a| p0 per difference, so alpha
        # near an integer needs a proportionally longer head
        fa = _lerch.frac(a)
        p0 = max(p0, min(1 << 15, int(math.ceil(4.0 / min(fa, 1.0 - fa)))))
        P = p0 + J + 1
        R, N = _rows(w, wp, k, b, P)
        g = np.concatenate([[0j], R])
        z = complex(np.exp(2j * math.pi * fa))
        ph = _lerch.phase(a, np.arange(1, P + 1))
        vals = []
        for cut in (p0, p0 - max(24, p0 // 6)):
            head = compensated_sum(ph[:cut - 1] * R[:cut - 1])
            tail, last = _euler_tail(fa, z, g, cut, J, optimal=True)
            vals.append(head + tail)
        err = abs(vals[0] - vals[1]) + 1e-15 * float(np.abs(R).sum())
        return vals[0], err, P * N
    # integral alpha: Richardson on partial sums, tail ~ sum_m t_m P^{-m}
    if k < 2:
        raise DomainError("k = 1 needs alpha, beta non-integral")
    m0 = 2 * k - 1 if not _lerch.is_integral(b) else 2 * k - 2
    base, levels = 48, 5
    P = base * 2 ** (levels - 1)
    R, N = _rows(w, wp, k, b, P)
    cs = np.cumsum(R)
    S = [complex(compensated_sum(R[:base * 2 ** j])) for j in range(levels)]
    tab = [S]
    for m in range(levels - 1):
        prev = tab[-1]
        f = 2.0 ** (m0 + m)
        tab.append([(f * prev[j + 1] - prev[j]) / (f - 1) for j in range(len(prev) - 1)])
    del cs
    val = tab[-1][0]
    err = abs(tab[-1][0] - tab[-2][-1]) + 1e-15 * float(np.abs(R).sum())
    return val, err, P * N


def _check_k(k: int, t: TwistPair):
    if k < 1:
        raise DomainError("k must be >= 1")
    if k == 1 and (t.alpha.is_integral or t.beta.is_integral):
        raise DomainError("k = 1 needs alpha, beta non-integral")


def zq(k: int, form: IndefForm, t, route: str = "direct", beta=None) -> ZetaResult:
    """Z_Q(k; alpha, beta) for the form with roots (w, w')."""
    t = as_twist(t, beta)
    _check_k(k, t)
    if route == "direct":
        v, e, n = _direct(k, form, t)
        return ZetaResult(ComplexValue(v, e), "direct", n)
    if route == "hzn":
        if k == 1:
            a = hzn_eval(2, form.wprime, t).value
            b = hzn_eval(2, form.w, t).value
            return ZetaResult(a - b, "hzn", 2)
        r = pk(k, form.w, form.wprime, t)
        return ZetaResult(-r, "hzn", 2 * k)
    raise ValueError(f"unknown route {route!r}")


def pk(k: int, x, y, t, method: str = "finite") -> ComplexValue:
    """P_k(x, y) = (D_{k-1} F_{2k})(x, y)."""
    if k < 2:
        raise DomainError("k must be >= 2")
    t = as_twist(t)
    fam = hzn_family(2 * k, t)
    if t.beta.is_integral and method == "finite":
        # F_{2k}(.; alpha, 0) itself diverges by an x-independent constant; D only
        # sees F(x) - F(y), taken as the integral of F' from y
        yc = as_complex(y)

        def fam0(i, u, _f=fam):
            if i:
                return _f(i, u)
            if abs(complex(u) - yc) == 0:
                return 0j
            return quad_panel(lambda s_: _f(1, s_), yc, complex(u), tol=1e-14).value

        return dop(k - 1, fam0, x, y, method=method)
    return dop(k - 1, fam, x, y, method=method)


def zcal(k: int, cycle: MinusCycle, fd: Optional[FieldData], t, route: str = "hzn") -> ZetaResult:
    """Sum of zq over the forms of the reduced numbers in the cycle."""
    t = as_twist(t)
    parts = [zq(k, f, t, route) for f in forms_of(cycle.reds)]
    v = ComplexValue(compensated_sum([p.value.value for p in parts]), sum(p.value.err for p in parts))
    return ZetaResult(v, route, sum(p.terms_used for p in parts))


def zeta_narrow(k: int, fd: FieldData, cycle: MinusCycle, t, route: str = "hzn",
                override: bool = False) -> ZetaResult:
    """D^{k/2} times zcal; twists must lie in the set S unless override is set."""
    t = as_twist(t)
    if not override and not in_set_S(t, fd):
        raise TwistNotInS(f"{t} is not in S for D={fd.D}")
    r = zcal(k, cycle, fd, t, route)
    return ZetaResult(r.value * fd.D ** (k / 2), r.route, r.terms_used)


# ---------------------------------------------------------------- eta series

def eta_A(p: EtaSeriesParams, tol: float = 1e-17) -> ComplexValue:
    """A(tau, s, beta, alpha) = sum_{m > -beta} sum_{n>=1} n^{s-1} e(n alpha) e^{2 pi i n beta tau} q^{mn}.

    The m-sum is geometric: sum_n n^{s-1} e(n alpha) e^{2 pi i n b tau} / (1 - q^n),
    b = beta + m0 in (0, 1], m0 the least integer > -beta.
    """
    tau = complex(p.tau)
    beta = float(round(p.beta)) if _lerch.is_integral(p.beta) else p.beta
    m0 = math.floor(-beta) + 1
    b = beta + m0
    decay = TWO_PI * b * tau.imag
    nmax = int(math.ceil((-math.log(tol) + max(0, p.s) * 8) / decay)) + 2
    if nmax > 5_000_000:
        raise NonConvergent("eta series too long")
    n = np.arange(1, nmax + 1, dtype=np.float64)
    ph = _lerch.phase(p.alpha, n)
    lead = np.exp(2j * math.pi * n * b * tau)
    q = np.exp(2j * math.pi * n * tau)
    terms = n ** (p.s - 1) * ph * lead / (1 - q)
    v = compensated_sum(terms)
    return ComplexValue(v, 1e-16 * float(np.abs(terms).sum()) + abs(terms[-1]))


def _small_coeffs(s: int, beta: float, alpha: float, J: int) -> np.ndarray:
    """c_j with A(iy, s, beta, alpha) ~ sum_j c_j (2 pi y)^{j-1} as y -> 0+.

    c_j = B_j(1-b)/j! Li_{2-s-j}(e(alpha)), from the Bernoulli generating
    function applied to e^{-2 pi n b y}/(1 - e^{-2 pi n y}).
    """
    b = beta + math.floor(-beta) + 1
    return np.array([_bernoulli_poly(j, 1 - b) / math.factorial(j) * li_phase(2 - s - j, alpha)
                     for j in range(J + 1)])


def _bernoulli_poly(j: int, x: float) -> float:
    B = sc.bernoulli(j)
    return float(sum(math.comb(j, i) * B[i] * x ** (j - i) for i in range(j + 1)))


def _eta_A_vec(y: np.ndarray, s: int, beta: float, alpha: float, tol: float = 1e-17) -> np.ndarray:
    """eta_A at tau = i y for an array of y > 0 (same series as eta_A)."""
    b = beta + math.floor(-beta) + 1
    nmax = int(math.ceil((-math.log(tol) + max(0, s) * 8) / (TWO_PI * b * float(y.min())))) + 2
    n = np.arange(1, nmax + 1, dtype=np.float64)[:, None]
    coef = n ** (s - 1) * _lerch.phase(alpha, n)
    ny = TWO_PI * n * y[None, :]
    return np.sum(coef * np.exp(-b * ny) / -np.expm1(-ny), axis=0)


def hzn_eta_residual(k: int, x: float, alpha: float, beta: float, tol: float = 1e-11) -> ComplexValue:
    """F_k(x;a,b) + F_k(x;a,-b) - Li_k(e(a))/x - int_0^inf 2y/(y^2+x^2) H(iy, 2-k, a, b) dy."""
    if not x > 0:
        raise DomainError("x must be positive")
    if not 0 < beta < 1:
        raise DomainError("beta must lie in (0, 1)")
    if _lerch.is_integral(alpha):
        raise DomainError("alpha must be non-integral")
    s = 2 - k
    da = abs(_lerch.centred(alpha))
    # the small-y expansion behaves like j! (y / (2 pi |alpha|))^j; switch early
    y0 = min(0.05, 0.12 * da)
    J = 28
    c = _small_coeffs(s, beta, alpha, J) + _small_coeffs(s, -beta, alpha, J)

    def H(y):
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        out = np.empty(y.shape, dtype=np.complex128)
        lo = y < y0
        if lo.any():
            u = TWO_PI * y[lo]
            out[lo] = np.polynomial.polynomial.polyval(u, c) / u
        if (~lo).any():
            yy = y[~lo]
            out[~lo] = _eta_A_vec(yy, s, beta, alpha) + _eta_A_vec(yy, s, -beta, alpha)
        return out

    def f(y):
        y = np.asarray(y, dtype=np.float64)
        return 2 * y / (y * y + x * x) * H(y)

    integ = quad_halfline(f, scale=max(y0, 0.05), tol=tol)
    F1 = hzn_eval(k, x, (alpha, beta)).value
    F2 = hzn_eval(k, x, (alpha, -beta)).value
    lik = li_phase(k, alpha) / x
    v = F1.value + F2.value - lik - integ.value
    return ComplexValue(v, F1.err + F2.err + integ.err)


# ---------------------------------------------------------------- Eisenstein

def _row_sum_all_n(z: complex, s: int) -> complex:
    """sum_{n in Z} (z + n)^{-s} for Im z != 0, s >= 2."""
    if z.imag < 0:
        return (-1) ** s * _row_sum_all_n(-z, s)
    y = z.imag
    jmax = int(math.ceil((40 + s * math.log(40 / (TWO_PI * y) + 2)) / (TWO_PI * y))) + 2
    if jmax > 4000:
        import mpmath as mp
        v = mp.zeta(s, mp.mpc(z)) + (-1) ** s * mp.zeta(s, 1 - mp.mpc(z))
        return complex(v)
    j = np.arange(1, jmax + 1, dtype=np.float64)
    ser = np.sum(j ** (s - 1) * np.exp(2j * math.pi * j * z))
    return complex((-TWO_PI * 1j) ** s / math.gamma(s) * ser)


def eisenstein_G(tau, s: int, beta: float, alpha: float) -> ComplexValue:
    """G(tau, s, beta, alpha) = sum'_{m, n in Z} ((m + beta) tau + n + alpha)^{-s}.

    The n-sum of each lattice row is done in closed form, so only the m-sum
    is truncated (its terms decay like exp(-2 pi |m + beta| Im tau)).
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError("Im(tau) must be positive")
    if s < 3:
        raise DomainError("s must be >= 3")
    M = int(math.ceil(45 / (TWO_PI * tau.imag))) + 2 + int(abs(beta))
    terms = []
    for m in range(-M, M + 1):
        mb = m + beta
        if abs(mb) < 1e-14:
            terms.append(_real_row(s, alpha))
            continue
        terms.append(_row_sum_all_n(mb * tau + alpha, s))
    return ComplexValue(compensated_sum(terms), 1e-15 * sum(abs(v) for v in terms))


def _real_row(s: int, alpha: float) -> complex:
    """sum'_{n in Z} (n + alpha)^{-s}, the excluded term being n + alpha = 0."""
    f = _lerch.frac(alpha)
    if abs(_lerch.centred(alpha)) < 1e-14:
        return (1 + (-1) ** s) * zeta_int(s) + 0j
    return complex(sc.zeta(float(s), f) + (-1) ** s * sc.zeta(float(s), 1 - f))


def gde_and_residual(tau, s: int, beta: float, alpha: float) -> ComplexValue:
    """Gamma(s)/(-2 pi i)^s G - A(tau,s,beta,alpha) - e^{pi i s} A(tau,s,-beta,-alpha).

    For integral beta the lattice row m = -beta has no counterpart in A; its
    contribution is removed from G before comparing.
    """
    tau = complex(tau)
    G = eisenstein_G(tau, s, beta, alpha)
    pre = math.gamma(s) / (-TWO_PI * 1j) ** s
    Gv = G.value
    if _lerch.is_integral(beta):
        Gv -= _real_row(s, alpha)
    a1 = eta_A(EtaSeriesParams(tau, s, beta, alpha))
    a2 = eta_A(EtaSeriesParams(tau, s, -beta, -alpha))
    v = pre * Gv - a1.value - cmath.exp(1j * math.pi * s) * a2.value
    return ComplexValue(v, abs(pre) * G.err + a1.err + a2.err)


# ---------------------------------------------------------------- W_k

def _ps_compose_inv(fc: np.ndarray, v0: float, n: int) -> np.ndarray:
    """Taylor coefficients (order <= n, in h) of F(1/(v0 + h)) from those of F at 1/v0."""
    u = np.array([0.0] + [(-1) ** j / v0 ** (j + 1) for j in range(1, n + 1)])
    out = np.zeros(n + 1, dtype=np.complex128)
    pw = np.zeros(n + 1)
    pw[0] = 1.0
    for j in range(n + 1):
        out += fc[j] * pw
        pw = np.convolve(pw, u)[: n + 1]
    return out


def _ps_power(m: float, v0: float, n: int) -> np.ndarray:
    """Taylor coefficients of (v0 + h)^m."""
    c = np.empty(n + 1)
    c[0] = v0 ** m
    for j in range(1, n + 1):
        c[j] = c[j - 1] * (m - j + 1) / (j * v0)
    return c


def _abs_family(pos: Callable) -> Callable:
    """i-th derivative of u -> g(|u|) from pos(i, v) = g^{(i)}(v), v > 0."""

    def f(i, u):
        u = float(np.real(u))
        if u == 0:
            raise DomainError("argument 0")
        return pos(i, u) if u > 0 else (-1) ** i * pos(i, -u)

    return f


def _fold_family(k: int, alpha: float, n: int, elementary: Callable) -> Callable:
    """Derivatives of v -> F_{2k}(v;0,a) + v^{2k-2} F_{2k}(1/v;0,a) + elementary(v)."""
    K = 2 * k

    def pos(i, v):
        base = f_series(K, complex(v), 0.0, alpha, i)[0]
        fc = np.array([f_series(K, complex(1 / v), 0.0, alpha, j)[0] / math.factorial(j)
                       for j in range(i + 1)])
        comp = np.convolve(_ps_compose_inv(fc, v, i), _ps_power(K - 2, v, i))[: i + 1]
        return base + comp[i] * math.factorial(i) + elementary(i, v)

    return _abs_family(pos)


def _monomial_deriv(i: int, v: float, e: int) -> float:
    c = 1.0
    for j in range(i):
        c *= e - j
    return c * v ** (e - i) if c else 0.0


def wk_terms(k: int, alpha: float) -> List[Tuple[int, complex]]:
    """(exponent, coefficient) pairs of the elementary part of W_k's argument."""
    la = li_phase(2 * k, alpha)
    z2k = zeta_int(2 * k)
    terms = [(-1, -0.75 * (z2k + la)), (2 * k - 1, -0.75 * (z2k + la))]
    for r in range(0, 2 * k):
        zc = zeta_int(2 * k - 2 * r)
        if zc == 0:
            continue
        c = zc * li_phase(2 * r, alpha)
        terms += [(2 * r - 1, c), (2 * k - 2 * r - 1, c)]
    return terms


def wk(k: int, x: float, y: float, alpha: float) -> ComplexValue:
    """W_k(x, y; alpha, alpha) as the displayed D_{k-1} combination, taken literally."""
    if k < 2:
        raise DomainError("k must be >= 2")
    if _lerch.is_integral(alpha):
        raise DomainError("alpha must be non-integral")
    terms = wk_terms(k, alpha)

    def elem(i, v):
        return sum(c * _monomial_deriv(i, v, e) for e, c in terms)

    fam = _fold_family(k, alpha, k - 1, elem)
    return dop(k - 1, fam, x, y)


def _v0_family(k: int, alpha: float) -> Callable:
    """u -> V0(|u|; 0, alpha), dropping the divergent even-power polynomial term."""
    K = 2 * k
    z2k = zeta_int(K)
    la = li_phase(K, alpha)
    poly = []                                   # (exponent, coefficient)
    for r in range(1, K - 1):                   # r = 2k-1 is a pure even power of |u|
        poly.append((r - 1, -((-1) ** (r - 1)) * zeta_int(K - r) * li_phase(r, alpha)))

    def pos(i, v):
        val = f_series(K, complex(v), 0.0, alpha, i)[0]
        val += -0.75 * z2k * _monomial_deriv(i, v, -1) - 0.75 * la * _monomial_deriv(i, v, K - 1)
        val += sum(c * _monomial_deriv(i, v, e) for e, c in poly)
        return val

    return _abs_family(pos)


def _v_family(k: int, alpha: float) -> Callable:
    """u -> V(u; 0, alpha) = V0(|u|) + 3 zeta(2k)/(4u) + 3/4 u^{2k-1} Li_{2k}(e(alpha))."""
    K = 2 * k
    z2k, la = zeta_int(K), li_phase(K, alpha)
    v0 = _v0_family(k, alpha)

    def f(i, u):
        u = float(np.real(u))
        extra = 0.75 * z2k * _monomial_deriv(i, u, -1) + 0.75 * la * _monomial_deriv(i, u, K - 1)
        return v0(i, u) + extra

    return f


def g_combination(k: int, x: float, y: float, alpha: float, which: str = "V") -> complex:
    """g(x, y) - (-1)^k g(1/x, 1/y) with g = D_{k-1} of V or of V0(|.|)."""
    fam = _v_family(k, alpha) if which == "V" else _v0_family(k, alpha)
    g1 = dop(k - 1, fam, x, y).value
    g2 = dop(k - 1, fam, 1 / x, 1 / y).value
    return g1 - (-1) ** k * g2


@dataclass(frozen=True)
class VZReport:
    lhs: ComplexValue
    rhs: ComplexValue
    diagnostics: dict


def verify_vz(fd: FieldData, cycle: MinusCycle, k: int, alpha) -> VZReport:
    """Both sides of the rational zeta-value identity for the class of ``cycle``.

    lhs is D^{k/2}(zeta(B) + (-1)^k zeta(B*)) with zeta = D^{k/2} Zcal; rhs is
    the sum of W_k over the wide-sense reduced numbers.  The diagnostics hold
    the intermediate invariants so that a mismatch can be located.
    """
    if fd.norm_eps == -1:
        raise NormMinusOneField("identity needs a field without units of norm -1")
    if isinstance(alpha, float):
        alpha = Fraction(alpha).limit_denominator(10 ** 6)
    t = as_twist((alpha, alpha))
    if t.alpha.is_integral:
        raise DomainError("alpha must be non-integral")
    if not in_set_S(t, fd):
        raise TwistNotInS("N(eps - 1) alpha must be integral")
    a = t.alpha.alpha
    cycles = narrow_classes(fd)
    red_b, red_bs = wide_red_sets(fd, cycle)
    star = cycles[class_index(cycles, red_bs[0])]
    zb = zcal(k, cycle, fd, t).value.value
    zbs = zcal(k, star, fd, t).value.value
    sg = (-1) ** k
    comb = zb + sg * zbs
    lhs = fd.D ** (k / 2) * fd.D ** (k / 2) * comb
    per = {"B": [], "B*": []}
    rhs, rhs_g, rhs_g0 = 0j, 0j, 0j
    for key, xs, sign in (("B", red_b, 1), ("B*", red_bs, sg)):
        for xq in xs:
            x, xp = xq.value, xq.conj
            w = wk(k, x, xp, a).value
            gv = g_combination(k, x, xp, a, "V")
            g0 = g_combination(k, x, xp, a, "V0")
            per[key].append({"x": xq.pretty(), "W_k": w, "G_V": gv, "G_V0": g0})
            rhs += sign * w
            rhs_g += sign * gv
            rhs_g0 += sign * g0
    diag = {
        "Zcal_B": zb, "Zcal_Bstar": zbs, "class_B_star_digits": list(star.digits),
        "I_combination": -comb,
        "rhs_W_literal": rhs, "rhs_from_V": rhs_g, "rhs_from_V0": rhs_g0,
        "scaled_lhs": {"Dk": lhs, "Dk2": fd.D ** (k / 2) * comb, "none": comb},
        "per_point": per,
    }
    return VZReport(ComplexValue(lhs, 1e-12 * abs(lhs)), ComplexValue(rhs, 1e-12 * abs(rhs)), diag)
