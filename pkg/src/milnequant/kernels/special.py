"""Scalar special-function kernels (complex double precision).

Every routine returns ``(value, status)``; status codes are collected in
``STATUS_*`` and translated into exceptions by :mod:`milnequant.specfun`.
Where a routine takes ``logpref`` the returned value is
``exp(logpref) * f(...)``; large power prefactors produced by the linear
transformations are folded into that exponent so that products such as
``cosh(x)**lam * 2F1(...; -sinh(x)**2)`` stay finite far into the tails.
"""
import numpy as np

from .._jit import njit

STATUS_OK = 0
STATUS_POLE = 1
STATUS_NONCONVERGENCE = 2
STATUS_ASYMPTOTIC_LOSS = 3
STATUS_INVALID = 4

MAX_TERMS = 10_000
SERIES_RTOL = 1e-16
STAGNATION_RUN = 3

# half-width of the window around an integer parameter difference in which
# the connection formulas are replaced by interpolation in that parameter
DEGENERATE_WINDOW = 5e-4
DEGENERATE_STEP = 1e-3

KUMMER_ASYMPTOTIC_Z = 50.0

_LANCZOS_G = 7.0
_LANCZOS_P = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_SQRT_2PI = np.sqrt(2.0 * np.pi)


@njit
def sinpi(z):
    """sin(pi z) with exact zeros at the integers."""
    n = np.floor(z.real + 0.5)
    r = z - n
    s = np.sin(np.pi * r)
    if int(n) % 2 != 0:
        s = -s
    return s


@njit
def _lanczos(z):
    # valid for Re z >= 0.5
    z = z - 1.0
    acc = _LANCZOS_P[0] + 0j
    for i in range(1, 9):
        acc += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * np.exp((z + 0.5) * np.log(t) - t) * acc


@njit
def cgamma(z):
    z = complex(z)
    if z.real < 0.5:
        s = sinpi(z)
        d = s * _lanczos(1.0 - z)
        if d == 0:
            # a pole, or underflow far up the imaginary axis
            return complex(np.inf, 0.0)
        return np.pi / d
    return _lanczos(z)


@njit
def crgamma(z):
    """1/Gamma(z), exactly zero at the poles of Gamma."""
    z = complex(z)
    if z.real < 0.5:
        return sinpi(z) * _lanczos(1.0 - z) / np.pi
    g = _lanczos(z)
    if g == 0:
        return complex(np.inf, 0.0)
    return 1.0 / g


@njit
def is_nonpositive_integer(z):
    z = complex(z)
    if z.imag != 0.0:
        return False
    return z.real <= 0.0 and z.real == np.floor(z.real)


@njit
def _kahan_add(s, comp, term):
    y = term - comp
    t = s + y
    comp = (t - s) - y
    return t, comp


@njit
def series_2f1(a, b, c, z):
    """Gauss series, compensated summation, stagnation stop."""
    s = 1.0 + 0j
    comp = 0j
    term = 1.0 + 0j
    run = 0
    for k in range(MAX_TERMS):
        num = (a + k) * (b + k)
        if num == 0:
            return s, STATUS_OK
        den = (c + k) * (k + 1.0)
        if den == 0:
            return s, STATUS_POLE
        term = term * num / den * z
        s, comp = _kahan_add(s, comp, term)
        if abs(term) <= SERIES_RTOL * abs(s):
            run += 1
            if run >= STAGNATION_RUN:
                return s, STATUS_OK
        else:
            run = 0
    return s, STATUS_NONCONVERGENCE


@njit
def _polynomial_2f1(n, a, b, c, z, logpref):
    # a = -n; terminating sum.  For |z| > 1 factor out z**n.
    if abs(z) <= 1.0:
        s = 1.0 + 0j
        comp = 0j
        term = 1.0 + 0j
        for k in range(n):
            den = (c + k) * (k + 1.0)
            if den == 0:
                return 0j, STATUS_POLE
            term = term * (a + k) * (b + k) / den * z
            s, comp = _kahan_add(s, comp, term)
        return np.exp(logpref) * s, STATUS_OK
    w = 1.0 / z
    coefs = np.empty(n + 1, dtype=np.complex128)
    coefs[0] = 1.0
    for k in range(n):
        den = (c + k) * (k + 1.0)
        if den == 0:
            return 0j, STATUS_POLE
        coefs[k + 1] = coefs[k] * (a + k) * (b + k) / den
    # Horner in w over sum_k coefs[k] * w**(n-k)
    acc = 0j
    for k in range(n + 1):
        acc = acc * w + coefs[k]
    return np.exp(logpref + n * np.log(z)) * acc, STATUS_OK


@njit
def _choose_region(z, omz):
    # 0 direct, 1 Pfaff z/(z-1), 2 1-z, 3 1/z, 4 1/(1-z); omz = 1 - z
    best = abs(z)
    region = 0
    r = abs(z / omz) if omz != 0 else np.inf
    if r < best - 1e-15:
        best = r
        region = 1
    r = abs(omz)
    if r < best - 1e-15:
        best = r
        region = 2
    r = abs(1.0 / z)
    if r < best - 1e-15:
        best = r
        region = 3
    r = abs(1.0 / omz) if omz != 0 else np.inf
    if r < best - 1e-15:
        best = r
        region = 4
    return region


@njit
def _transform_2f1(a, b, c, z, omz, logpref, region):
    if region == 0:
        s, st = series_2f1(a, b, c, z)
        return np.exp(logpref) * s, st
    if region == 1:
        w = -z / omz
        s, st = series_2f1(a, c - b, c, w)
        return np.exp(logpref - a * np.log(omz)) * s, st
    gc = cgamma(c)
    if region == 2:
        w = omz
        m = c - a - b
        s1, st1 = series_2f1(a, b, 1.0 - m, w)
        s2, st2 = series_2f1(c - a, c - b, 1.0 + m, w)
        c1 = gc * cgamma(m) * crgamma(c - a) * crgamma(c - b)
        c2 = gc * cgamma(-m) * crgamma(a) * crgamma(b)
        v = 0j
        if c1 != 0:
            v += c1 * np.exp(logpref) * s1
        if c2 != 0:
            v += c2 * np.exp(logpref + m * np.log(w)) * s2
        return v, max(st1, st2)
    if region == 3:
        w = 1.0 / z
        lmz = np.log(-z)
        s1, st1 = series_2f1(a, a - c + 1.0, a - b + 1.0, w)
        s2, st2 = series_2f1(b, b - c + 1.0, b - a + 1.0, w)
        c1 = gc * cgamma(b - a) * crgamma(b) * crgamma(c - a)
        c2 = gc * cgamma(a - b) * crgamma(a) * crgamma(c - b)
        v = 0j
        if c1 != 0:
            v += c1 * np.exp(logpref - a * lmz) * s1
        if c2 != 0:
            v += c2 * np.exp(logpref - b * lmz) * s2
        return v, max(st1, st2)
    # region 4
    w = 1.0 / omz
    l1z = np.log(omz)
    s1, st1 = series_2f1(a, c - b, a - b + 1.0, w)
    s2, st2 = series_2f1(b, c - a, b - a + 1.0, w)
    c1 = gc * cgamma(b - a) * crgamma(b) * crgamma(c - a)
    c2 = gc * cgamma(a - b) * crgamma(a) * crgamma(c - b)
    v = 0j
    if c1 != 0:
        v += c1 * np.exp(logpref - a * l1z) * s1
    if c2 != 0:
        v += c2 * np.exp(logpref - b * l1z) * s2
    return v, max(st1, st2)


@njit
def _near_integer(m):
    if abs(m.imag) > DEGENERATE_WINDOW:
        return False, 0.0
    m0 = np.floor(m.real + 0.5)
    return abs(m - m0) < DEGENERATE_WINDOW, m0


_DIGAMMA_B = np.array([1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12])


@njit
def cdigamma(z):
    """psi(z) for complex z away from the poles."""
    z = complex(z)
    if z.real < 0.5:
        return cdigamma(1.0 - z) - np.pi / np.tan(np.pi * z)
    acc = 0j
    while z.real < 10.0 or abs(z) < 10.0:
        acc -= 1.0 / z
        z += 1.0
    z2 = 1.0 / (z * z)
    s = 0j
    pw = z2
    for k in range(_DIGAMMA_B.shape[0]):
        s += _DIGAMMA_B[k] * pw
        pw *= z2
    return acc + np.log(z) - 0.5 / z - s


@njit
def _log_case_2f1(a, b, m, z, omz, logpref):
    """2F1(a, b; a+b+m; z) for integer m >= 0 through the logarithmic
    connection formula in powers of w = 1 - z."""
    w = omz
    fin = 0j
    pa = 1.0 + 0j
    pb = 1.0 + 0j
    kf = 1.0
    fact = 1.0  # (m - k - 1)!
    for j in range(1, m):
        fact *= j
    zm1 = 1.0 + 0j
    for k in range(m):
        fin += pa * pb * fact / kf * zm1
        pa *= a + k
        pb *= b + k
        kf *= k + 1.0
        zm1 *= -w
        if m - k - 1 > 0:
            fact /= m - k - 1
    fin *= crgamma(a + m) * crgamma(b + m)
    lw = np.log(w)
    psa = cdigamma(a + m)
    psb = cdigamma(b + m)
    ps1 = -0.5772156649015329 + 0j
    psm = ps1
    for j in range(1, m + 1):
        psm += 1.0 / j
    t = 1.0 + 0j
    for j in range(1, m + 1):
        t /= j
    s = 0j
    comp = 0j
    run = 0
    for k in range(MAX_TERMS):
        term = t * (lw - ps1 - psm + psa + psb)
        s, comp = _kahan_add(s, comp, term)
        if abs(term) <= SERIES_RTOL * abs(s):
            run += 1
            if run >= STAGNATION_RUN:
                break
        else:
            run = 0
        t *= (a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0)) * w
        ps1 += 1.0 / (k + 1.0)
        psm += 1.0 / (k + m + 1.0)
        psa += 1.0 / (a + m + k)
        psb += 1.0 / (b + m + k)
    else:
        return 0j, STATUS_NONCONVERGENCE
    sign = 1.0 if m % 2 == 0 else -1.0
    log_part = sign * w**m * crgamma(a) * crgamma(b) * s
    return np.exp(logpref) * cgamma(a + b + m) * (fin - log_part), STATUS_OK


@njit
def hyp2f1(a, b, c, z, logpref):
    """exp(logpref) * 2F1(a, b; c; z) with analytic continuation.

    Returns (value, status).
    """
    z = complex(z)
    return hyp2f1_w(a, b, c, z, 1.0 - z, logpref)


@njit
def hyp2f1_w(a, b, c, z, omz, logpref):
    """As :func:`hyp2f1` with 1 - z supplied separately.

    Callers that know 1 - z more accurately than the rounded z (for
    z = sin^2 x near 1, 1 - z = cos^2 x) pass it in ``omz``.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    z = complex(z)
    omz = complex(omz)
    logpref = complex(logpref)
    if z == 0:
        return np.exp(logpref), STATUS_OK
    # terminating series
    na = -1
    if is_nonpositive_integer(a):
        na = int(-a.real)
    nb = -1
    if is_nonpositive_integer(b):
        nb = int(-b.real)
    if na >= 0 and (nb < 0 or na <= nb):
        return _polynomial_2f1(na, a, b, c, z, logpref)
    if nb >= 0:
        return _polynomial_2f1(nb, b, a, c, z, logpref)
    if is_nonpositive_integer(c):
        return 0j, STATUS_POLE
    if omz == 0:
        m = c - a - b
        if m.real <= 0:
            return 0j, STATUS_NONCONVERGENCE
        v = cgamma(c) * cgamma(m) * crgamma(c - a) * crgamma(c - b)
        return np.exp(logpref) * v, STATUS_OK

    region = _choose_region(z, omz)
    degenerate = False
    m0 = 0.0
    sign = 1.0
    m = 0j
    if region == 2:
        m = c - a - b
        degenerate, m0 = _near_integer(m)
        sign = -1.0  # dm/db
    elif region == 3 or region == 4:
        m = b - a
        degenerate, m0 = _near_integer(m)
        sign = 1.0
    if not degenerate:
        return _transform_2f1(a, b, c, z, omz, logpref, region)
    if region == 2 and m == m0:
        # exactly integer c - a - b: closed logarithmic form
        mi = int(m0)
        if mi >= 0:
            return _log_case_2f1(a, b, mi, z, omz, logpref)
        # Euler: F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z)
        return _log_case_2f1(c - a, c - b, -mi, z, omz, logpref + m * np.log(omz))

    # Parameter difference (numerically) an integer: the two connection
    # terms have cancelling poles.  Evaluate at m0 + j*h, j = -2,-1,1,2 and
    # interpolate (cubic Lagrange) back to the requested m.
    h = DEGENERATE_STEP
    t = m - m0
    nodes = np.array([-2.0, -1.0, 1.0, 2.0]) * h
    vals = np.empty(4, dtype=np.complex128)
    status = STATUS_OK
    for j in range(4):
        bj = b + sign * (nodes[j] - t)
        v, st = _transform_2f1(a, bj, c, z, omz, logpref, region)
        vals[j] = v
        if st > status:
            status = st
    out = 0j
    for j in range(4):
        lj = 1.0 + 0j
        for k in range(4):
            if k != j:
                lj *= (t - nodes[k]) / (nodes[j] - nodes[k])
        out += lj * vals[j]
    return out, status


@njit
def series_1f1(a, b, z):
    s = 1.0 + 0j
    comp = 0j
    term = 1.0 + 0j
    run = 0
    for k in range(MAX_TERMS):
        num = a + k
        if num == 0:
            return s, STATUS_OK
        den = (b + k) * (k + 1.0)
        if den == 0:
            return s, STATUS_POLE
        term = term * num / den * z
        s, comp = _kahan_add(s, comp, term)
        if abs(term) <= SERIES_RTOL * abs(s):
            run += 1
            if run >= STAGNATION_RUN:
                return s, STATUS_OK
        else:
            run = 0
    return s, STATUS_NONCONVERGENCE


@njit
def _asymptotic_sum(p, q, w):
    # sum_s (p)_s (q)_s / s! * w**s, optimally truncated; returns (sum, err)
    s = 1.0 + 0j
    term = 1.0 + 0j
    prev = np.inf
    for k in range(200):
        nxt = term * (p + k) * (q + k) / (k + 1.0) * w
        if nxt == 0:
            return s, 0.0
        if abs(nxt) >= prev:
            return s, abs(term)
        prev = abs(term)
        term = nxt
        s += term
        if abs(term) <= SERIES_RTOL * abs(s):
            return s, abs(term)
    return s, abs(term)


@njit
def kummer_m(a, b, z, logpref):
    """exp(logpref) * M(a, b, z).  Returns (value, status, error_estimate)."""
    a = complex(a)
    b = complex(b)
    z = complex(z)
    logpref = complex(logpref)
    if is_nonpositive_integer(b):
        if not (is_nonpositive_integer(a) and a.real > b.real):
            return 0j, STATUS_POLE, 0.0
    if z == 0:
        return np.exp(logpref), STATUS_OK, 0.0
    if z.real < 0:
        # Kummer transformation keeps the series free of cancellation
        logpref = logpref + z
        a = b - a
        z = -z
    if is_nonpositive_integer(a) or abs(z) <= KUMMER_ASYMPTOTIC_Z:
        s, st = series_1f1(a, b, z)
        return np.exp(logpref) * s, st, 0.0
    # large |z|, Re z >= 0
    lz = np.log(z)
    gb = cgamma(b)
    s1, e1 = _asymptotic_sum(1.0 - a, b - a, 1.0 / z)
    s2, e2 = _asymptotic_sum(a, a - b + 1.0, -1.0 / z)
    if z.imag > 0:
        phase = np.exp(1j * np.pi * a)
    elif z.imag < 0:
        phase = np.exp(-1j * np.pi * a)
    else:
        phase = np.cos(np.pi * a) + 0j
    c1 = gb * crgamma(a)
    c2 = gb * crgamma(b - a) * phase
    v = 0j
    err = 0.0
    if c1 != 0:
        f1 = c1 * np.exp(logpref + z + (a - b) * lz)
        v += f1 * s1
        err += abs(f1) * e1
    if c2 != 0:
        f2 = c2 * np.exp(logpref - a * lz)
        v += f2 * s2
        err += abs(f2) * e2
    rel = err / abs(v) if v != 0 else np.inf
    st = STATUS_OK
    if rel > 1e-10:
        st = STATUS_ASYMPTOTIC_LOSS
    return v, st, rel


@njit
def whittaker_w_asymptotic(kappa, mu, z):
    """W_{kappa,mu}(z) and its z-derivative from the large-z series.

    Returns (w, dw, relative_error_estimate).
    """
    kappa = complex(kappa)
    mu = complex(mu)
    z = complex(z)
    p = 0.5 + mu - kappa
    q = 0.5 - mu - kappa
    s = 1.0 + 0j
    ds = 0j
    term = 1.0 + 0j
    prev = np.inf
    err = 0.0
    for k in range(200):
        nxt = term * (p + k) * (q + k) / (k + 1.0) * (-1.0 / z)
        if nxt == 0:
            err = 0.0
            break
        if abs(nxt) >= prev:
            err = abs(term)
            break
        prev = abs(term)
        term = nxt
        s += term
        ds += -(k + 1.0) * term / z
        err = abs(term)
        if abs(term) <= SERIES_RTOL * abs(s):
            break
    pref = np.exp(-0.5 * z + kappa * np.log(z))
    w = pref * s
    dw = pref * ((-0.5 + kappa / z) * s + ds)
    return w, dw, err / abs(s)
