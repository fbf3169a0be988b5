"""Closed-form fundamental solutions (values and x-derivatives).

``basis_point`` returns ``(psi1, dpsi1, psi2, dpsi2, status)`` for one x.
Pairs are the textbook ones for each family; callers recombine them into
whatever normalisation they need.
"""
import numpy as np

from .._jit import njit
from .fields import CONSTANT, HARMONIC, NPARAMS, PT_MINUS, PT_PLUS, SECH_MINUS, SECH_PLUS, SWANSON
from .special import STATUS_INVALID, STATUS_OK, hyp2f1, hyp2f1_w, kummer_m

STATUS_ZERO_ENERGY = 5
STATUS_NO_CLOSED_FORM = 6


@njit
def _parabolic(a0, cc, x):
    # psi'' + (a0 - cc^2 x^2) psi = 0; even/odd Kummer solutions with
    # psi_e(0) = 1, psi_e'(0) = 0, psi_o(0) = 0, psi_o'(0) = 1
    kw = a0 / (4.0 * cc)
    z = cc * x * x
    lp = -0.5 * z + 0j
    ae = 0.25 - kw
    m0, s0, _ = kummer_m(ae, 0.5, z, lp)
    m1, s1, _ = kummer_m(ae + 1.0, 1.5, z, lp)
    m1 = m1 * (ae / 0.5)
    ao = 0.75 - kw
    n0, s2, _ = kummer_m(ao, 1.5, z, lp)
    n1, s3, _ = kummer_m(ao + 1.0, 2.5, z, lp)
    n1 = n1 * (ao / 1.5)
    st = max(max(s0, s1), max(s2, s3))
    # asymptotic-accuracy flags (3) are diagnostics only
    if st == 3:
        st = STATUS_OK
    dz = 2.0 * cc * x
    pe = m0
    dpe = dz * (-0.5 * m0 + m1)
    po = x * n0
    dpo = n0 + x * dz * (-0.5 * n0 + n1)
    return pe, dpe, po, dpo, st


@njit
def _trig_hyp(alpha, beta, a, b, c, x):
    # sin^alpha x cos^beta x 2F1(a, b; c; sin^2 x) on (0, pi/2)
    s = np.sin(x)
    co = np.cos(x)
    z = s * s
    omz = co * co
    lp = alpha * np.log(s) + beta * np.log(co)
    f, st1 = hyp2f1_w(a, b, c, z, omz, lp)
    fd, st2 = hyp2f1_w(a + 1.0, b + 1.0, c + 1.0, z, omz, lp)
    fd = fd * (a * b / c)
    psi = f
    dpsi = f * (alpha * co / s - beta * s / co) + fd * 2.0 * s * co
    return psi, dpsi, max(st1, st2)


@njit
def _sech_minus(lam, E, x):
    r = np.sqrt(1.0 - 4.0 * E + 0j)
    mm = (2.0 + 2.0 * lam - r) / 4.0
    mp = (2.0 + 2.0 * lam + r) / 4.0
    sh = np.sinh(x)
    ch = np.cosh(x)
    th = np.tanh(x)
    z = -sh * sh + 0j
    lp = lam * np.log(ch) + 0j
    dz = -2.0 * sh * ch
    g1, s1 = hyp2f1(mm, mp, 1.5, z, lp)
    g1d, s2 = hyp2f1(mm + 1.0, mp + 1.0, 2.5, z, lp)
    g1d = g1d * (mm * mp / 1.5)
    g2, s3 = hyp2f1(mm - 0.5, mp - 0.5, 0.5, z, lp)
    g2d, s4 = hyp2f1(mm + 0.5, mp + 0.5, 1.5, z, lp)
    g2d = g2d * ((mm - 0.5) * (mp - 0.5) / 0.5)
    p1 = sh * g1
    dp1 = ch * g1 + sh * (lam * th * g1 + g1d * dz)
    p2 = g2
    dp2 = lam * th * g2 + g2d * dz
    return p1, dp1, p2, dp2, max(max(s1, s2), max(s3, s4))


@njit
def sech_plus_printed(lam, E, x):
    """Closed-form partner solutions psi_{1,2}^+ (values only)."""
    r = np.sqrt(1.0 - 4.0 * E + 0j)
    mm = (2.0 + 2.0 * lam - r) / 4.0
    mp = (2.0 + 2.0 * lam + r) / 4.0
    sh = np.sinh(x)
    ch = np.cosh(x)
    z = -sh * sh + 0j
    lp = (lam - 1.0) * np.log(ch) + 0j
    rootE = np.sqrt(E + 0j)
    fa, s1 = hyp2f1(mm, mp, 1.5, z, lp)
    fb, s2 = hyp2f1(mm + 1.0, mp + 1.0, 2.5, z, lp)
    fc, s3 = hyp2f1(mm - 0.5, mp - 0.5, 0.5, z, lp)
    fd, s4 = hyp2f1(mm + 0.5, mp + 0.5, 1.5, z, lp)
    p1 = (
        6.0 * (2.0 * ch * ch + (2.0 * lam - 1.0) * sh * (sh - 1j)) * fa
        - sh * sh * ch * ch * (4.0 * E + 4.0 * lam * (lam + 2.0) + 3.0) * fb
    ) / (12.0 * rootE)
    p2 = (2.0 * (2.0 * lam - 1.0) * (sh - 1j) * fc + (1.0 - 4.0 * E - 4.0 * lam * lam) * sh * ch * ch * fd) / (
        4.0 * rootE
    )
    return p1, p2, max(max(s1, s2), max(s3, s4))


@njit
def sech_superpotential(lam, x):
    """U(x) and U'(x) of the sech pair."""
    sech = 1.0 / np.cosh(x)
    th = np.tanh(x)
    u = -0.5 * th + 0.5j * (1.0 - 2.0 * lam) * sech
    du = -0.5 * sech * sech - 0.5j * (1.0 - 2.0 * lam) * sech * th
    return u, du


@njit
def basis_point(kind, p, E, x):
    if kind == CONSTANT:
        k2 = p[NPARAMS - 1] * (E - p[0])
        if k2 == 0:
            return 1.0 + 0j, 0j, x + 0j, 1.0 + 0j, STATUS_OK
        k = np.sqrt(k2)
        return np.cos(k * x), -k * np.sin(k * x), np.sin(k * x) / k, np.cos(k * x), STATUS_OK
    if kind == HARMONIC:
        g = p[NPARAMS - 1]
        return _parabolic(g * E, np.sqrt(g * p[0]), x)
    if kind == SWANSON:
        g = p[NPARAMS - 1]
        return _parabolic(g * E, np.sqrt(g * 0.5 * p[1]), x)
    if kind == PT_MINUS or kind == PT_PLUS:
        kap = p[0]
        lam = p[1]
        et = np.sqrt((kap + lam) ** 2 + E)
        if kind == PT_MINUS:
            p1, dp1, s1 = _trig_hyp(kap, lam, (kap + lam - et) / 2.0, (kap + lam + et) / 2.0, kap + 0.5, x)
            p2, dp2, s2 = _trig_hyp(
                1.0 - kap, lam, (1.0 - kap + lam - et) / 2.0, (1.0 - kap + lam + et) / 2.0, 1.5 - kap, x
            )
        else:
            p1, dp1, s1 = _trig_hyp(
                kap + 1.0, lam + 1.0, (2.0 + kap + lam - et) / 2.0, (2.0 + kap + lam + et) / 2.0, kap + 1.5, x
            )
            p2, dp2, s2 = _trig_hyp(
                -kap, lam + 1.0, (1.0 - kap + lam - et) / 2.0, (1.0 - kap + lam + et) / 2.0, 0.5 - kap, x
            )
        return p1, dp1, p2, dp2, max(s1, s2)
    if kind == SECH_MINUS:
        return _sech_minus(p[0], E, x)
    if kind == SECH_PLUS:
        if E == 0:
            return 0j, 0j, 0j, 0j, STATUS_ZERO_ENERGY
        lam = p[0]
        m1, dm1, m2, dm2, st = _sech_minus(lam, E, x)
        p1, p2, st2 = sech_plus_printed(lam, E, x)
        u, du = sech_superpotential(lam, x)
        sech = 1.0 / np.cosh(x)
        vm = 0.25 + (lam - lam * lam) * sech * sech
        rootE = np.sqrt(E + 0j)
        # (L+ psi)' = psi'' + U' psi + U psi',  psi'' = (V- - E) psi
        dp1 = ((vm - E) * m1 + du * m1 + u * dm1) / rootE
        dp2 = ((vm - E) * m2 + du * m2 + u * dm2) / rootE
        return p1, dp1, p2, dp2, max(st, st2)
    return 0j, 0j, 0j, 0j, STATUS_NO_CLOSED_FORM


@njit
def basis_array(kind, p, E, xs):
    n = xs.shape[0]
    out = np.empty((n, 4), dtype=np.complex128)
    worst = STATUS_OK
    for i in range(n):
        a, b, c, d, st = basis_point(kind, p, E, xs[i])
        out[i, 0] = a
        out[i, 1] = b
        out[i, 2] = c
        out[i, 3] = d
        if st > worst and st != STATUS_INVALID:
            worst = st
    return out, worst


@njit
def canonical_integrand(kind, p, E, xs, coef, lam):
    """lam / (phi1^2 + phi2^2) for the recombined pair phi = basis @ coef.

    ``coef`` is the 2x2 matrix mapping (psi1, psi2) onto (phi1, phi2).
    Non-finite values (overflowed tails) are returned as NaN.
    """
    n = xs.shape[0]
    out = np.empty(n, dtype=np.complex128)
    worst = STATUS_OK
    for i in range(n):
        a, b, c, d, st = basis_point(kind, p, E, xs[i])
        if st > worst:
            worst = st
        f1 = coef[0, 0] * a + coef[1, 0] * c
        f2 = coef[0, 1] * a + coef[1, 1] * c
        sig = f1 * f1 + f2 * f2
        out[i] = lam / sig
    return out, worst
