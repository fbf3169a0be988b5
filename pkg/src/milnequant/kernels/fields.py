"""k^2(x) = g * (E - V(x)) for the built-in potential families.

``kind`` selects the family, ``p`` is a complex128 parameter vector whose
last entry is the prefactor ``g``.  Tabulated potentials carry cubic-spline
breakpoints ``tx`` and coefficients ``tc`` (shape (4, n-1), highest power
first, scipy's PPoly layout).
"""
import numpy as np

from .._jit import njit

CONSTANT = 0
HARMONIC = 1
SWANSON = 2
PT_MINUS = 3
PT_PLUS = 4
SECH_MINUS = 5
SECH_PLUS = 6
TABULATED = 7
WHITTAKER = 8

KIND_NAMES = {
    CONSTANT: "constant",
    HARMONIC: "harmonic",
    SWANSON: "swanson",
    PT_MINUS: "pt-minus",
    PT_PLUS: "pt-plus",
    SECH_MINUS: "sech-minus",
    SECH_PLUS: "sech-plus",
    TABULATED: "tabulated",
    WHITTAKER: "whittaker",
}

NPARAMS = 4


@njit
def _spline_eval(tx, tc, x):
    n = tx.shape[0]
    if x <= tx[0]:
        i = 0
        x = tx[0]
    elif x >= tx[n - 1]:
        i = n - 2
        x = tx[n - 1]
    else:
        i = np.searchsorted(tx, x) - 1
        if i < 0:
            i = 0
        if i > n - 2:
            i = n - 2
    d = x - tx[i]
    return ((tc[0, i] * d + tc[1, i]) * d + tc[2, i]) * d + tc[3, i]


@njit
def potential_value(kind, p, tx, tc, x):
    """V(x) of the family (complex)."""
    if kind == CONSTANT:
        return p[0]
    if kind == HARMONIC:
        return p[0] * x * x
    if kind == SWANSON:
        # p = (mu_plus, mu_minus, -, g = 2/mu_plus)
        return 0.5 * p[1] * x * x
    if kind == PT_MINUS or kind == PT_PLUS:
        kap = p[0]
        lam = p[1]
        s = np.sin(x)
        c = np.cos(x)
        if kind == PT_MINUS:
            return lam * (lam - 1.0) / (c * c) + kap * (kap - 1.0) / (s * s) - (kap + lam) ** 2
        return lam * (lam + 1.0) / (c * c) + kap * (kap + 1.0) / (s * s) - (kap + lam) ** 2
    if kind == SECH_MINUS:
        lam = p[0]
        sech = 1.0 / np.cosh(x)
        return 0.25 + (lam - lam * lam) * sech * sech
    if kind == SECH_PLUS:
        lam = p[0]
        sech = 1.0 / np.cosh(x)
        return 0.25 - (1.0 - lam + lam * lam) * sech * sech + 1j * (2.0 * lam - 1.0) * sech * np.tanh(x)
    if kind == TABULATED:
        return _spline_eval(tx, tc, x)
    return 0j


@njit
def k2_value(kind, p, tx, tc, x, E):
    if kind == WHITTAKER:
        # Whittaker's equation in z: w'' + (-1/4 + kappa/z + (1/4 - mu^2)/z^2) w = 0
        return -0.25 + p[0] / x + (0.25 - p[1] * p[1]) / (x * x)
    return p[NPARAMS - 1] * (E - potential_value(kind, p, tx, tc, x))


@njit
def k2_array(kind, p, tx, tc, xs, E):
    out = np.empty(xs.shape[0], dtype=np.complex128)
    for i in range(xs.shape[0]):
        out[i] = k2_value(kind, p, tx, tc, xs[i], E)
    return out


@njit
def potential_array(kind, p, tx, tc, xs):
    out = np.empty(xs.shape[0], dtype=np.complex128)
    for i in range(xs.shape[0]):
        out[i] = potential_value(kind, p, tx, tc, xs[i])
    return out
