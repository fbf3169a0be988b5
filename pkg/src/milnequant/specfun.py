"""Gauss, Kummer and Whittaker functions in double precision.

Thin checked wrappers around the compiled kernels in
:mod:`milnequant.kernels.special`.  All functions accept complex
parameters; the Whittaker functions expect a positive real argument when
the large-argument ODE fill-in is needed.
"""
from typing import NamedTuple

import numpy as np

from .errors import AsymptoticAccuracyLoss, ConnectionFormulaPole, NonConvergence, PoleError
from .kernels import dopri
from .kernels import special as _k
from .kernels.fields import NPARAMS, WHITTAKER

__all__ = ["gamma", "rgamma", "gauss_2f1", "kummer_m", "whittaker_m", "whittaker_w", "KummerResult"]

# W via the two-M connection formula loses about log10(cond) digits
_CONNECTION_COND_MAX = 1e4
_ASYMPTOTIC_OK = 1e-14


class KummerResult(NamedTuple):
    value: complex
    error_estimate: float
    accuracy_loss: bool


def _raise_for(status, what):
    if status == _k.STATUS_POLE:
        raise PoleError(f"{what}: parameter hits a pole")
    if status == _k.STATUS_NONCONVERGENCE:
        raise NonConvergence(f"{what}: series did not converge")
    if status == _k.STATUS_INVALID:
        raise NonConvergence(f"{what}: invalid arguments")


def gamma(z):
    z = complex(z)
    if _k.is_nonpositive_integer(z):
        raise PoleError(f"gamma pole at z={z.real:g}")
    return _k.cgamma(z)


def rgamma(z):
    """1/Gamma(z), exactly zero at the poles."""
    return _k.crgamma(complex(z))


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z).

    Terminating series are summed exactly; otherwise the argument is mapped
    to the unit disc by whichever linear transformation gives the smallest
    modulus.
    """
    v, st = _k.hyp2f1(complex(a), complex(b), complex(c), complex(z), 0j)
    _raise_for(st, "2F1")
    return v


def kummer_m(a, b, z, full=False):
    """Kummer's confluent function M(a, b, z).

    With ``full=True`` a :class:`KummerResult` carrying the error estimate
    of the large-|z| asymptotic branch is returned instead of the value.
    """
    v, st, err = _k.kummer_m(complex(a), complex(b), complex(z), 0j)
    loss = st == _k.STATUS_ASYMPTOTIC_LOSS
    if not loss:
        _raise_for(st, "M")
    if full:
        return KummerResult(v, err, loss)
    return v


def _whittaker_m_raw(kappa, mu, z):
    b = 1.0 + 2.0 * mu
    if _k.is_nonpositive_integer(b):
        raise PoleError(f"M_(kappa,mu): 1+2mu={b.real:g} is a pole")
    lp = -0.5 * z + (mu + 0.5) * np.log(z)
    v, st, err = _k.kummer_m(mu - kappa + 0.5, b, z, lp)
    if st == _k.STATUS_ASYMPTOTIC_LOSS:
        raise AsymptoticAccuracyLoss(f"M_(kappa,mu)({z}): asymptotic error {err:.1e}")
    _raise_for(st, "M_(kappa,mu)")
    return v


def whittaker_m(kappa, mu, z):
    """Whittaker M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu-kappa+1/2, 1+2mu, z)."""
    return _whittaker_m_raw(complex(kappa), complex(mu), complex(z))


def whittaker_w(kappa, mu, z):
    """Whittaker W_{kappa,mu}(z).

    Small z uses the connection formula in terms of M_{kappa,+-mu}; large z
    the asymptotic series.  In between, where the former cancels and the
    latter has not yet converged, Whittaker's equation is integrated inward
    from a point where the series is accurate (W is dominant in that
    direction, so the integration is stable).
    """
    kappa = complex(kappa)
    mu = complex(mu)
    z = complex(z)
    two_mu = 2.0 * mu
    if two_mu.imag == 0 and two_mu.real == np.round(two_mu.real):
        raise ConnectionFormulaPole(f"2mu={two_mu.real:g} is an integer")
    w, _, rel = _k.whittaker_w_asymptotic(kappa, mu, z)
    if rel < _ASYMPTOTIC_OK:
        return w

    t1 = _k.cgamma(-two_mu) * _k.crgamma(0.5 - mu - kappa) * _whittaker_m_raw(kappa, mu, z)
    t2 = _k.cgamma(two_mu) * _k.crgamma(0.5 + mu - kappa) * _whittaker_m_raw(kappa, -mu, z)
    v = t1 + t2
    if v != 0 and (abs(t1) + abs(t2)) / abs(v) < _CONNECTION_COND_MAX:
        return v

    if z.imag != 0 or z.real <= 0:
        raise AsymptoticAccuracyLoss(f"W_(kappa,mu)({z}) outside the reliable range")
    za = z.real
    for _ in range(200):
        za *= 1.25
        wa, dwa, rel = _k.whittaker_w_asymptotic(kappa, mu, complex(za))
        if rel < _ASYMPTOTIC_OK:
            break
    else:
        raise AsymptoticAccuracyLoss(f"W_(kappa,mu): no accurate asymptotic start above z={z.real:g}")
    p = np.zeros(NPARAMS, dtype=np.complex128)
    p[0] = kappa
    p[1] = mu
    p[NPARAMS - 1] = 1.0
    y0 = np.array([wa, dwa, 0, 0, 0], dtype=np.complex128)
    xs = np.array([z.real])
    ys, logs, *_, status = dopri.integrate(
        dopri.MODE_SINGLE, WHITTAKER, p, _EMPTY_X, _EMPTY_C, 0.0, 1.0 + 0j,
        za, z.real, y0, xs, 1e-13, 1e-300, np.inf, False, 0.0,
    )
    if status != dopri.OK:
        raise NonConvergence(f"W_(kappa,mu): inward integration failed (status {status})")
    return complex(ys[0, 0] * np.exp(logs[0]))


_EMPTY_X = np.zeros(2)
_EMPTY_C = np.zeros((4, 1))
