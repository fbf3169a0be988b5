"""Shooting oracle for real potentials.

Two solutions are integrated inward from the boundaries and compared at a
matching point through their Pruefer angles.  The angle difference
Delta(E) = theta_L - theta_R grows monotonically with E and equals n pi at
the n-th level, which makes the bracketing independent of any Milne
machinery.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import BracketNotFound, DomainError, ParameterOutOfRange
from .kernels import dopri
from .ode import _check_status

__all__ = ["ShootingResult", "shoot", "oracle_eigenvalue", "prufer_difference"]

ACTION = 40.0
PT_EDGE = 1e-5
RTOL = 1e-12
MAX_SPAN = 1e6


@dataclass(frozen=True)
class ShootingResult:
    E: float
    node_count: int
    log_mismatch: float
    delta: float = math.nan


def _require_real(model):
    lo, hi = model.work_domain
    x = np.linspace(lo, hi, 2001)
    v = model.potential(x)
    if np.max(np.abs(np.imag(v))) > 1e-12 * max(1.0, np.max(np.abs(v))):
        raise ParameterOutOfRange(f"{model.describe()} has a complex potential; the oracle needs a real one")


def _start(model, E, side):
    """Seed point and (psi, psi') for the solution decaying towards ``side``."""
    lo, hi = model.domain
    f = model.field(E)
    if model.variant == "pt-pair":
        kap, lam = model.params["kappa"], model.params["lam"]
        shift = 1 if model.sector == "plus" else 0
        if side < 0:
            s, x0 = kap + shift, lo + PT_EDGE
            return x0, PT_EDGE**s, s * PT_EDGE ** (s - 1)
        s, x0 = lam + shift, hi - PT_EDGE
        return x0, PT_EDGE**s, -s * PT_EDGE ** (s - 1)
    wlo, whi = model.work_domain
    ref = model.anchor
    # walk outward until the accumulated barrier action reaches ACTION
    xs = np.linspace(ref, wlo if side < 0 else whi, 8001)
    q = np.sqrt(np.maximum(-f.kappa(xs), 0.0))
    action = np.concatenate([[0.0], np.cumsum(0.5 * (q[1:] + q[:-1]) * np.abs(np.diff(xs)))])
    idx = np.nonzero(action >= ACTION)[0]
    i = idx[0] if len(idx) else len(xs) - 1
    x0 = xs[i]
    k = q[i]
    if k == 0.0:
        # hard wall at a finite table edge
        return x0, 0.0, 1.0 if side < 0 else -1.0
    return x0, 1.0, k if side < 0 else -k


def _integrate(model, E, x0, psi, dpsi, x_end):
    f = model.field(E)
    y0 = np.array([psi, dpsi, 0.0, 0.0, 0.0], dtype=np.complex128)
    t = f.table
    res = dopri.integrate(
        dopri.MODE_SINGLE, f.kind, f.params, t.x, t.coeffs, float(E), 1.0 + 0j,
        float(x0), float(x_end), y0, np.zeros(0), RTOL, 1e-300, np.inf, False, 0.0,
    )
    _check_status(res[-1], f"shooting {x0:g} -> {x_end:g}")
    y = res[3]
    return y[0].real, y[1].real, int(res[5])


def _angle(psi, dpsi, nodes, sign):
    s = -1.0 if nodes % 2 else 1.0
    base = math.atan2(s * psi, s * dpsi)
    if base < 0:
        # psi of the expected sign vanishes only on the boundary of (0, pi)
        base += math.pi
    return sign * nodes * math.pi + base


def prufer_difference(model, E, match_point=None):
    """Delta(E) = theta_L - theta_R at ``match_point`` plus the raw data."""
    xm = model.anchor if match_point is None else float(match_point)
    lo, hi = model.work_domain
    if not lo < xm < hi:
        raise DomainError(f"match point {xm} is not interior to {model.work_domain}")
    xl, pl, dl = _start(model, E, -1)
    xr, pr, dr = _start(model, E, +1)
    if not xl < xm < xr:
        raise DomainError(f"match point {xm} lies outside the seeded interval [{xl:g}, {xr:g}]")
    psi_l, dpsi_l, n_l = _integrate(model, E, xl, pl, dl, xm)
    psi_r, dpsi_r, n_r = _integrate(model, E, xr, pr, dr, xm)
    delta = _angle(psi_l, dpsi_l, n_l, +1) - _angle(psi_r, dpsi_r, n_r, -1)
    return delta, (psi_l, dpsi_l), (psi_r, dpsi_r)


def shoot(model, E, match_point=None):
    """Node count and log-derivative mismatch psi'/psi (left - right)."""
    _require_real(model)
    delta, (pl, dl), (pr, dr) = prufer_difference(model, E, match_point)
    with np.errstate(divide="ignore", invalid="ignore"):
        mismatch = dl / pl - dr / pr
    nodes = max(0, int(math.floor(delta / math.pi + 0.5)))
    return ShootingResult(float(E), nodes, float(mismatch), float(delta))


def oracle_eigenvalue(model, n, tol=1e-12, match_point=None):
    """E_n from bisection on Delta(E) - n pi."""
    if n < 0:
        raise ParameterOutOfRange("n must be >= 0")
    _require_real(model)
    lo_x, hi_x = model.work_domain
    xg = np.linspace(lo_x, hi_x, 4001)
    E_lo = float(np.min(np.real(model.potential(xg))))
    g = lambda E: prufer_difference(model, E, match_point)[0] - n * math.pi
    if g(E_lo) >= 0:
        raise BracketNotFound(n, f"Delta already exceeds {n} pi at the potential minimum")
    cap = model.threshold
    span = 1.0
    E_hi = E_lo + span
    while g(E_hi) <= 0:
        span *= 2.0
        E_hi = E_lo + span
        if cap is not None and E_hi >= cap:
            E_hi = cap - 1e-9
            if g(E_hi) <= 0:
                raise BracketNotFound(n, f"no level n={n} below the continuum threshold")
            break
        if span > MAX_SPAN:
            raise BracketNotFound(n, f"no level n={n} within {MAX_SPAN:g} of the potential minimum")
    return bisect(g, E_lo, E_hi, xtol=tol * max(1.0, abs(E_hi)), rtol=4 * np.finfo(float).eps, maxiter=200)
