"""Milne phase-amplitude core.

The energy integral I(E) = (W/pi) int dx / sigma(x), with
sigma = psi1^2 + (lam/W)^2 psi2^2, counts the half-turns of the pair
(psi1, psi2).  At a bound state E_n it equals n + 1.
"""
import os
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import bisect

from . import models as _models
from .errors import (
    AmplitudeVanishes,
    AsymmetricGrid,
    GridTooCoarse,
    ImaginaryPartTooLarge,
    NoAllowedRegion,
    ParameterOutOfRange,
    PhaseUnwrapFailure,
    QuadratureFailure,
    ZeroWronskian,
)
from .kernels import basis as _kb
from .ode import FundamentalPair, MilneTrajectory, pair_phase
from .quadrature import tanh_sinh

__all__ = [
    "MilneAmplitude",
    "EnergyIntegralSample",
    "GeneralizedEmpResidual",
    "pinney_amplitude",
    "im_sigma_oddness",
    "energy_integral",
    "default_quad_tol",
    "turning_points",
    "wkb_integral",
    "emp_residual",
    "generalized_emp_residual",
    "phase_decompose",
]

IM_RESIDUAL_LIMIT = 1e-6
NUMERIC_RTOL = 1e-12
TAIL_FLOOR = 1e-17
PROBE_STEP = 0.25
SPLIT_DEPTH = 4
INTERTWINED_EPS = 1e-13
SPLIT_PROBES = 4001
BACKENDS = ("analytic", "numeric")


def default_quad_tol():
    return float(os.environ.get("MILNE_QUAD_TOL", "1e-10"))


@dataclass(frozen=True)
class MilneAmplitude:
    x: np.ndarray
    sigma: np.ndarray
    lam: float
    wronskian: complex

    @property
    def rho(self):
        return np.sqrt(self.sigma)


@dataclass(frozen=True)
class EnergyIntegralSample:
    E: float
    I: float
    im_residual: float
    quadrature_error: float
    backend: str
    raw: complex = 0j
    error: Optional[str] = None

    @property
    def ok(self):
        return self.error is None


class GeneralizedEmpResidual(NamedTuple):
    printed: float
    self_consistent: float
    imaginary: float


# ---------------------------------------------------------------- amplitude

def pinney_amplitude(pair: FundamentalPair, lam=None, hermitian=None):
    """sigma = psi1^2 + (lam/W)^2 psi2^2 in original units.

    ``lam`` defaults to W, i.e. sigma = psi1^2 + psi2^2.  For real pairs
    (or ``hermitian=True``) sigma must be positive everywhere.
    """
    W = pair.wronskian
    if W == 0:
        raise ZeroWronskian("pair is linearly dependent")
    if lam is None:
        lam = W
    r2 = (lam / W) ** 2
    sigma = np.exp(2.0 * pair.log_scale) * (pair.psi1**2 + r2 * pair.psi2**2)
    if hermitian is None:
        hermitian = np.all(np.abs(pair.psi1.imag) <= 1e-12 * np.abs(pair.psi1)) and np.all(
            np.abs(pair.psi2.imag) <= 1e-12 * np.abs(pair.psi2)
        )
    if hermitian:
        sigma = sigma.real
        if np.any(sigma <= 0):
            raise AmplitudeVanishes("sigma <= 0 for a real pair")
    return MilneAmplitude(pair.x, sigma, float(np.real(lam)), W)


def im_sigma_oddness(amp: MilneAmplitude):
    """max |Im sigma(x) + Im sigma(-x)| / max |sigma| on a symmetric grid."""
    x = amp.x
    if not np.allclose(x, -x[::-1], rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(x)))):
        raise AsymmetricGrid("grid is not symmetric about 0")
    s = np.asarray(amp.sigma, dtype=complex)
    return float(np.max(np.abs(s.imag + s.imag[::-1])) / np.max(np.abs(s)))


# ---------------------------------------------------------------- energy integral

def turning_points(model, E, n=4001):
    """Outermost classical turning points (lo, hi) of Re k^2, refined by bisection.

    Returns None when Re k^2 <= 0 everywhere on the working domain.
    """
    lo, hi = model.work_domain
    f = model.field(E)
    x = np.linspace(lo, hi, n)
    k2 = f.kappa(x)
    allowed = np.nonzero(k2 > 0)[0]
    if len(allowed) == 0:
        return None
    i, j = allowed[0], allowed[-1]
    kap = lambda t: float(f.kappa(t))
    left = bisect(kap, x[i - 1], x[i], xtol=1e-13) if i > 0 else x[0]
    right = bisect(kap, x[j], x[j + 1], xtol=1e-13) if j < n - 1 else x[-1]
    return left, right


def _analytic_integrand(model, E, lam):
    C = _models.canonical_coefficients(model, E, lam)
    C = np.ascontiguousarray(C, dtype=np.complex128)
    field = model.field(E)
    tp = turning_points(model, E)
    t_lo, t_hi = tp if tp else (model.anchor, model.anchor)

    def f(x):
        x = np.ascontiguousarray(x, dtype=float)
        vals, st = _kb.canonical_integrand(model.kind, model.p, float(E), x, C, complex(lam))
        bad = ~np.isfinite(vals)
        if np.any(bad):
            # overflowed sigma deep in a forbidden region contributes nothing
            outside = (x < t_lo) | (x > t_hi)
            if np.any(bad & ~outside) or np.any(field.kappa(x[bad]) > 0):
                raise QuadratureFailure(f"non-finite integrand inside the allowed region at E={E:g}")
            vals = np.where(bad, 0.0, vals)
        if st not in (0, 3):
            raise QuadratureFailure(f"closed-form basis failed (status {st}) at E={E:g}")
        return vals

    return f, (t_lo, t_hi)


def _tail_cutoff(f, tp, guard):
    """Distance beyond which |f| < TAIL_FLOOR * max|f| on both sides."""
    xs = np.arange(0.0, guard + PROBE_STEP / 2, PROBE_STEP)
    right = np.abs(f(xs))
    left = np.abs(f(-xs))
    peak = max(right.max(), left.max())
    cut = 0.0
    for vals, t in ((right, tp[1]), (left, -tp[0])):
        small = (vals < TAIL_FLOOR * peak) & (xs > t)
        idx = np.nonzero(small)[0]
        c = xs[idx[0]] if len(idx) else guard
        cut = max(cut, c)
    return min(cut, guard)


def _split_quad(f, a, b, tol, depth=SPLIT_DEPTH):
    """tanh-sinh, splitting at the sharpest peak when it does not converge.

    Complex pairs put zeros of sigma close to the real axis; a peak moved
    to an endpoint is resolved by the endpoint clustering of the nodes.
    """
    try:
        return tanh_sinh(f, a, b, tol=tol)[:2]
    except QuadratureFailure:
        if depth == 0:
            raise
    x = np.linspace(a, b, SPLIT_PROBES)[1:-1]
    c = x[np.argmax(np.abs(f(x)))]
    v1, e1 = _split_quad(f, a, c, tol, depth - 1)
    v2, e2 = _split_quad(f, c, b, tol, depth - 1)
    return v1 + v2, e1 + e2


def _analytic_energy_integral(model, E, lam, quad_tol):
    f, tp = _analytic_integrand(model, E, lam)
    if not model.infinite:
        lo, hi = model.work_domain
        val, err = _split_quad(f, lo, hi, quad_tol)
    else:
        cut = _tail_cutoff(f, tp, model.work_domain[1])
        T = np.arcsinh(cut)
        g = lambda t: f(np.sinh(t)) * np.cosh(t)
        val, err = _split_quad(g, -T, T, quad_tol)
    return val / np.pi, err / np.pi


def _numeric_energy_integral(model, E, lam):
    tp = turning_points(model, E)
    tail = tp if tp else (model.anchor, model.anchor)
    y0 = _models.anchor_data(model, E, lam)
    phase, steps = pair_phase(model.field(E), model.work_domain, model.anchor, lam, NUMERIC_RTOL, tail, y0)
    return phase / np.pi, NUMERIC_RTOL * steps


def energy_integral(model, E, backend="analytic", quad_tol=None, lam=1.0, check=True):
    """Quantization integral I(E) for ``model``.

    ``backend="analytic"`` integrates lam / sigma built from the closed-form
    solutions with tanh-sinh quadrature; ``"numeric"`` integrates the phase
    alongside the Schroedinger pair.  I is the real part; the imaginary
    part is kept as ``im_residual``.  With ``check`` set, an imaginary part
    above 1e-6 max(1, |I|) raises :class:`ImaginaryPartTooLarge`.
    """
    if backend not in BACKENDS:
        raise ParameterOutOfRange(f"backend must be one of {BACKENDS}")
    if quad_tol is None:
        quad_tol = default_quad_tol()
    if backend == "analytic":
        if model.susy and not model.hermitian and E != 0:
            # the intertwined pair carries 1/sqrt(E); W/sigma loses ~eps/|E|
            quad_tol = max(quad_tol, INTERTWINED_EPS / abs(E))
        raw, err = _analytic_energy_integral(model, E, lam, quad_tol)
    else:
        raw, err = _numeric_energy_integral(model, E, lam)
    raw = complex(raw)
    sample = EnergyIntegralSample(float(E), raw.real, abs(raw.imag), float(err), backend, raw)
    if check and sample.im_residual > IM_RESIDUAL_LIMIT * max(1.0, abs(sample.I)):
        raise ImaginaryPartTooLarge(f"|Im I| = {sample.im_residual:.2e} at E={E:g}")
    return sample


# ---------------------------------------------------------------- WKB

def wkb_integral(model, E):
    """(1/pi) int sqrt(k^2) over the classically allowed region."""
    if not model.hermitian:
        raise ParameterOutOfRange("the WKB integral is defined for Hermitian models")
    lo, hi = model.work_domain
    f = model.field(E)
    x = np.linspace(lo, hi, 8001)
    k2 = f.kappa(x)
    inside = k2 > 0
    if not np.any(inside):
        raise NoAllowedRegion(f"E={E:g} lies below the potential minimum")
    kap = lambda t: float(f.kappa(t))
    edges = np.nonzero(np.diff(inside.astype(int)))[0]
    starts = [x[0]] if inside[0] else []
    ends = []
    for i in edges:
        tp = bisect(kap, x[i], x[i + 1], xtol=1e-14)
        (starts if not inside[i] else ends).append(tp)
    if inside[-1]:
        ends.append(x[-1])
    total = 0.0
    for a, b in zip(starts, ends):
        val, _, _ = tanh_sinh(lambda t: np.sqrt(np.maximum(f.kappa(t), 0.0)), a, b, tol=1e-14, max_level=14)
        total += val.real
    return total / np.pi


# ---------------------------------------------------------------- residual checks

def _uniform_step(x):
    x = np.asarray(x, dtype=float)
    if len(x) < 7:
        raise GridTooCoarse("need at least 7 grid points for fourth-order differences")
    h = np.diff(x)
    if np.max(np.abs(h - h[0])) > 1e-9 * abs(h[0]):
        raise GridTooCoarse("finite-difference residuals need a uniform grid")
    return h[0]


def _d1(f, h):
    return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)


def _d2(f, h):
    return (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)


def emp_residual(traj: MilneTrajectory, kappa_field):
    """Relative residual of rho'' + kappa rho - lam^2 / rho^3 = 0.

    Evaluated on u = ln rho (rho''/rho = u'' + u'^2), which keeps the
    differences well conditioned where rho grows exponentially.
    """
    h = _uniform_step(traj.x)
    kap = np.real(np.asarray(kappa_field(traj.x)))
    if h * np.sqrt(np.max(np.abs(kap))) > 0.25:
        raise GridTooCoarse("grid step too large for the local wavelength")
    u = np.log(traj.rho)
    du, ddu = _d1(u, h), _d2(u, h)
    k = kap[2:-2]
    nl = traj.lam**2 / traj.rho[2:-2] ** 4
    res = np.abs(ddu + du**2 + k - nl)
    scale = np.abs(ddu) + du**2 + np.abs(k) + nl
    return float(np.max(res / scale))


def phase_decompose(psi, anchor_index=0):
    """(rho, phi) with psi = rho e^{i phi}, phi continuous and
    phi[anchor_index] = Arg psi[anchor_index]."""
    psi = np.asarray(psi, dtype=complex)
    rho = np.abs(psi)
    if np.any(rho < 1e-13):
        raise PhaseUnwrapFailure("|psi| < 1e-13: phase undefined")
    phi = np.unwrap(np.angle(psi))
    phi += np.angle(psi[anchor_index]) - phi[anchor_index]
    return rho, phi


def generalized_emp_residual(x, psi, kappa_field, tau_field):
    """Residuals of the real and imaginary equations for psi = rho e^{i phi}.

    * ``printed``:          rho'' + kappa rho - rho phi'
    * ``self_consistent``:  rho'' + kappa rho - rho phi'^2
    * ``imaginary``:        rho phi'' + 2 rho' phi' + tau rho

    Each is divided by rho and reported relative to the largest term; both
    equations share units, so the imaginary one never uses a smaller scale.
    """
    h = _uniform_step(x)
    rho, phi = phase_decompose(psi)
    u = np.log(rho)
    du, ddu = _d1(u, h), _d2(u, h)
    dphi, ddphi = _d1(phi, h), _d2(phi, h)
    xi = np.asarray(x)[2:-2]
    kap = np.real(np.asarray(kappa_field(xi)))
    tau = np.real(np.asarray(tau_field(xi)))
    rr = ddu + du**2
    scale = np.max(np.abs(rr) + np.abs(kap) + dphi**2 + np.abs(dphi))
    printed = np.max(np.abs(rr + kap - dphi)) / scale
    consistent = np.max(np.abs(rr + kap - dphi**2)) / scale
    iscale = max(np.max(np.abs(ddphi) + 2 * np.abs(du * dphi) + np.abs(tau)), scale)
    imag = np.max(np.abs(ddphi + 2 * du * dphi + tau)) / iscale
    return GeneralizedEmpResidual(float(printed), float(consistent), float(imag))
