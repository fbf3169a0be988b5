"""Numeric backend: fundamental pairs, direct EMP trajectories, intertwiners.

Both integrators march outward from an anchor x0 with the Dormand-Prince
5(4) kernel.  Linear solutions are renormalised jointly whenever they leave
[1e-100, 1e100]; the per-point ``log_scale`` restores original units.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrationFailure, NonPositiveAmplitude, StepUnderflow, ZeroEnergy, ZeroWronskian
from .fields import WaveNumberField
from .kernels import dopri

__all__ = [
    "FundamentalPair",
    "MilneTrajectory",
    "SolutionSamples",
    "integrate_fundamental_pair",
    "integrate_milne_direct",
    "apply_intertwiner",
    "pair_phase",
]

DEFAULT_GRID = 201


@dataclass(frozen=True)
class FundamentalPair:
    """Two solutions on a grid, stored rescaled; multiply by exp(log_scale)."""

    x: np.ndarray
    psi1: np.ndarray
    dpsi1: np.ndarray
    psi2: np.ndarray
    dpsi2: np.ndarray
    log_scale: np.ndarray
    wronskian: complex
    anchor: float
    lam: float
    phase: np.ndarray

    def unscaled(self):
        f = np.exp(self.log_scale)
        return self.psi1 * f, self.dpsi1 * f, self.psi2 * f, self.dpsi2 * f

    def wronskian_drift(self):
        """max_i |W(x_i) - W| relative to the size of the terms of W(x_i).

        Where both solutions grow, psi1 psi2' and psi1' psi2 cancel down to W
        and only this scale is attainable in double precision; it reduces to
        |W| where they do not.
        """
        a = self.psi1 * self.dpsi2
        b = self.dpsi1 * self.psi2
        with np.errstate(under="ignore"):
            ref = self.wronskian * np.exp(-2.0 * self.log_scale)
        scale = np.maximum(np.abs(ref), np.abs(a) + np.abs(b))
        return float(np.max(np.abs(a - b - ref) / scale))


@dataclass(frozen=True)
class MilneTrajectory:
    x: np.ndarray
    rho: np.ndarray
    drho: np.ndarray
    phi: np.ndarray
    lam: float
    total_phase: float

    @property
    def dphi(self):
        return self.lam / self.rho**2


@dataclass(frozen=True)
class SolutionSamples:
    x: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray = None


def _check_status(status, where):
    if status == dopri.OK:
        return
    if status in (dopri.STEP_UNDERFLOW, dopri.NONFINITE):
        raise StepUnderflow(f"{where}: step size underflow (singularity or stiffness)")
    raise IntegrationFailure(f"{where}: step budget exhausted")


def _sweep(mode, field, lam, x0, x_end, y0, x_out, tol, tail=False, tail_from=0.0, atol=1e-14):
    t = field.table
    res = dopri.integrate(
        mode, field.kind, field.params, t.x, t.coeffs, field.energy, complex(lam),
        float(x0), float(x_end), y0, np.ascontiguousarray(x_out, dtype=float),
        tol, atol, np.inf, tail, float(tail_from),
    )
    _check_status(res[-1], f"integration {x0:g} -> {x_end:g}")
    return res


def _split_grid(grid, x0):
    grid = np.asarray(grid, dtype=float)
    right = grid[grid >= x0]
    left = grid[grid < x0][::-1]
    return left, right


def integrate_fundamental_pair(field: WaveNumberField, domain, x0, lam=1.0, tol=1e-10, grid=None, scale=1.0):
    """Solve psi'' + k^2 psi = 0 for the pair fixed at ``x0``.

    psi1(x0) = 1, psi1'(x0) = 0, psi2(x0) = 0, psi2'(x0) = lam (all times
    ``scale``), so W = scale^2 lam.  The returned ``phase`` is the angle of
    (psi1, psi2) accumulated from the anchor.
    """
    lo, hi = map(float, domain)
    if not (lo <= x0 <= hi) or not (np.isfinite(lo) and np.isfinite(hi)):
        raise DomainError(f"anchor {x0} outside finite domain [{lo}, {hi}]")
    if lam == 0:
        raise ZeroWronskian("lam must be nonzero")
    if grid is None:
        grid = np.linspace(lo, hi, DEFAULT_GRID)
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid[0] < lo or grid[-1] > hi:
        raise DomainError("grid leaves the domain")
    y0 = np.array([scale, 0.0, 0.0, scale * lam, 0.0], dtype=np.complex128)
    left, right = _split_grid(grid, x0)
    blocks = []
    for part in (left, right):
        if len(part) == 0:
            blocks.append((np.zeros((0, 5), complex), np.zeros(0)))
            continue
        ys, logs, *_ = _sweep(dopri.MODE_PAIR, field, 1.0, x0, part[-1], y0, part, tol)
        blocks.append((ys, logs))
    ys = np.concatenate([blocks[0][0][::-1], blocks[1][0]])
    logs = np.concatenate([blocks[0][1][::-1], blocks[1][1]])
    return FundamentalPair(
        x=np.concatenate([left[::-1], right]),
        psi1=ys[:, 0],
        dpsi1=ys[:, 1],
        psi2=ys[:, 2],
        dpsi2=ys[:, 3],
        log_scale=logs,
        wronskian=complex(scale * scale * lam),
        anchor=float(x0),
        lam=float(lam),
        phase=ys[:, 4],
    )


def pair_phase(field: WaveNumberField, domain, x0, lam=1.0, tol=1e-12, tail_from=None, y0=None):
    """Total angle swept by the anchored pair over ``domain`` (complex).

    Each half stops early once it is past ``tail_from`` (lo, hi), inside a
    forbidden region, and the phase has stopped moving.  ``y0`` overrides
    the anchor data (psi1, psi1', psi2, psi2'), default (1, 0, 0, lam).
    Returns (phase, nsteps).
    """
    lo, hi = map(float, domain)
    if tail_from is None:
        tail_from = (x0, x0)
    if y0 is None:
        y0 = (1.0, 0.0, 0.0, lam)
    y0 = np.append(np.asarray(y0, dtype=np.complex128), 0.0)
    none = np.zeros(0)
    total = 0j
    steps = 0
    for end, tf, sgn in ((hi, tail_from[1], 1.0), (lo, tail_from[0], -1.0)):
        if end == x0:
            continue
        res = _sweep(dopri.MODE_PAIR, field, 1.0, x0, end, y0, none, tol, tail=True, tail_from=tf)
        total += sgn * res[3][4]
        steps += res[6]
    return total, steps


def integrate_milne_direct(kappa_field: WaveNumberField, W, domain, x0, rho0, drho0, tol=1e-10, grid=None):
    """Integrate rho'' + kappa rho = W^2 / rho^3 together with phi' = W / rho^2.

    Internally u = ln rho is integrated, which keeps the growth in
    forbidden regions overflow-free.  Only the real part of the field is
    used.
    """
    if rho0 <= 0:
        raise NonPositiveAmplitude(f"rho0={rho0} must be positive")
    if W == 0:
        raise ZeroWronskian("W must be nonzero")
    lo, hi = map(float, domain)
    if not (lo <= x0 <= hi):
        raise DomainError(f"anchor {x0} outside [{lo}, {hi}]")
    if grid is None:
        grid = np.linspace(lo, hi, DEFAULT_GRID)
    grid = np.sort(np.asarray(grid, dtype=float))
    y0 = np.array([np.log(rho0), drho0 / rho0, 0.0, 0.0, 0.0], dtype=np.complex128)
    left, right = _split_grid(grid, x0)
    parts = []
    ends = []
    for part, end in ((left, lo), (right, hi)):
        if end == x0:
            parts.append(np.zeros((0, 5), complex))
            ends.append(0.0)
            continue
        ys, _, _, ylast, *_ = _sweep(dopri.MODE_EMP, kappa_field, float(W), x0, end, y0, part, tol, atol=tol)
        parts.append(ys)
        ends.append(ylast[2].real)
    ys = np.concatenate([parts[0][::-1], parts[1]]).real
    rho = np.exp(ys[:, 0])
    if not np.all(rho > 0):
        raise NonPositiveAmplitude("amplitude left the positive axis; tighten tol")
    return MilneTrajectory(
        x=np.concatenate([left[::-1], right]),
        rho=rho,
        drho=rho * ys[:, 1],
        phi=ys[:, 2],
        lam=float(W),
        total_phase=float(ends[1] - ends[0]),
    )


def apply_intertwiner(sign, U, sol: SolutionSamples, E, dU=None, k2=None):
    """(sign d/dx + U) psi / sqrt(E), pointwise.

    ``U`` (and optionally ``dU``, ``k2``) are callables of x.  When both
    ``dU`` and ``k2`` are supplied the derivative of the image is returned
    as well, using psi'' = -k^2 psi.
    """
    if sign not in (1, -1, "+", "-"):
        raise ValueError("sign must be +1 or -1")
    s = 1.0 if sign in (1, "+") else -1.0
    if E == 0:
        raise ZeroEnergy("the intertwiner map divides by sqrt(E)")
    root = np.sqrt(complex(E))
    x = np.asarray(sol.x, dtype=float)
    u = np.asarray(U(x), dtype=complex)
    psi = np.asarray(sol.psi, dtype=complex)
    dpsi = np.asarray(sol.dpsi, dtype=complex)
    out = (s * dpsi + u * psi) / root
    dout = None
    if dU is not None and k2 is not None:
        dout = (-s * np.asarray(k2(x)) * psi + np.asarray(dU(x)) * psi + u * dpsi) / root
    return SolutionSamples(x, out, dout)
