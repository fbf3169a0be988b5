"""Spectra from the energy integral: scans, brackets, bisection.

Level n sits where I(E) = n + 1.  For complex pairs the real part of the
raw integral is only defined modulo 1 (a complex zero of sigma crossing the
real axis shifts it by an integer), so :class:`BranchedIntegral` follows
one continuous branch upward from the bottom of the potential.
"""
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import (
    BracketNotFound,
    ImaginaryPartTooLarge,
    InvalidBracket,
    MaxIterations,
    MilneError,
    ParameterOutOfRange,
    ZeroEnergy,
)
from .milne import IM_RESIDUAL_LIMIT, EnergyIntegralSample, energy_integral
from .models import GUARD

__all__ = [
    "SpectrumEntry",
    "EnergyScan",
    "Spectrum",
    "BranchedIntegral",
    "scan_energy_integral",
    "solve_level",
    "spectrum",
    "auto_range",
]

MAX_BISECTIONS = 200
MAX_CHANGE = 0.3
BACKSLIDE = 0.05
DECAY_DECADES = 8.0
EXTENSIONS = 2
FLOOR_WIDTH = 1e-5


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    E: float
    I_at_E: float
    im_residual: float
    bracket: tuple
    iterations: int
    backend: str


class EnergyScan(list):
    """Samples of I(E) in scan order, with a monotonicity diagnostic."""

    def __init__(self, samples):
        super().__init__(samples)
        good = [s.I for s in self if s.ok]
        drops = np.diff(good) if len(good) > 1 else np.zeros(0)
        self.max_decrease = float(max(0.0, -drops.min())) if len(drops) else 0.0
        self.errors = [s for s in self if not s.ok]

    @property
    def monotone(self):
        return self.max_decrease <= 1e-9 * max(1.0, max((abs(s.I) for s in self if s.ok), default=1.0))


class Spectrum(list):
    """SpectrumEntry list; ``exhausted`` marks a finite spectrum that ran out."""

    def __init__(self, entries, exhausted=False, notice=None, scan=None):
        super().__init__(entries)
        self.exhausted = exhausted
        self.notice = notice
        self.scan = scan

    @property
    def count(self):
        return len(self)


class BranchedIntegral:
    """Energy integral evaluator that removes integer jumps of complex pairs.

    The branch is pinned at the potential minimum, where 0 <= I < 1.  For
    the complex partner of a SUSY pair the raw value differs from the real
    partner's integral by an exact integer, which is read off there.  Other
    complex models continue the branch in E, halving steps until I moves by
    at most MAX_CHANGE on each half.  Real pairs are returned unchanged.
    """

    def __init__(self, model, backend="analytic", lam=1.0, quad_tol=None):
        self.model = model
        self.backend = backend
        self.lam = lam
        self.quad_tol = quad_tol
        self.branched = not model.hermitian
        self.reference = None
        if self.branched and model.susy and model.partner().hermitian:
            self.reference = BranchedIntegral(model.partner(), backend, lam, quad_tol)
        self._shift = None
        self._known = {}
        self._lock = threading.Lock()

    def raw(self, E):
        return energy_integral(self.model, E, self.backend, self.quad_tol, self.lam, check=False)

    def __call__(self, E, raw=None):
        E = float(E)
        if raw is None:
            raw = self.raw(E)
        if self.branched:
            with self._lock:
                raw = replace(raw, I=self._resolve(E, raw.I))
        if raw.im_residual > IM_RESIDUAL_LIMIT * max(1.0, abs(raw.I)):
            raise ImaginaryPartTooLarge(f"|Im I| = {raw.im_residual:.2e} at E={E:g}")
        return raw

    def _base(self):
        if not self._known:
            E0 = bottom_energy(self.model)
            if E0 == 0.0:
                E0 = -1e-12
            value = self.raw(E0).I
            self._known[E0] = value % 1.0
            if self.reference is not None:
                self._shift = self._known[E0] - self._snap(E0, value)
        return self._known

    def _snap(self, E, value):
        return value + round(self.reference(E).I - value)

    def _resolve(self, E, value):
        known = self._base()
        if E in known:
            return known[E]
        if self.reference is not None:
            out = self._snap(E, value) + self._shift
            known[E] = out
            return out
        start = min(known, key=lambda k: abs(k - E))
        cur_E, cur_I = start, known[start]
        step = E - cur_E
        floor = 1e-10 * max(1.0, abs(E))
        while cur_E != E:
            t = E if abs(E - cur_E) <= abs(step) else cur_E + step
            try:
                r = value if t == E else self.raw(t).I
                mid = self.raw(0.5 * (cur_E + t)).I
            except ZeroEnergy:
                step *= 0.75
                continue
            c1 = _wrapped_change(cur_E, 0.5 * (cur_E + t), cur_I, mid)
            c2 = _wrapped_change(0.5 * (cur_E + t), t, cur_I + c1, r)
            if max(abs(c1), abs(c2)) <= MAX_CHANGE or abs(t - cur_E) < floor:
                cur_E, cur_I = t, cur_I + c1 + c2
                known[cur_E] = cur_I
                step = E - cur_E
            else:
                step = 0.5 * (t - cur_E)
        return cur_I


def _wrapped_change(E_from, E_to, I_from, raw_to):
    # I is nondecreasing in E; allow a small backslide for rounding
    d = 1.0 if E_to > E_from else -1.0
    return d * ((d * (raw_to - I_from) + BACKSLIDE) % 1.0 - BACKSLIDE)


def _map(fn, items, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def scan_energy_integral(model, E_lo, E_hi, steps, backend="analytic", lam=1.0, quad_tol=None, jobs=1, integral=None):
    """Uniform scan of I(E) over [E_lo, E_hi]; failed samples carry ``error``."""
    if steps < 2:
        raise ParameterOutOfRange("steps must be >= 2")
    if not E_lo < E_hi:
        raise ParameterOutOfRange("E_lo must be below E_hi")
    if integral is None:
        integral = BranchedIntegral(model, backend, lam, quad_tol)
    grid = np.linspace(E_lo, E_hi, int(steps))

    def raw(E):
        try:
            return integral.raw(E)
        except MilneError as exc:
            return exc

    raws = _map(raw, grid, jobs)
    out = []
    for E, r in zip(grid, raws):
        if isinstance(r, Exception):
            out.append(EnergyIntegralSample(float(E), math.nan, math.nan, math.nan, backend, error=f"{type(r).__name__}: {r}"))
            continue
        try:
            out.append(integral(E, raw=r))
        except MilneError as exc:
            out.append(EnergyIntegralSample(float(E), math.nan, math.nan, math.nan, backend, error=f"{type(exc).__name__}: {exc}"))
    return EnergyScan(out)


def solve_level(model, n, E_lo, E_hi, tol=1e-10, backend="analytic", lam=1.0, quad_tol=None, integral=None):
    """Bisect I(E) = n + 1 inside [E_lo, E_hi]."""
    if tol <= 0:
        raise ParameterOutOfRange("tol must be positive")
    if integral is None:
        integral = BranchedIntegral(model, backend, lam, quad_tol)
    target = n + 1
    lo, hi = float(E_lo), float(E_hi)
    s_lo, s_hi = integral(lo), integral(hi)
    f_lo, f_hi = s_lo.I - target, s_hi.I - target
    if f_lo == 0:
        return SpectrumEntry(n, lo, s_lo.I, s_lo.im_residual, (lo, hi), 0, backend)
    if f_hi == 0:
        return SpectrumEntry(n, hi, s_hi.I, s_hi.im_residual, (lo, hi), 0, backend)
    if not (f_lo < 0 < f_hi):
        raise InvalidBracket(f"I({lo:g})={s_lo.I:.6g}, I({hi:g})={s_hi.I:.6g} do not bracket {target}")
    best = s_lo if abs(f_lo) < abs(f_hi) else s_hi
    for it in range(1, MAX_BISECTIONS + 1):
        mid = 0.5 * (lo + hi)
        if mid == 0.0 and integral.branched:
            mid = lo + 0.49 * (hi - lo)
        try:
            s = integral(mid)
        except MilneError:
            # conditioning floor (e.g. the 1/sqrt(E) pair near E = 0)
            if hi - lo < FLOOR_WIDTH * max(1.0, abs(mid)):
                return SpectrumEntry(n, mid, best.I, best.im_residual, (lo, hi), it, backend)
            raise
        f = s.I - target
        if abs(f) <= abs(best.I - target):
            best = s
        if f == 0:
            return SpectrumEntry(n, mid, s.I, s.im_residual, (lo, hi), it, backend)
        if f < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(1.0, abs(0.5 * (lo + hi))):
            E = 0.5 * (lo + hi)
            return SpectrumEntry(n, E, best.I, best.im_residual, (lo, hi), it, backend)
    raise MaxIterations(f"level {n}: no convergence after {MAX_BISECTIONS} bisections")


# ---------------------------------------------------------------- auto range

def bottom_energy(model):
    lo, hi = model.work_domain
    x = np.linspace(lo, hi, 4001)
    return float(np.min(np.real(model.potential(x))))


def _wkb_count(model, E, x, v):
    k = np.sqrt(np.maximum(model.g * (E - v), 0.0))
    return float(np.trapezoid(k, x)) / np.pi


def _continuum_cap(model):
    # bound states must decay by DECAY_DECADES inside the guard interval
    if model.threshold is None:
        return None
    kappa = DECAY_DECADES * math.log(10.0) / (2.0 * GUARD)
    return model.threshold - kappa * kappa / model.g


def auto_range(model, levels):
    """(E_lo, E_hi) expected to hold ``levels`` crossings (WKB estimate)."""
    lo, hi = model.work_domain
    x = np.linspace(lo, hi, 20001)
    v = np.real(model.potential(x))
    E0 = float(np.min(v))
    cap = _continuum_cap(model)
    if cap is not None:
        return E0, cap
    want = levels + 1.0
    span = 1.0
    while _wkb_count(model, E0 + span, x, v) < want:
        span *= 2.0
        if span > 1e12:
            raise BracketNotFound(levels - 1, "potential does not confine enough levels")
    top = brentq(lambda E: _wkb_count(model, E, x, v) - want, E0, E0 + span, xtol=1e-6)
    return E0, top + 0.05 * (top - E0)


def spectrum(model, levels, backend="analytic", lam=1.0, tol=1e-10, quad_tol=None, jobs=1, steps=None):
    """Lowest ``levels`` eigenvalues from a coarse scan plus bisection.

    Finite spectra stop at the continuum cap and set ``exhausted``; for
    confining models the range is doubled up to twice before a missing
    crossing raises :class:`BracketNotFound` (with the partial spectrum
    attached as ``partial``).
    """
    if levels < 1:
        raise ParameterOutOfRange("levels must be >= 1")
    integral = BranchedIntegral(model, backend, lam, quad_tol)
    E_lo, E_hi = auto_range(model, levels)
    npts = steps or max(64, 8 * levels)
    cap = _continuum_cap(model)
    samples = []
    for attempt in range(EXTENSIONS + 1):
        scan = scan_energy_integral(model, E_lo, E_hi, npts, backend, lam, quad_tol, jobs, integral)
        samples = [s for s in scan if s.ok]
        brackets = _brackets(samples, levels)
        if len(brackets) == levels or cap is not None:
            break
        E_hi = E_lo + 2.0 * (E_hi - E_lo)
    jobs_list = list(enumerate(brackets))

    def solve(item):
        n, (a, b) = item
        return solve_level(model, n, a, b, tol, backend, lam, quad_tol, integral)

    entries = _map(solve, jobs_list, jobs) if not integral.branched else [solve(i) for i in jobs_list]
    result = Spectrum(entries, scan=scan)
    if len(entries) < levels:
        if cap is not None:
            result.exhausted = True
            result.notice = f"{model.describe()} supports {len(entries)} level(s) below the continuum threshold"
            return result
        err = BracketNotFound(len(entries), f"no crossing of I = {len(entries) + 1} below E = {E_hi:g}")
        err.partial = result
        raise err
    return result


def _brackets(samples, levels):
    out = []
    for n in range(levels):
        target = n + 1
        found = None
        for a, b in zip(samples, samples[1:]):
            if a.I < target <= b.I or a.I == target:
                found = (a.E, b.E)
                break
        if found is None:
            break
        out.append(found)
    return out
