"""Dormand-Prince 5(4) integrator specialised to the Schroedinger/EMP forms.

State vector (complex, length 5) by ``mode``:

* ``MODE_PAIR``   (psi1, psi1', psi2, psi2', phase), phase' = r W / (psi1^2 + r^2 psi2^2)
* ``MODE_EMP``    (u, u', phase, -, -) with rho = exp(u):
                  u'' = lam^2 exp(-4u) - u'^2 - kappa,  phase' = lam exp(-2u)
* ``MODE_SINGLE`` (psi, psi', -, -, -), node counting on Re psi

For the linear modes the solution block is divided by its magnitude
whenever it leaves [1e-100, 1e100]; the divisor is accumulated in a log
scale so values in original units are ``y * exp(log_scale)``.  The phase
derivative is invariant under that joint rescaling.
"""
import numpy as np

from .._jit import njit
from .fields import k2_value

MODE_PAIR = 0
MODE_EMP = 1
MODE_SINGLE = 2

OK = 0
STEP_UNDERFLOW = 1
MAX_STEPS = 2
NONFINITE = 3

RESCALE_HI = 1e100
RESCALE_LO = 1e-100
MAX_STEP_COUNT = 5_000_000
TAIL_RTOL = 1e-15
TAIL_RUN = 3

_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
_A71, _A73, _A74, _A75, _A76 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_BETA = 0.04
_EXPO1 = 0.2 - _BETA * 0.75
_SAFE = 0.9
_FACC1 = 5.0  # 1 / min shrink factor 0.2
_FACC2 = 0.1  # 1 / max growth factor 10


@njit
def rhs(mode, kind, p, tx, tc, E, lam, x, y, out):
    k2 = k2_value(kind, p, tx, tc, x, E)
    if mode == MODE_PAIR:
        out[0] = y[1]
        out[1] = -k2 * y[0]
        out[2] = y[3]
        out[3] = -k2 * y[2]
        w = y[0] * y[3] - y[1] * y[2]
        out[4] = lam * w / (y[0] * y[0] + lam * lam * y[2] * y[2])
    elif mode == MODE_EMP:
        lr = lam.real
        u = y[0].real
        v = y[1].real
        out[0] = v
        out[1] = lr * lr * np.exp(-4.0 * u) - v * v - k2.real
        out[2] = lr * np.exp(-2.0 * u)
        out[3] = 0.0
        out[4] = 0.0
    else:
        out[0] = y[1]
        out[1] = -k2 * y[0]
        out[2] = 0.0
        out[3] = 0.0
        out[4] = 0.0
    return k2


@njit
def _error_norm(mode, y, ynew, err, atol, rtol):
    worst = 0.0
    if mode == MODE_EMP:
        for i in range(3):
            sc = atol + rtol * max(1.0, abs(ynew[i]))
            r = abs(err[i]) / sc
            if r > worst:
                worst = r
        return worst
    nsol = 4 if mode == MODE_PAIR else 2
    mag = 0.0
    for i in range(nsol):
        mag = max(mag, abs(y[i]), abs(ynew[i]))
    # relative to the block magnitude: the block is rescaled, so an
    # absolute floor would be meaningless here
    sc = rtol * mag + 1e-300
    for i in range(nsol):
        r = abs(err[i]) / sc
        if r > worst:
            worst = r
    if mode == MODE_PAIR:
        r = abs(err[4]) / (atol + rtol * max(1.0, abs(ynew[4])))
        if r > worst:
            worst = r
    return worst


@njit
def integrate(mode, kind, p, tx, tc, E, lam, x0, x_end, y0, x_out, rtol, atol, hmax, tail, tail_from):
    """Integrate from ``x0`` to ``x_end`` recording the state at ``x_out``.

    ``x_out`` must be ordered in the direction of integration.  With
    ``tail`` set, integration may stop early once past ``tail_from`` in a
    classically forbidden region where the phase has stopped moving.

    Returns (ys_out, logs_out, x_last, y_last, log_last, nodes, nsteps, status).
    """
    n_out = x_out.shape[0]
    ys_out = np.full((n_out, 5), np.nan + 0j, dtype=np.complex128)
    logs_out = np.zeros(n_out)
    y = y0.copy()
    log_scale = 0.0
    x = x0
    span = x_end - x0
    dirn = 1.0 if span >= 0 else -1.0
    phase_idx = 2 if mode == MODE_EMP else 4
    linear = mode != MODE_EMP

    io = 0
    while io < n_out and x_out[io] == x0:
        ys_out[io, :] = y
        logs_out[io] = 0.0
        io += 1
    if span == 0.0:
        return ys_out, logs_out, x, y, log_scale, 0, 0, OK

    k1 = np.empty(5, dtype=np.complex128)
    k2 = np.empty(5, dtype=np.complex128)
    k3 = np.empty(5, dtype=np.complex128)
    k4 = np.empty(5, dtype=np.complex128)
    k5 = np.empty(5, dtype=np.complex128)
    k6 = np.empty(5, dtype=np.complex128)
    k7 = np.empty(5, dtype=np.complex128)
    ytmp = np.empty(5, dtype=np.complex128)
    ynew = np.empty(5, dtype=np.complex128)
    err = np.empty(5, dtype=np.complex128)

    kk = rhs(mode, kind, p, tx, tc, E, lam, x, y, k1)
    h = min(hmax, abs(span), 0.05 / np.sqrt(abs(kk) + 1.0))
    facold = 1e-4
    nodes = 0
    prev_sign = 0.0
    if y[0].real > 0:
        prev_sign = 1.0
    elif y[0].real < 0:
        prev_sign = -1.0
    quiet = 0
    nsteps = 0
    status = OK
    last = False

    while True:
        if nsteps >= MAX_STEP_COUNT:
            status = MAX_STEPS
            break
        # clip onto the next output point or the end of the interval
        target = x_end
        if io < n_out:
            target = x_out[io]
        dist = abs(target - x)
        hit = False
        if h >= dist:
            h_use = dist
            hit = True
        else:
            h_use = h
        if h_use < 1e-13 * max(1.0, abs(x)):
            if hit and h_use >= 0.0 and dist < 1e-13 * max(1.0, abs(x)):
                h_use = dist
            else:
                status = STEP_UNDERFLOW
                break
        hs = dirn * h_use

        for i in range(5):
            ytmp[i] = y[i] + hs * _A21 * k1[i]
        rhs(mode, kind, p, tx, tc, E, lam, x + _C2 * hs, ytmp, k2)
        for i in range(5):
            ytmp[i] = y[i] + hs * (_A31 * k1[i] + _A32 * k2[i])
        rhs(mode, kind, p, tx, tc, E, lam, x + _C3 * hs, ytmp, k3)
        for i in range(5):
            ytmp[i] = y[i] + hs * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        rhs(mode, kind, p, tx, tc, E, lam, x + _C4 * hs, ytmp, k4)
        for i in range(5):
            ytmp[i] = y[i] + hs * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
        rhs(mode, kind, p, tx, tc, E, lam, x + _C5 * hs, ytmp, k5)
        for i in range(5):
            ytmp[i] = y[i] + hs * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i])
        xnew = x + hs
        if hit:
            xnew = target
        rhs(mode, kind, p, tx, tc, E, lam, xnew, ytmp, k6)
        for i in range(5):
            ynew[i] = y[i] + hs * (_A71 * k1[i] + _A73 * k3[i] + _A74 * k4[i] + _A75 * k5[i] + _A76 * k6[i])
        k2new = rhs(mode, kind, p, tx, tc, E, lam, xnew, ynew, k7)
        for i in range(5):
            err[i] = hs * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i])
        nsteps += 1

        finite = True
        for i in range(5):
            if not (np.isfinite(ynew[i].real) and np.isfinite(ynew[i].imag)):
                finite = False
        if not finite:
            h = h_use * 0.25
            if h < 1e-13 * max(1.0, abs(x)):
                status = NONFINITE
                break
            continue

        en = _error_norm(mode, y, ynew, err, atol, rtol)
        fac11 = en**_EXPO1 if en > 0 else 0.0
        if en <= 1.0:
            fac = fac11 / facold**_BETA
            fac = max(_FACC2, min(_FACC1, fac / _SAFE))
            h_next = h_use / fac
            if hit and h_next < h:
                # a step clipped onto an output point says nothing about
                # the admissible step size
                h_next = h
            facold = max(en, 1e-4)

            dphase = abs(ynew[phase_idx] - y[phase_idx])
            x = xnew
            for i in range(5):
                y[i] = ynew[i]
                k1[i] = k7[i]

            if linear:
                mag = 0.0
                for i in range(4):
                    mag = max(mag, abs(y[i]))
                if mag > RESCALE_HI or (0.0 < mag < RESCALE_LO):
                    for i in range(4):
                        y[i] = y[i] / mag
                        k1[i] = k1[i] / mag
                    log_scale += np.log(mag)

            cur = y[0].real
            if cur != 0.0:
                s = 1.0 if cur > 0 else -1.0
                if prev_sign != 0.0 and s != prev_sign:
                    nodes += 1
                prev_sign = s

            if hit:
                if io < n_out:
                    ys_out[io, :] = y
                    logs_out[io] = log_scale
                    io += 1
                    while io < n_out and x_out[io] == x:
                        ys_out[io, :] = y
                        logs_out[io] = log_scale
                        io += 1
                if x == x_end:
                    last = True

            if last:
                break

            if tail and io >= n_out and dirn * (x - tail_from) >= 0.0 and k2new.real < 0.0:
                if dphase <= TAIL_RTOL * max(1.0, abs(y[phase_idx])):
                    quiet += 1
                    if quiet >= TAIL_RUN:
                        break
                else:
                    quiet = 0
            h = min(h_next, hmax)
        else:
            h = h_use / min(_FACC1, fac11 / _SAFE)

    return ys_out, logs_out, x, y, log_scale, nodes, nsteps, status
