#!/usr/bin/env python3
"""Freeze high-precision reference values for the test suite.

Every value is computed with mpmath at 60 working digits and stored as a
50-digit string in tests/data/oracles.json.  Rerun after changing the
list; the tests only read the JSON.

    python tools/freeze_oracles.py
"""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 60
DIGITS = 50
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def s(x):
    return mp.nstr(mp.mpf(x), DIGITS)


def c(z):
    z = mp.mpc(z)
    return [s(z.real), s(z.imag)]


def hyp2f1_series(a, b, c_, z):
    # term-by-term; a = -2 terminates after three terms
    total, term, k = mp.mpf(0), mp.mpf(1), 0
    while term != 0 and k < 10_000:
        total += term
        term *= (a + k) * (b + k) / ((c_ + k) * (k + 1)) * z
        k += 1
    return total


def whittaker_wronskian(kap, mu):
    # W{M_{k,mu}, W_{k,mu}} = -Gamma(1 + 2 mu) / Gamma(1/2 + mu - k); zero when M is W
    return -mp.gamma(1 + 2 * mu) * mp.rgamma(mp.mpf(1) / 2 + mu - kap)


def sech_plus_ground(lam=mp.mpf(15) / 2):
    """Residual and norm of the candidate E = -42 state of V_+ (lam = 15/2).

    V_+ = 1/4 - (1 - lam + lam^2) sech^2 x + i (2 lam - 1) sech x tanh x and
    psi = (tanh x + i sech x) sech^(lam - 1) x, the image of the sector -
    ground state sech^(lam - 1) x under d/dx + U.
    """
    s_ = lam - 1
    E = mp.mpf(1) / 4 - s_**2

    def V(x):
        return mp.mpf(1) / 4 - (1 - lam + lam**2) * mp.sech(x) ** 2 + 1j * (2 * lam - 1) * mp.sech(x) * mp.tanh(x)

    def psi(x):
        return (mp.tanh(x) + 1j * mp.sech(x)) * mp.sech(x) ** s_

    res = mp.mpf(0)
    for x in (mp.mpf("-2.5"), mp.mpf("-0.7"), mp.mpf("0.3"), mp.mpf("1.9")):
        r = mp.diff(psi, x, 2) + (E - V(x)) * psi(x)
        res = max(res, abs(r) / abs(psi(x)))
    norm = mp.quad(lambda x: abs(psi(x)) ** 2, [-mp.inf, 0, mp.inf])
    return E, res, norm


def main():
    z = mp.sin(mp.mpf("0.3")) ** 2
    out = {
        "_note": "mpmath, 60 working digits; strings carry 50 significant digits",
        "hyp2f1(-2,7,5/2,sin^2 0.3)": s(hyp2f1_series(-2, 7, mp.mpf(5) / 2, z)),
        "hyp2f1(1,1,2,1/2)": s(mp.hyp2f1(1, 1, 2, mp.mpf(1) / 2)),
        "hyp1f1(0.7,1.9,3.2)": s(mp.hyp1f1(mp.mpf("0.7"), mp.mpf("1.9"), mp.mpf("3.2"))),
        "whitm(0,1/4,1)": s(mp.whitm(0, mp.mpf(1) / 4, 1)),
        "whitm(1.5,-1/4,0.8)": s(mp.whitm(mp.mpf("1.5"), -mp.mpf(1) / 4, mp.mpf("0.8"))),
        "whitw(0.25,-0.25,2)": s(mp.whitw(mp.mpf("0.25"), -mp.mpf("0.25"), 2)),
        "wronskian{M,W}(0.25,-0.25)": s(whittaker_wronskian(mp.mpf("0.25"), -mp.mpf("0.25"))),
        "wronskian{M,W}(1.5,-0.25)": s(whittaker_wronskian(mp.mpf("1.5"), -mp.mpf("0.25"))),
        # harmonic E=1 pair anchored at 0: psi1 = e^{-x^2/2}, psi2 = e^{-x^2/2} (sqrt(pi)/2) erfi(x)
        "harmonic E=1 sigma(1)/sigma(0)": s(mp.e**-1 * (1 + (mp.pi / 4) * mp.erfi(1) ** 2)),
    }
    E, res, norm = sech_plus_ground()
    out["sech+ lam=15/2 ground E"] = s(E)
    out["sech+ lam=15/2 ground relative residual"] = mp.nstr(res, 5)
    out["sech+ lam=15/2 ground norm"] = s(norm)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
