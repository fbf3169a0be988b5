"""The numba kernels and their pure-numpy fallback must agree."""
import json
import os
import subprocess
import sys
import textwrap

import pytest

PROBE = textwrap.dedent(
    """
    import json
    import numpy as np
    from milnequant import _jit, milne, models, specfun
    from milnequant.ode import integrate_fundamental_pair

    out = {"numba": _jit.NUMBA_ENABLED}
    vals = [
        specfun.gauss_2f1(0.3, -1.7, 2.2, 0.6),
        specfun.gauss_2f1(1, 1, 2, 0.999),
        specfun.gauss_2f1(0.5 + 2j, 0.5 - 2j, 1.5, -4.0),
        specfun.kummer_m(0.7, 1.9, 3.2),
        specfun.whittaker_m(1.5, -0.25, 0.8),
        specfun.whittaker_w(0.25, -0.25, 2.0),
    ]
    x = np.linspace(-2.0, 2.0, 9)
    cases = [
        ("swanson", dict(omega=0.5, alpha=0.125, beta=0.25), 0.6, x),
        ("pt-pair", dict(kappa=2, lam=3), 40.0, np.linspace(0.2, 1.3, 9)),
        ("sech-pair", dict(lam=7.5), -25.0, x),
        ("sech-pair", dict(lam=7.5, sector="plus"), -25.0, x),
    ]
    for variant, params, E, grid in cases:
        m = models.make_model(variant, **params)
        for col in models.analytic_fundamental(m, E, grid):
            vals.extend(np.asarray(col).tolist())
        pair = integrate_fundamental_pair(m.field(E), (grid[0], grid[-1]), m.anchor, tol=1e-12, grid=grid)
        vals.extend(pair.unscaled()[0].tolist())
        vals.append(milne.energy_integral(m, E, backend="analytic").I)
        vals.append(milne.energy_integral(m, E, backend="numeric").I)
    out["values"] = [[complex(v).real, complex(v).imag] for v in vals]
    print(json.dumps(out))
    """
)


def _probe(no_numba):
    env = dict(os.environ)
    env.pop("MILNEQUANT_NO_NUMBA", None)
    if no_numba:
        env["MILNEQUANT_NO_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, timeout=1800)
    assert res.returncode == 0, res.stderr
    return json.loads(res.stdout)


@pytest.fixture(scope="module")
def both():
    return _probe(False), _probe(True)


def test_switch_is_honoured(both):
    jit, plain = both
    assert jit["numba"] is True
    assert plain["numba"] is False


def test_paths_agree(both):
    jit, plain = both
    assert len(jit["values"]) == len(plain["values"])
    for (ar, ai), (br, bi) in zip(jit["values"], plain["values"]):
        a, b = complex(ar, ai), complex(br, bi)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b)), (a, b)
