"""Time the numba kernels against the pure-numpy fallback.

Each workload runs in a fresh interpreter, once with numba and once with
MILNEQUANT_NO_NUMBA=1.  The first call warms the JIT (or cache) and is not
timed.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKER = textwrap.dedent(
    """
    import json, sys, time
    import numpy as np
    from milnequant import _jit, milne, models, specfun
    from milnequant.ode import integrate_fundamental_pair

    repeat = int(sys.argv[1])
    sw = models.make_model("swanson", omega=0.5, alpha=0.125, beta=0.25)
    pt = models.make_model("pt-pair", kappa=2, lam=3)
    sp = models.make_model("sech-pair", lam=7.5, sector="plus")
    z = np.linspace(-0.9, 0.95, 2000)

    work = {
        "gauss_2f1 x2000": lambda: [specfun.gauss_2f1(0.3, -1.7, 2.2, v) for v in z],
        "I(E) analytic, Swanson": lambda: milne.energy_integral(sw, 0.9),
        "I(E) numeric, Swanson": lambda: milne.energy_integral(sw, 0.9, backend="numeric"),
        "I(E) analytic, PT": lambda: milne.energy_integral(pt, 150.0),
        "I(E) analytic, sech +": lambda: milne.energy_integral(sp, -20.0),
        "pair on 2001 points, PT": lambda: integrate_fundamental_pair(
            pt.field(150.0), (0.05, 1.52), pt.anchor, tol=1e-12, grid=np.linspace(0.05, 1.52, 2001)),
    }
    out = {"numba": _jit.NUMBA_ENABLED, "times": {}}
    for name, fn in work.items():
        fn()
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        out["times"][name] = (time.perf_counter() - t0) / repeat
    print(json.dumps(out))
    """
)


def run(no_numba, repeat):
    env = dict(os.environ)
    env.pop("MILNEQUANT_NO_NUMBA", None)
    if no_numba:
        env["MILNEQUANT_NO_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True)
    if res.returncode:
        sys.exit(res.stderr)
    return json.loads(res.stdout)["times"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jit = run(False, args.repeat)
    plain = run(True, args.repeat)
    width = max(map(len, jit))
    print(f"{'workload':<{width}}  {'numba [s]':>10}  {'numpy [s]':>10}  {'speedup':>8}")
    for name in jit:
        a, b = jit[name], plain[name]
        print(f"{name:<{width}}  {a:>10.4f}  {b:>10.4f}  {b / a:>7.1f}x")


if __name__ == "__main__":
    main()
