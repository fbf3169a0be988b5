"""Command-line front end: ``milnequant scan|spectrum|verify|compare``.

Exit codes: 0 ok, 1 configuration error, 2 scan with failed samples,
3 level bracketing failure, 4 failed verification check.
"""
import argparse
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import milne, models, oracle, quantize
from .errors import BracketNotFound, LevelOutOfRange, MilneError, NoClosedForm, ParameterOutOfRange
from .ode import integrate_fundamental_pair, integrate_milne_direct

EXIT_OK, EXIT_CONFIG, EXIT_SCAN, EXIT_BRACKET, EXIT_VERIFY = 0, 1, 2, 3, 4
SUITES = ("emp", "iik", "pt", "wronskian", "backends", "wkb", "oracle")
SIG = 15
EMP_STEP = 0.02  # h sqrt(max|kappa|) on EMP residual grids


class ConfigError(Exception):
    """Invalid command line; the message names the offending flag."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _number(text):
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: '{text}'")


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, f".{SIG}g")


def _jnum(x):
    """JSON-safe number rounded to 15 significant digits (NaN -> null)."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(format(x, f".{SIG}g"))


# ---------------------------------------------------------------- parser

def _model_flags(p):
    g = p.add_argument_group("model")
    g.add_argument("--model", choices=models.VARIANTS, help="potential family")
    g.add_argument("--omega", type=_number)
    g.add_argument("--alpha", type=_number)
    g.add_argument("--beta", type=_number)
    g.add_argument("--dyson-lambda", type=_number, default=0.0)
    g.add_argument("--kappa", type=_number)
    g.add_argument("--lambda", dest="lam", type=_number, help="coupling lambda of the SUSY pairs")
    g.add_argument("--sector", choices=("minus", "plus", "-", "+"), default="minus")
    g.add_argument("--table", help="custom potential table: x, Re V[, Im V]")
    g.add_argument("--backend", choices=milne.BACKENDS)
    g.add_argument("--pinney", type=_number, default=1.0, help="Pinney constant lambda (default 1)")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--jobs", type=int, default=1)


def build_parser():
    p = _Parser(prog="milnequant", description="Milne phase-amplitude quantization of bound states.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    s = sub.add_parser("scan", help="tabulate I(E) on a uniform grid (CSV)")
    _model_flags(s)
    s.add_argument("--emin", type=_number)
    s.add_argument("--emax", type=_number)
    s.add_argument("--steps", type=int, default=101)
    s = sub.add_parser("spectrum", help="solve I(E_n) = n + 1 for the lowest levels (JSON)")
    _model_flags(s)
    s.add_argument("--levels", type=int, default=6)
    s.add_argument("--tol", type=_number, default=1e-10)
    s = sub.add_parser("verify", help="run a verification suite")
    _model_flags(s)
    s.add_argument("--suite", required=True)
    s.add_argument("--energy", type=_number)
    s = sub.add_parser("compare", help="Milne vs shooting vs WKB table")
    _model_flags(s)
    s.add_argument("--levels", type=int, default=6)
    return p


def _build_model(args):
    if args.model is None:
        raise ConfigError("--model is required")
    kw = {}
    if args.model == "swanson":
        for name in ("omega", "alpha", "beta"):
            if getattr(args, name) is None:
                raise ConfigError(f"--{name} is required for the swanson model")
        kw = dict(omega=args.omega, alpha=args.alpha, beta=args.beta, dyson_lambda=args.dyson_lambda)
    elif args.model == "harmonic":
        kw = dict(omega=1.0 if args.omega is None else args.omega)
    elif args.model == "pt-pair":
        for flag, val in (("--kappa", args.kappa), ("--lambda", args.lam)):
            if val is None:
                raise ConfigError(f"{flag} is required for the pt-pair model")
        kw = dict(kappa=args.kappa, lam=args.lam, sector=args.sector)
    elif args.model == "sech-pair":
        if args.lam is None:
            raise ConfigError("--lambda is required for the sech-pair model")
        kw = dict(lam=args.lam, sector=args.sector)
    else:
        if not args.table:
            raise ConfigError("--table is required for the custom model")
        kw = dict(table=args.table)
    try:
        return models.make_model(args.model, **kw)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"--model {args.model}: {exc}")


def _backend(args, model):
    if args.backend:
        if args.backend == "analytic" and not model.has_analytic:
            raise ConfigError("--backend analytic needs a closed-form model")
        return args.backend
    return "analytic" if model.has_analytic else "numeric"


def _params(model):
    out = {}
    for k, v in model.params.items():
        if k in ("x", "v"):
            continue
        out[k] = _jnum(v) if isinstance(v, (int, float)) else v
    return out


def _open(args):
    if args.out:
        return open(args.out, "w", newline="")
    return sys.stdout


# ---------------------------------------------------------------- scan

def run_scan(args):
    if args.steps < 2:
        raise ConfigError("--steps: steps must be ≥ 2")
    if args.emin is None or args.emax is None:
        raise ConfigError("--emin and --emax are required")
    if not args.emin < args.emax:
        raise ConfigError("--emin must be below --emax")
    model = _build_model(args)
    backend = _backend(args, model)
    samples = quantize.scan_energy_integral(
        model, args.emin, args.emax, args.steps, backend, lam=args.pinney, jobs=args.jobs
    )
    fmt = args.format or "csv"
    buf = io.StringIO()
    if fmt == "csv":
        buf.write("E,I,im_residual,quad_error,backend\n")
        for s in samples:
            buf.write(",".join([_fmt(s.E), _fmt(s.I), _fmt(s.im_residual), _fmt(s.quadrature_error), s.backend]) + "\n")
    else:
        doc = {
            "model": model.variant,
            "params": _params(model),
            "backend": backend,
            "samples": [
                {"E": _jnum(s.E), "I": _jnum(s.I), "im_residual": _jnum(s.im_residual),
                 "quad_error": _jnum(s.quadrature_error), "error": s.error}
                for s in samples
            ],
        }
        buf.write(json.dumps(doc, indent=2) + "\n")
    _emit(args, buf.getvalue())
    for s in samples.errors:
        print(f"warning: E={_fmt(s.E)}: {s.error}", file=sys.stderr)
    return EXIT_SCAN if samples.errors else EXIT_OK


def _emit(args, text):
    out = _open(args)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()


# ---------------------------------------------------------------- spectrum

def run_spectrum(args):
    if args.levels < 1:
        raise ConfigError("--levels must be ≥ 1")
    model = _build_model(args)
    backend = _backend(args, model)
    errors = []
    try:
        spec = quantize.spectrum(model, args.levels, backend, lam=args.pinney, tol=args.tol, jobs=args.jobs)
    except BracketNotFound as exc:
        spec = getattr(exc, "partial", quantize.Spectrum([]))
        errors.append({"n": exc.n, "message": str(exc)})
    doc = {
        "model": model.variant,
        "params": _params(model),
        "backend": backend,
        "levels": [
            {"n": e.n, "E": _jnum(e.E), "I": _jnum(e.I_at_E), "im_residual": _jnum(e.im_residual), "iterations": e.iterations}
            for e in spec
        ],
    }
    if spec.notice:
        doc["notice"] = spec.notice
        print(f"notice: {spec.notice}", file=sys.stderr)
    if errors:
        doc["errors"] = errors
    _emit(args, json.dumps(doc, indent=2) + "\n")
    return EXIT_BRACKET if errors else EXIT_OK


# ---------------------------------------------------------------- verify

def _check(name, value, limit, detail=""):
    value = float(value)
    return {"check": name, "value": _jnum(value), "limit": limit, "passed": bool(value < limit), "detail": detail}


def _info(name, value):
    """Reported but not gating."""
    return {"check": name, "value": _jnum(value), "limit": None, "passed": True, "detail": "informational"}


def _levels(model, count, energy=None):
    if energy is not None:
        return [energy]
    out = []
    for n in range(count):
        try:
            out.append(models.exact_energy(model, n))
        except (NoClosedForm, LevelOutOfRange):
            break
    if not out:
        raise ConfigError("--energy is required for this model")
    return out


def _window(model, E, action=12.0, kappa_cap=None):
    """Interval around the allowed region whose barriers carry ``action``.

    With ``kappa_cap`` the walk also stops where |kappa| exceeds it, which
    keeps uniform grids finite next to singular walls.
    """
    lo, hi = model.work_domain
    f = model.field(E)
    ends = []
    for end in (lo, hi):
        xs = np.linspace(model.anchor, end, 8001)
        kap = f.kappa(xs)
        q = np.sqrt(np.maximum(-kap, 0.0))
        acc = np.concatenate([[0.0], np.cumsum(0.5 * (q[1:] + q[:-1]) * np.abs(np.diff(xs)))])
        stop = acc >= action
        if kappa_cap is not None:
            stop |= np.abs(kap) > kappa_cap
        idx = np.nonzero(stop)[0]
        ends.append(xs[idx[0]] if len(idx) else xs[int(0.98 * (len(xs) - 1))])
    return ends[0], ends[1]


def _uniform_grid(model, E, a, b, ratio=EMP_STEP):
    xs = np.linspace(a, b, 4001)
    kmax = float(np.max(np.abs(model.field(E).kappa(xs))))
    n = max(401, int(math.ceil((b - a) * math.sqrt(kmax) / ratio)) + 1)
    return np.linspace(a, b, n)


def _window_phase(model, E, lam, a, b):
    """(1/pi) int_a^b lam/sigma from the closed-form pair."""
    f, _ = milne._analytic_integrand(model, E, lam)
    return float(np.real(milne._split_quad(f, a, b, 1e-12)[0])) / math.pi


def suite_emp(model, args):
    checks = []
    for E in _levels(model, 3, args.energy):
        if not model.hermitian:
            x = np.linspace(-3.0, 3.0, 2401)
            psi = models.canonical_pair(model, E, x, args.pinney)[0]
            f = model.field(E)
            r = milne.generalized_emp_residual(x, psi, f.kappa, f.tau)
            checks.append(_check(f"generalized EMP (self-consistent) E={_fmt(E)}", r.self_consistent, 1e-6))
            checks.append(_check(f"generalized EMP (imaginary) E={_fmt(E)}", r.imaginary, 1e-6))
            checks.append(_info(f"generalized EMP (as printed, rho phi') E={_fmt(E)}", r.printed))
            continue
        field = model.field(E)
        xs = np.linspace(*model.work_domain, 4001)
        cap = 100.0 * max(1.0, float(np.max(np.abs(field.kappa(xs)[np.real(field.kappa(xs)) > 0]), initial=1.0)))
        a, b = _window(model, E, kappa_cap=cap)
        grid = _uniform_grid(model, E, a, b)
        traj = integrate_milne_direct(field, args.pinney, (a, b), model.anchor, 1.0, 0.0, tol=1e-12, grid=grid)
        # where rho dips, phi' = lam / rho^2 sets the feature width, not kappa
        rate = float(np.max(np.abs(traj.dphi)))
        if rate * (grid[1] - grid[0]) > EMP_STEP:
            grid = np.linspace(a, b, int(math.ceil((b - a) * rate / EMP_STEP)) + 1)
            traj = integrate_milne_direct(field, args.pinney, (a, b), model.anchor, 1.0, 0.0, tol=1e-12, grid=grid)
        checks.append(_check(f"EMP residual E={_fmt(E)}", milne.emp_residual(traj, field.kappa), 1e-6))
        if model.has_analytic:
            ref = _window_phase(model, E, args.pinney, a, b)
            label = f"EMP phase vs Pinney phase on [{a:.3g}, {b:.3g}] E={_fmt(E)}"
            checks.append(_check(label, abs(traj.total_phase / math.pi - ref), 1e-7))
    return checks


def _iik_energies(model, energy):
    if energy is not None:
        return [energy]
    return [24.0, 56.0, 96.0] if model.variant == "pt-pair" else [-30.0, -20.0, -5.0]


def suite_iik(model, args):
    if not model.susy:
        raise ConfigError("--suite iik needs --model pt-pair or sech-pair")
    if model.variant == "pt-pair":
        grid = np.linspace(0.2, 1.35, 116)
    else:
        grid = np.linspace(-3.0, 3.0, 121)
    checks = []
    for E in _iik_energies(model, args.energy):
        res = models.iik_residuals(model, E, grid, args.pinney)
        for key in ("w_equal", "second_identity", "i2_identity", "im_derivative"):
            checks.append(_check(f"{key} E={_fmt(E)}", res[key], 1e-6))
    if model.variant == "sech-pair":
        lam = model.params["lam"]
        b = lambda x: 0.5 * (1.0 - 2.0 * lam) / np.cosh(x)
        _, vm, vp = models.susy_from_b(b, grid=grid)
        U, dU, _ = model.superpotential()
        u, du = U(grid), dU(grid)
        checks.append(_check("V- = U^2 - U'", np.max(np.abs(vm(grid) - (u * u - du))), 1e-10))
        checks.append(_check("V+ = U^2 + U'", np.max(np.abs(vp(grid) - (u * u + du))), 1e-10))
    return checks


def suite_pt(model, args):
    if np.isfinite(model.domain[0]) and model.variant != "custom":
        raise ConfigError("--suite pt needs a model on a domain symmetric about 0")
    if model.variant == "custom":
        lo, hi = model.domain
        if not math.isclose(lo, -hi, abs_tol=1e-12 * max(1.0, abs(hi))):
            raise ConfigError("--suite pt needs a table symmetric about x = 0")
        x = np.linspace(lo, hi, 401)
        return [_check("pt_residual(V)", models.pt_residual(model.potential, x), 1e-10)]
    x = np.linspace(-10.0, 10.0, 2001)
    checks = []
    if model.susy:
        pair = [model, model.partner()]
        pair.sort(key=lambda m: m.sector)
        for m in pair:
            checks.append(_check(f"pt_residual(V{'-' if m.sector == 'minus' else '+'})", models.pt_residual(m.potential, x), 1e-14))
        U, _, _ = model.superpotential()
        checks.append(_check("max |conj U(-x) + U(x)|", np.max(np.abs(np.conj(U(-x)) + U(x))), 1e-14))
        plus = model if model.sector == "plus" else model.partner()
        E = -30.0 if args.energy is None else args.energy
        xs = np.linspace(-6.0, 6.0, 241)
        p1, _, p2, _ = models.canonical_pair(plus, E, xs, args.pinney)
        amp = milne.MilneAmplitude(xs, p1 * p1 + p2 * p2, args.pinney, complex(args.pinney))
        checks.append(_check(f"Im sigma oddness (V+, E={_fmt(E)})", milne.im_sigma_oddness(amp), 1e-7))
    else:
        checks.append(_check("pt_residual(V)", models.pt_residual(model.potential, x), 1e-14))
    return checks


def suite_wronskian(model, args):
    checks = []
    for E in _levels(model, 3, args.energy):
        a, b = _window(model, E, action=6.0)
        pair = integrate_fundamental_pair(model.field(E), (a, b), model.anchor, args.pinney, tol=1e-12)
        checks.append(_check(f"Wronskian drift E={_fmt(E)} on [{a:.3g}, {b:.3g}]", pair.wronskian_drift(), 1e-8))
    return checks


def suite_backends(model, args):
    if not model.has_analytic:
        raise ConfigError("--suite backends needs a closed-form model")
    checks = []
    for E in _levels(model, 3, args.energy):
        a = milne.energy_integral(model, E, "analytic", lam=args.pinney)
        n = milne.energy_integral(model, E, "numeric", lam=args.pinney)
        checks.append(_check(f"|I_analytic - I_numeric| E={_fmt(E)}", abs(a.raw - n.raw) / max(1.0, abs(a.I)), 1e-8))
    return checks


def suite_wkb(model, args):
    if not model.hermitian:
        raise ConfigError("--suite wkb needs a real potential")
    checks = []
    backend = _backend(args, model)
    if model.variant == "harmonic":
        w = model.params["omega"]
        for E in (0.5, 1.0, 3.0, 7.5):
            checks.append(_check(f"I_WKB - E/(2 omega) E={_fmt(E)}", abs(milne.wkb_integral(model, E) - E / (2 * w)), 1e-10))
    quadratic = model.variant in ("harmonic", "swanson")
    for E in _levels(model, 6, args.energy):
        gap = milne.energy_integral(model, E, backend).I - milne.wkb_integral(model, E)
        if quadratic:
            checks.append(_check(f"|I - I_WKB - 1/2| E={_fmt(E)}", abs(gap - 0.5), 1e-3))
        else:
            # O(1) defect for non-quadratic wells
            checks.append(_check(f"|I_WKB - (I - 1)| E={_fmt(E)}", abs(gap - 1.0), 0.6, f"I - I_WKB = {_fmt(gap)}"))
    return checks


def suite_oracle(model, args):
    if not model.hermitian:
        raise ConfigError("--suite oracle needs a real potential")
    backend = _backend(args, model)
    levels = 6
    if model.variant == "sech-pair":
        levels = min(levels, len(models.sech_levels(model.params["lam"], model.sector)))
    spec = quantize.spectrum(model, levels, backend, lam=args.pinney)
    checks = []
    for e in spec:
        Eo = oracle.oracle_eigenvalue(model, e.n)
        checks.append(_check(f"|E_milne - E_oracle| n={e.n}", abs(e.E - Eo) / max(1.0, abs(Eo)), 1e-5))
        nodes = oracle.shoot(model, e.E).node_count
        checks.append(_check(f"node count n={e.n}", abs(nodes - e.n), 0.5, f"nodes = {nodes}"))
    return checks


SUITE_FUNCS = {
    "emp": suite_emp,
    "iik": suite_iik,
    "pt": suite_pt,
    "wronskian": suite_wronskian,
    "backends": suite_backends,
    "wkb": suite_wkb,
    "oracle": suite_oracle,
}


def run_verify(args):
    if args.suite not in SUITES:
        raise ConfigError(f"--suite: unknown suite '{args.suite}' (choose from {', '.join(SUITES)})")
    model = _build_model(args)
    try:
        checks = SUITE_FUNCS[args.suite](model, args)
    except (ConfigError, ParameterOutOfRange):
        raise
    except MilneError as exc:
        checks = [{"check": f"{args.suite} suite", "value": None, "limit": 0.0, "passed": False,
                   "detail": f"{type(exc).__name__}: {exc}"}]
    ok = all(c["passed"] for c in checks)
    if (args.format or "text") == "json":
        doc = {"suite": args.suite, "model": model.describe(), "passed": ok, "checks": checks}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        width = max(len(c["check"]) for c in checks)
        lines = [f"{'check':<{width}}  {'value':>12}  {'limit':>8}  result"]
        for c in checks:
            v = "nan" if c["value"] is None else f"{c['value']:.3e}"
            if c["limit"] is None:
                lines.append(f"{c['check']:<{width}}  {v:>12}  {'-':>8}  info")
            else:
                row = f"{c['check']:<{width}}  {v:>12}  {c['limit']:>8.0e}  {'PASS' if c['passed'] else 'FAIL'}"
                if not c["passed"] and c["detail"]:
                    row += f"  {c['detail']}"
                lines.append(row)
        lines.append(f"{args.suite}: {'all checks passed' if ok else 'FAILED'}")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------- compare

def run_compare(args):
    if args.levels < 1:
        raise ConfigError("--levels must be ≥ 1")
    model = _build_model(args)
    backend = _backend(args, model)
    rc = EXIT_OK
    try:
        spec = quantize.spectrum(model, args.levels, backend, lam=args.pinney, jobs=args.jobs)
    except BracketNotFound as exc:
        spec = getattr(exc, "partial", quantize.Spectrum([]))
        rc = EXIT_BRACKET
    rows = []
    for e in spec:
        Eo = wkb = math.nan
        if model.hermitian:
            try:
                Eo = oracle.oracle_eigenvalue(model, e.n)
            except MilneError:
                pass
            wkb = milne.wkb_integral(model, e.E)
        rows.append((e.n, e.E, Eo, wkb))
    if (args.format or "csv") == "json":
        doc = {"model": model.variant, "params": _params(model), "backend": backend,
               "rows": [{"n": n, "E_milne": _jnum(a), "E_oracle": _jnum(b), "I_wkb_at_E": _jnum(c)} for n, a, b, c in rows]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = "n,E_milne,E_oracle,I_wkb_at_E\n" + "".join(
            f"{n},{_fmt(a)},{_fmt(b)},{_fmt(c)}\n" for n, a, b, c in rows
        )
    _emit(args, text)
    return rc


COMMANDS = {"scan": run_scan, "spectrum": run_spectrum, "verify": run_verify, "compare": run_compare}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise ConfigError("a subcommand is required (scan, spectrum, verify, compare)")
        if getattr(args, "jobs", 1) < 1:
            raise ConfigError("--jobs must be ≥ 1")
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"milnequant: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterOutOfRange as exc:
        print(f"milnequant: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MilneError as exc:
        print(f"milnequant: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
