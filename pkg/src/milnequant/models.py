"""Model registry: Swanson, Poeschl-Teller and sech SUSY pairs, custom tables.

Units: psi'' + k^2 psi = 0 with k^2 = g (E - V), g = 1 except for the
Swanson counterpart h = mu_+ p^2 / 2 + mu_- x^2 / 2, where g = 2 / mu_+.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import specfun
from .errors import (
    AsymmetricGrid,
    BranchPoint,
    ComplexBranch,
    DegenerateDenominator,
    LevelOutOfRange,
    NoClosedForm,
    ParameterOutOfRange,
    ZeroCrossing,
    ZeroEnergy,
)
from .fields import TableData, WaveNumberField
from .kernels import basis as _kb
from .kernels import fields as _kf

__all__ = [
    "ModelSpec",
    "SuperpotentialSplit",
    "make_model",
    "load_table",
    "swanson_mu",
    "exact_energy",
    "sech_levels",
    "local_wavevector",
    "susy_from_b",
    "analytic_fundamental",
    "anchor_data",
    "canonical_coefficients",
    "canonical_pair",
    "swanson_whittaker_pair",
    "pt_residual",
    "iik_residuals",
]

PT_INSET = 1e-8
GUARD = 40.0
VARIANTS = ("swanson", "harmonic", "pt-pair", "sech-pair", "custom")


@dataclass(frozen=True)
class ModelSpec:
    """Validated, immutable model description."""

    variant: str
    params: dict
    kind: int
    p: np.ndarray
    domain: tuple
    anchor: float
    sector: Optional[str] = None
    hermitian: bool = True
    table: TableData = field(default_factory=TableData.empty)

    @property
    def g(self):
        return self.p[_kf.NPARAMS - 1].real

    @property
    def infinite(self):
        return not (np.isfinite(self.domain[0]) and np.isfinite(self.domain[1]))

    @property
    def work_domain(self):
        """Finite interval used by the integrators and the quadrature."""
        lo, hi = self.domain
        if self.variant == "pt-pair":
            return (lo + PT_INSET, hi - PT_INSET)
        return (max(lo, -GUARD), min(hi, GUARD))

    @property
    def threshold(self):
        """Continuum threshold lim V(x) at |x| -> inf, or None if confining."""
        if self.variant == "sech-pair":
            return 0.25
        return None

    @property
    def has_analytic(self):
        return self.variant != "custom"

    @property
    def susy(self):
        return self.variant in ("pt-pair", "sech-pair")

    def field(self, E):
        return WaveNumberField(self.kind, self.p, float(E), self.table)

    def potential(self, x):
        return self.field(0.0).potential(x)

    def partner(self):
        if not self.susy:
            raise ParameterOutOfRange(f"{self.variant} has no SUSY partner")
        other = "plus" if self.sector == "minus" else "minus"
        return make_model(self.variant, **{**self.params, "sector": other})

    def superpotential(self):
        """(U, U', b) callables of the SUSY pair."""
        if self.variant == "pt-pair":
            kap = self.params["kappa"]
            lam = self.params["lam"]
            U = lambda x: lam * np.tan(x) - kap / np.tan(x) + 0j
            dU = lambda x: lam / np.cos(x) ** 2 + kap / np.sin(x) ** 2 + 0j
            b = lambda x: np.zeros_like(np.asarray(x, dtype=float))
            return U, dU, b
        if self.variant == "sech-pair":
            lam = self.params["lam"]
            U = lambda x: _sech_U(lam, x)[0]
            dU = lambda x: _sech_U(lam, x)[1]
            b = lambda x: 0.5 * (1.0 - 2.0 * lam) / np.cosh(x)
            return U, dU, b
        raise ParameterOutOfRange(f"{self.variant} has no superpotential")

    def describe(self):
        parts = [f"{k}={_fmt(v)}" for k, v in self.params.items() if k not in ("x", "v")]
        return f"{self.variant}({', '.join(parts)})"


def _fmt(v):
    return f"{v:g}" if isinstance(v, float) else str(v)


def _sech_U(lam, x):
    x = np.asarray(x, dtype=float)
    sech = 1.0 / np.cosh(x)
    th = np.tanh(x)
    u = -0.5 * th + 0.5j * (1.0 - 2.0 * lam) * sech
    du = -0.5 * sech**2 - 0.5j * (1.0 - 2.0 * lam) * sech * th
    return u, du


def _num(v):
    if isinstance(v, str):
        return float(Fraction(v))
    return float(v)


def swanson_mu(omega, alpha, beta, dyson_lambda=0.0):
    """Coefficients (mu_+, mu_-) of the Hermitian counterpart of the Swanson model."""
    w, a, b, lam = map(float, (omega, alpha, beta, dyson_lambda))
    if 1.0 + lam == 0 or 1.0 - lam == 0:
        raise DegenerateDenominator(f"1 +- lambda vanishes at lambda={lam:g}")
    if w == 0:
        raise DegenerateDenominator("omega = 0")
    den = a + b - lam * w
    # den * sqrt(1 - (1 - lam^2)(a - b)^2 / den^2), regular at den = 0
    q = den * den - (1.0 - lam * lam) * (a - b) ** 2
    if q < 0:
        raise ComplexBranch(f"square-root argument {q / den**2 if den else -np.inf:.3g} < 0")
    droot = np.copysign(np.sqrt(q), den)
    mu_p = (-lam * (a + b) + w - droot) / ((1.0 + lam) * w)
    mu_m = (-lam * (a + b) + w + droot) / ((1.0 - lam) / w)
    return mu_p, mu_m


def load_table(path):
    """Read a whitespace or comma separated table: x, Re V[, Im V]."""
    data = np.loadtxt(path, delimiter=None if not str(path).endswith(".csv") else ",", ndmin=2)
    if data.shape[1] not in (2, 3):
        raise ParameterOutOfRange("table needs two or three columns: x, Re V[, Im V]")
    v = data[:, 1].astype(complex)
    if data.shape[1] == 3:
        v = v + 1j * data[:, 2]
    return data[:, 0], v


def make_model(variant, **params):
    """Build a :class:`ModelSpec`.

    Parameters by variant (rational strings such as ``"15/2"`` accepted):

    * ``swanson``: omega, alpha, beta, dyson_lambda=0
    * ``harmonic``: omega=1 (V = omega^2 x^2)
    * ``pt-pair``: kappa, lam, sector in {"minus", "plus"}
    * ``sech-pair``: lam, sector
    * ``custom``: x, v (arrays), or table=path
    """
    if variant not in VARIANTS:
        raise ParameterOutOfRange(f"unknown model '{variant}' (choose from {', '.join(VARIANTS)})")
    inf = (-np.inf, np.inf)
    if variant == "swanson":
        w = _num(params.get("omega", 1.0))
        a = _num(params.get("alpha", 0.0))
        b = _num(params.get("beta", 0.0))
        dl = _num(params.get("dyson_lambda", 0.0))
        if not -1.0 <= dl <= 1.0:
            raise ParameterOutOfRange("dyson_lambda must lie in [-1, 1]")
        if w * w <= 4 * a * b:
            raise ParameterOutOfRange(f"omega^2 > 4 alpha beta violated ({w * w:g} <= {4 * a * b:g})")
        mp, mm = swanson_mu(w, a, b, dl)
        if mp <= 0 or mm <= 0:
            raise ParameterOutOfRange(f"mu_+ = {mp:g}, mu_- = {mm:g} must both be positive")
        p = _params([mp, mm, 0.0], 2.0 / mp)
        return ModelSpec("swanson", dict(omega=w, alpha=a, beta=b, dyson_lambda=dl), _kf.SWANSON, p, inf, 0.0)
    if variant == "harmonic":
        w = _num(params.get("omega", 1.0))
        if w <= 0:
            raise ParameterOutOfRange("omega > 0 required")
        return ModelSpec("harmonic", dict(omega=w), _kf.HARMONIC, _params([w * w]), inf, 0.0)
    if variant == "pt-pair":
        kap = _num(params.get("kappa", 2.0))
        lam = _num(params.get("lam", 3.0))
        sector = _sector(params.get("sector", "minus"))
        if kap <= 0.5:
            raise ParameterOutOfRange(f"kappa > 1/2 violated (kappa={kap:g})")
        if lam <= 0.5:
            raise ParameterOutOfRange(f"lambda > 1/2 violated (lambda={lam:g})")
        kind = _kf.PT_MINUS if sector == "minus" else _kf.PT_PLUS
        return ModelSpec(
            "pt-pair", dict(kappa=kap, lam=lam, sector=sector), kind, _params([kap, lam]),
            (0.0, np.pi / 2), np.pi / 4, sector,
        )
    if variant == "sech-pair":
        lam = _num(params.get("lam", 7.5))
        sector = _sector(params.get("sector", "minus"))
        kind = _kf.SECH_MINUS if sector == "minus" else _kf.SECH_PLUS
        herm = sector == "minus" or lam == 0.5
        return ModelSpec("sech-pair", dict(lam=lam, sector=sector), kind, _params([lam]), inf, 0.0, sector, herm)
    # custom
    if "table" in params:
        x, v = load_table(params["table"])
    else:
        x = np.asarray(params["x"], dtype=float)
        v = np.asarray(params["v"], dtype=complex)
    return _custom(x, v)


def _params(values, g=1.0):
    p = np.zeros(_kf.NPARAMS, dtype=np.complex128)
    p[: len(values)] = values
    p[_kf.NPARAMS - 1] = g
    return p


def _sector(s):
    s = str(s).lower()
    aliases = {"-": "minus", "minus": "minus", "+": "plus", "plus": "plus"}
    if s not in aliases:
        raise ParameterOutOfRange(f"sector must be minus or plus, got '{s}'")
    return aliases[s]


def _custom(x, v):
    from scipy.interpolate import CubicSpline

    if x.ndim != 1 or len(x) < 4 or len(x) != len(v):
        raise ParameterOutOfRange("custom table needs at least 4 matching x, V samples")
    order = np.argsort(x)
    x, v = x[order], v[order]
    if np.any(np.diff(x) <= 0):
        raise ParameterOutOfRange("custom table x values must be distinct")
    cs = CubicSpline(x, v)
    table = TableData(np.ascontiguousarray(cs.x, dtype=float), np.ascontiguousarray(cs.c, dtype=np.complex128))
    anchor = float(x[np.argmin(v.real)])
    herm = bool(np.all(v.imag == 0))
    return ModelSpec(
        "custom", dict(x=x, v=v), _kf.TABULATED, _params([]), (float(x[0]), float(x[-1])), anchor, None, herm, table
    )


def local_wavevector(model: ModelSpec, E) -> WaveNumberField:
    return model.field(E)


def sech_level_count(lam):
    s = abs(lam - 0.5) - 0.5
    return max(0, int(np.ceil(s))) if s > 0 else 0


def sech_levels(lam, sector):
    """Bound-state energies of the sech pair, ascending.

    L+ carries every level of V- over to V+ (its kernel cosh^(1/2) is not
    normalisable), and V+ = L+ L- also holds exp(int U) ~ cosh^(-1/2) at E = 0.
    """
    s = abs(lam - 0.5) - 0.5
    out = [0.25 - (s - m) ** 2 for m in range(sech_level_count(lam))]
    if sector == "plus" and not any(abs(e) < 1e-12 for e in out):
        out = sorted(out + [0.0])
    return out


def exact_energy(model: ModelSpec, n: int):
    """Closed-form level E_n (n = 0, 1, ...)."""
    if n < 0:
        raise LevelOutOfRange("n must be >= 0")
    pr = model.params
    if model.variant == "swanson":
        return (n + 0.5) * np.sqrt(pr["omega"] ** 2 - 4 * pr["alpha"] * pr["beta"])
    if model.variant == "harmonic":
        return (2 * n + 1) * pr["omega"]
    if model.variant == "pt-pair":
        m = n + (1 if model.sector == "plus" else 0)
        s = pr["kappa"] + pr["lam"]
        return (s + 2 * m) ** 2 - s * s
    if model.variant == "sech-pair":
        levels = sech_levels(pr["lam"], model.sector)
        if n >= len(levels):
            raise LevelOutOfRange(f"{model.describe()} has no level n={n}")
        return levels[n]
    raise NoClosedForm("tabulated potentials have no closed-form spectrum")


# ---------------------------------------------------------------- closed forms

def analytic_fundamental(model: ModelSpec, E, x):
    """Closed-form basis (psi1, psi1', psi2, psi2') at the points ``x``.

    Swanson/harmonic: even and odd Kummer solutions normalised at x = 0.
    Poeschl-Teller: the sin^a cos^b 2F1 solutions.  Sech pair: the 2F1
    solutions, sector + through the partner formulas (E != 0).
    """
    if not model.has_analytic:
        raise NoClosedForm("no closed-form solutions for tabulated potentials")
    if model.variant == "sech-pair" and model.sector == "plus" and E == 0:
        raise ZeroEnergy("sector + solutions divide by sqrt(E)")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if model.variant == "pt-pair" and (np.any(xs <= 0) or np.any(xs >= np.pi / 2)):
        raise BranchPoint("Poeschl-Teller solutions are evaluated strictly inside (0, pi/2)")
    out, st = _kb.basis_array(model.kind, model.p, float(E), xs)
    if st not in (0, 3):
        raise specfun.NonConvergence(f"closed-form basis failed (status {st}) at E={E:g}")
    cols = tuple(out[:, i] for i in range(4))
    if np.ndim(x) == 0:
        return tuple(c[0] for c in cols)
    return cols


def anchor_data(model: ModelSpec, E, lam=1.0):
    """(phi1, phi1', phi2, phi2') of the quantization pair at the anchor.

    Normally the orthogonal data sqrt(lam) (1, 0, 0, 1): W = lam and the
    Milne amplitude starts at rho(x0) = sqrt(lam), which makes I(E) exactly
    lam-independent.  The complex partner of a SUSY pair instead takes the
    images (d/dx + U) phi / sqrt(E) of the partner's real anchored pair; W
    stays lam, and the raw integral then differs from the partner's by an
    integer at every E.
    """
    s = np.sqrt(lam)
    if not (model.susy and model.sector == "plus" and not model.hermitian):
        return np.array([s, 0.0, 0.0, s], dtype=complex)
    if E == 0:
        raise ZeroEnergy("sector + solutions divide by sqrt(E)")
    x0 = np.array([model.anchor])
    U, dU, _ = model.superpotential()
    u, du = U(x0)[0], dU(x0)[0]
    k2 = model.partner().field(E).k2(model.anchor)
    r = np.sqrt(complex(E))
    return s * np.array([u, du - k2, 1.0, u], dtype=complex) / r


def canonical_coefficients(model: ModelSpec, E, lam=1.0):
    """2x2 matrix C with phi_j = C[0, j] psi1 + C[1, j] psi2 matching
    :func:`anchor_data` at x0."""
    p1, d1, p2, d2 = analytic_fundamental(model, E, model.anchor)
    B = np.array([[p1, p2], [d1, d2]], dtype=complex)
    a = anchor_data(model, E, lam)
    T = np.array([[a[0], a[2]], [a[1], a[3]]], dtype=complex)
    return np.linalg.solve(B, T)


def canonical_pair(model: ModelSpec, E, x, lam=1.0):
    """Anchored pair (phi1, phi1', phi2, phi2') built from the closed forms."""
    C = canonical_coefficients(model, E, lam)
    p1, d1, p2, d2 = analytic_fundamental(model, E, x)
    return (
        C[0, 0] * p1 + C[1, 0] * p2,
        C[0, 0] * d1 + C[1, 0] * d2,
        C[0, 1] * p1 + C[1, 1] * p2,
        C[0, 1] * d1 + C[1, 1] * d2,
    )


def swanson_whittaker_pair(model: ModelSpec, E, x, branch="continued"):
    """The Whittaker M/W pair x^{-1/2} M_{k,-1/4}(c x^2), x^{-1/2} W_{k,-1/4}(c x^2).

    For x < 0, ``branch="literal"`` evaluates i/sqrt(x) F(c x^2) with the
    principal root, which makes the W solution kinked at the origin;
    ``"continued"`` uses the analytic continuation through x = 0.
    Returns (psi1, psi2).
    """
    if model.variant != "swanson":
        raise ParameterOutOfRange("Whittaker pair is defined for the Swanson model")
    mp, mm = model.p[0].real, model.p[1].real
    c = np.sqrt(mm / mp)
    kap = E / (2.0 * np.sqrt(mp * mm))
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs == 0):
        raise BranchPoint("x = 0 is the branch point of x^{-1/2}")
    psi1 = np.empty(len(xs), dtype=complex)
    psi2 = np.empty(len(xs), dtype=complex)
    A = specfun.gamma(0.5) * specfun.rgamma(0.75 - kap)
    Bc = specfun.gamma(-0.5) * specfun.rgamma(0.25 - kap)
    for i, xv in enumerate(xs):
        z = c * xv * xv
        m_val = specfun.whittaker_m(kap, -0.25, z)
        if xv > 0 or branch == "literal":
            w_val = specfun.whittaker_w(kap, -0.25, z)
            pref = 1.0 / np.sqrt(xv) if xv > 0 else 1j / np.sqrt(complex(xv))
            psi1[i] = pref * m_val
            psi2[i] = pref * w_val
        else:
            # W = A M_{k,-1/4} + B M_{k,1/4}; x^{-1/2} M_{k,1/4}(c x^2) is odd in x
            pref = 1j / np.sqrt(complex(xv))
            psi1[i] = pref * m_val
            m_odd = specfun.whittaker_m(kap, 0.25, z) / np.sqrt(abs(xv))
            psi2[i] = A * psi1[i] - Bc * m_odd
    if np.ndim(x) == 0:
        return psi1[0], psi2[0]
    return psi1, psi2


# ---------------------------------------------------------------- SUSY checks

@dataclass(frozen=True)
class SuperpotentialSplit:
    """U = a + i b with a = (ln b)' / 2."""

    b: Callable
    db: Callable
    ddb: Callable

    def a(self, x):
        return 0.5 * self.db(x) / self.b(x)

    def da(self, x):
        bx = self.b(x)
        return 0.5 * (self.ddb(x) / bx - (self.db(x) / bx) ** 2)

    def U(self, x):
        return self.a(x) + 1j * self.b(x)

    def dU(self, x):
        return self.da(x) + 1j * self.db(x)


def _fd1(f, h=3e-3):
    return lambda x: (
        -f(x - 3 * h) + 9 * f(x - 2 * h) - 45 * f(x - h) + 45 * f(x + h) - 9 * f(x + 2 * h) + f(x + 3 * h)
    ) / (60 * h)


def _fd2(f, h=1e-2):
    # sixth order; the wider step keeps roundoff in 1/h^2 near 1e-12
    return lambda x: (
        2 * f(x - 3 * h) - 27 * f(x - 2 * h) + 270 * f(x - h) - 490 * f(x)
        + 270 * f(x + h) - 27 * f(x + 2 * h) + 2 * f(x + 3 * h)
    ) / (180 * h * h)


def susy_from_b(b, db=None, ddb=None, grid=None):
    """Superpotential split and partner potentials generated by b(x).

    Returns (split, V_minus, V_plus) with
    V_- = 3b'^2/(4b^2) - b''/(2b) - b^2 and
    V_+ = b''/(2b) - b'^2/(4b^2) - b^2 + 2i b'.
    Derivatives default to sixth-order finite differences.
    """
    db = db or _fd1(b)
    ddb = ddb or _fd2(b)
    if grid is not None:
        bv = np.asarray(b(np.asarray(grid, dtype=float)), dtype=float)
        if np.any(bv == 0) or np.any(np.sign(bv[1:]) != np.sign(bv[:-1])):
            raise ZeroCrossing("b(x) vanishes on the grid")
    split = SuperpotentialSplit(b, db, ddb)

    def v_minus(x):
        bx, d1, d2 = b(x), db(x), ddb(x)
        return 0.75 * d1**2 / bx**2 - 0.5 * d2 / bx - bx**2 + 0j

    def v_plus(x):
        bx, d1, d2 = b(x), db(x), ddb(x)
        return 0.5 * d2 / bx - 0.25 * d1**2 / bx**2 - bx**2 + 2j * d1

    return split, v_minus, v_plus


def pt_residual(V, grid):
    """max |conj(V(-x)) - V(x)| over a grid symmetric about 0."""
    x = np.asarray(grid, dtype=float)
    scale = max(1.0, float(np.max(np.abs(x))))
    if not np.allclose(x, -x[::-1], rtol=0, atol=1e-12 * scale):
        raise AsymmetricGrid("grid is not symmetric about 0")
    return float(np.max(np.abs(np.conj(V(-x)) - V(x))))


def iik_residuals(model: ModelSpec, E, grid, lam=1.0):
    """Ioffe-Korsch type identities between the two sectors of a SUSY pair.

    The sector - pair (psi, chi) is anchored as in :func:`canonical_pair`;
    the + pair is its image under L_+ = d/dx + U.  With sigma = rho_-^2
    and S = E rho_+^2 = (L_+ psi)^2 + (L_+ chi)^2 the residuals are

    * ``w_equal``:          |W_+ - W_-| / |W_-|
    * ``second_identity``:  S - (L_+ rho_-)^2 - W_-^2 / sigma
    * ``i2_identity``:      S - U^2 sigma - U sigma' - psi'^2 - chi'^2
    * ``im_derivative``:    Im S - (b sigma)'

    each relative to max |S| on the grid.  Returned as a dict.
    """
    if not model.susy:
        raise ParameterOutOfRange("identities need a SUSY pair model")
    if E == 0:
        raise ZeroEnergy("the partner pair is L_+ psi / sqrt(E)")
    minus = model if model.sector == "minus" else model.partner()
    x = np.asarray(grid, dtype=float)
    psi, dpsi, chi, dchi = canonical_pair(minus, E, x, lam)
    w_minus = psi * dchi - dpsi * chi
    U, dU, b = minus.superpotential()
    u, du = U(x), dU(x)
    k2 = minus.field(E).k2(x)
    # L_+ f and its derivative, f'' = -k^2 f
    lp = dpsi + u * psi
    lc = dchi + u * chi
    dlp = -k2 * psi + du * psi + u * dpsi
    dlc = -k2 * chi + du * chi + u * dchi
    w_plus = (lp * dlc - dlp * lc) / E
    sigma = psi**2 + chi**2
    dsigma = 2.0 * (psi * dpsi + chi * dchi)
    S = lp**2 + lc**2
    scale = float(np.max(np.abs(S)))
    wm = w_minus[len(x) // 2]
    lrho_sq = dsigma**2 / (4.0 * sigma) + u * dsigma + u**2 * sigma
    second = S - lrho_sq - wm**2 / sigma
    i2 = S - u**2 * sigma - u * dsigma - dpsi**2 - dchi**2
    bx = b(x)
    if minus.variant == "sech-pair":
        db = -0.5 * (1.0 - 2.0 * minus.params["lam"]) * np.tanh(x) / np.cosh(x)
    else:
        db = np.zeros_like(x)
    # sigma is real for the Hermitian sector at real E
    im_der = S.imag - (db * sigma + bx * dsigma).real
    return {
        "w_equal": float(np.max(np.abs(w_plus - w_minus)) / abs(wm)),
        "second_identity": float(np.max(np.abs(second)) / scale),
        "i2_identity": float(np.max(np.abs(i2)) / scale),
        "im_derivative": float(np.max(np.abs(im_der)) / scale),
    }
