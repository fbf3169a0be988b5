import math

import numpy as np
import pytest

from milnequant import models
from milnequant.errors import (
    AsymmetricGrid,
    ComplexBranch,
    LevelOutOfRange,
    NoClosedForm,
    ParameterOutOfRange,
    ZeroCrossing,
)
from milnequant.ode import integrate_fundamental_pair


class TestMakeModel:
    def test_swanson_valid(self):
        m = models.make_model("swanson", omega="1/2", alpha="1/8", beta="1/4")
        assert m.anchor == 0.0 and m.infinite

    def test_swanson_real_regime(self):
        with pytest.raises(ParameterOutOfRange, match="4 alpha beta"):
            models.make_model("swanson", omega=1, alpha=1, beta=1)

    def test_pt_pair_domain(self):
        m = models.make_model("pt-pair", kappa=2, lam=3, sector="-")
        assert m.domain == (0.0, np.pi / 2)
        assert m.anchor == pytest.approx(np.pi / 4)
        assert m.sector == "minus" and m.hermitian

    @pytest.mark.parametrize("kappa,lam", [(0.5, 3), (2, 0.4)])
    def test_pt_pair_integrability(self, kappa, lam):
        with pytest.raises(ParameterOutOfRange, match="> 1/2"):
            models.make_model("pt-pair", kappa=kappa, lam=lam)

    def test_sech_flags(self):
        assert models.make_model("sech-pair", lam=7.5).hermitian
        plus = models.make_model("sech-pair", lam=7.5, sector="plus")
        assert not plus.hermitian and plus.threshold == 0.25
        assert plus.partner().sector == "minus"

    def test_unknown_variant(self):
        with pytest.raises(ParameterOutOfRange, match="unknown model"):
            models.make_model("morse")

    def test_custom_table(self, tmp_path):
        x = np.linspace(-4, 4, 41)
        path = tmp_path / "v.txt"
        np.savetxt(path, np.column_stack([x, x**2]))
        m = models.make_model("custom", table=str(path))
        assert m.hermitian and not m.has_analytic
        assert m.potential(np.array([1.3])).real == pytest.approx(1.69, abs=1e-3)
        with pytest.raises(NoClosedForm):
            models.exact_energy(m, 0)
        np.savetxt(path, np.column_stack([x, x**2, 0.1 * x**3]))
        assert not models.make_model("custom", table=str(path)).hermitian


class TestSwansonMu:
    def test_hermitian_limit(self):
        w, a = 1.3, 0.2
        mp, mm = models.swanson_mu(w, a, a)
        assert mp == pytest.approx((w - 2 * a) / w, rel=1e-14)
        assert mm == pytest.approx((w + 2 * a) * w, rel=1e-14)

    def test_free_parameters_off(self):
        assert models.swanson_mu(0.7, 0.0, 0.0) == pytest.approx((1.0, 0.49), rel=1e-14)

    def test_set_one_product(self):
        mp, mm = models.swanson_mu(0.5, 0.125, 0.25, 0.0)
        assert mp * mm == pytest.approx(1 / 8, rel=1e-12)

    def test_product_identity_sweep(self):
        rng = np.random.default_rng(20240611)
        checked = 0
        while checked < 100:
            w = rng.uniform(0.2, 3.0)
            a, b = rng.uniform(0, w / 2, size=2)
            dl = rng.uniform(-1, 1)
            if w * w <= 4 * a * b:
                continue
            try:
                mp, mm = models.swanson_mu(w, a, b, dl)
            except (ComplexBranch, ParameterOutOfRange):
                continue
            assert abs(mp * mm - (w * w - 4 * a * b)) < 1e-12 * (w * w)
            checked += 1

    def test_negative_radicand(self):
        with pytest.raises(ComplexBranch):
            models.swanson_mu(1.0, 0.1, -0.05, 0.0)


class TestExactEnergy:
    def test_swanson(self):
        m = models.make_model("swanson", omega=1, alpha=0.5, beta=0.25)
        assert models.exact_energy(m, 0) == pytest.approx(1 / (2 * math.sqrt(2)), rel=1e-15)

    def test_pt(self):
        minus = models.make_model("pt-pair", kappa=2, lam=3)
        plus = models.make_model("pt-pair", kappa=2, lam=3, sector="plus")
        assert models.exact_energy(minus, 3) == 96
        assert [models.exact_energy(plus, n) for n in range(3)] == [24, 56, 96]

    def test_sech_minus(self):
        m = models.make_model("sech-pair", lam=7.5)
        assert [models.exact_energy(m, n) for n in range(7)] == [-(n - 6) * (n - 7) for n in range(7)]
        with pytest.raises(LevelOutOfRange):
            models.exact_energy(m, 7)

    def test_sech_plus_keeps_every_level(self):
        # L+ maps all seven states across; see tests/data/oracles.json for -42
        assert models.sech_levels(7.5, "plus") == [-42.0, -30.0, -20.0, -12.0, -6.0, -2.0, 0.0]

    def test_sech_plus_zero_mode(self):
        minus = models.sech_levels(3.2, "minus")
        plus = models.sech_levels(3.2, "plus")
        assert 0.0 not in minus and plus == sorted(minus + [0.0])


class TestWavevector:
    def test_sech_minus_center(self):
        lam, E = 7.5, -3.0
        f = models.local_wavevector(models.make_model("sech-pair", lam=lam), E)
        assert f.k2(np.array([0.0]))[0] == pytest.approx(E - 0.25 - lam + lam * lam)

    def test_sech_plus_tau_odd(self):
        f = models.local_wavevector(models.make_model("sech-pair", lam=7.5, sector="plus"), -10.0)
        x = np.linspace(-3, 3, 61)
        tau = f.tau(x)
        assert tau[30] == 0.0
        assert np.max(np.abs(tau + tau[::-1])) < 1e-14
        assert tau[40] == pytest.approx(-(2 * 7.5 - 1) / np.cosh(1.0) * np.tanh(1.0))

    def test_pt_quarter_pi(self):
        f = models.local_wavevector(models.make_model("pt-pair", kappa=2, lam=3), 5.0)
        assert f.k2(np.array([np.pi / 4]))[0] == pytest.approx(5.0 + 9.0, rel=1e-14)

    def test_swanson_units(self):
        m = models.make_model("swanson", omega=0.5, alpha=0.125, beta=0.25)
        mp, mm = models.swanson_mu(0.5, 0.125, 0.25)
        x = np.array([0.7])
        assert m.field(0.3).k2(x)[0] == pytest.approx((2 * 0.3 - mm * 0.49) / mp, rel=1e-14)


class TestSuperpotential:
    def test_constant_b(self):
        c = 0.8
        split, vm, vp = models.susy_from_b(lambda x: c + 0 * x)
        x = np.linspace(-2, 2, 9)
        assert np.allclose(split.a(x), 0, atol=1e-10)
        assert np.allclose(vm(x), -c * c, atol=1e-9) and np.allclose(vp(x), -c * c, atol=1e-9)

    def test_sech_reproduces_pair(self):
        lam = 7.5
        sech = models.make_model("sech-pair", lam=lam)
        U, dU, b = sech.superpotential()
        split, vm, vp = models.susy_from_b(b)
        x = np.linspace(-3, 3, 121)
        assert np.max(np.abs(split.U(x) - U(x))) < 1e-10
        assert np.max(np.abs(vm(x) - sech.potential(x))) < 1e-10
        assert np.max(np.abs(vp(x) - sech.partner().potential(x))) < 1e-10

    def test_random_b_identity(self):
        rng = np.random.default_rng(7)
        x = np.linspace(-2.5, 2.5, 101)
        for _ in range(20):
            amp, p, c = rng.uniform(0.3, 3), rng.uniform(0.3, 1.5), rng.uniform(-0.8, 0.8)
            b = lambda t: amp * (1 + c * np.tanh(t)) / np.cosh(p * t)
            split, vm, vp = models.susy_from_b(b, grid=x)
            u, du = split.U(x), split.dU(x)
            assert np.max(np.abs(vm(x) - (u * u - du))) < 1e-10
            assert np.max(np.abs(vp(x) - (u * u + du))) < 1e-10
            # a = (ln b)' / 2
            lb = lambda t: np.log(b(t))
            h = 1e-4
            assert np.max(np.abs(split.a(x) - (lb(x + h) - lb(x - h)) / (4 * h))) < 1e-7

    def test_zero_crossing(self):
        with pytest.raises(ZeroCrossing):
            models.susy_from_b(np.tanh, grid=np.linspace(-1, 1, 11))


class TestAnalyticFundamental:
    def test_pt_indicial(self):
        m = models.make_model("pt-pair", kappa=2, lam=3)
        x = 1e-4
        psi = models.analytic_fundamental(m, 24.0, x)[0]
        assert psi / x**2 == pytest.approx(1.0, rel=1e-6)

    def test_swanson_wronskian_constant(self):
        m = models.make_model("swanson", omega=0.5, alpha=0.125, beta=0.25)
        E = 1 / (4 * math.sqrt(2))
        x = np.array([0.5, 0.9, 1.3])
        p1, d1, p2, d2 = models.analytic_fundamental(m, E, x)
        w = p1 * d2 - d1 * p2
        assert np.max(np.abs(w - w[1])) < 1e-9 * abs(w[1])

    @pytest.mark.parametrize(
        "variant,params,E",
        [
            ("swanson", dict(omega=1.0, alpha=0.5, beta=0.25), 1.1),
            ("harmonic", dict(omega=1.0), 2.3),
            ("pt-pair", dict(kappa=2, lam=3), 24.0),
            ("pt-pair", dict(kappa=2, lam=3, sector="plus"), 40.0),
            ("sech-pair", dict(lam=7.5), -30.0),
            ("sech-pair", dict(lam=7.5, sector="plus"), -20.0),
        ],
    )
    def test_matches_numeric_pair(self, variant, params, E):
        m = models.make_model(variant, **params)
        rng = np.random.default_rng(3)
        lo, hi = (0.1, 1.45) if variant == "pt-pair" else (-2.0, 2.0)
        x = np.sort(rng.uniform(lo, hi, 10))
        ref = models.canonical_pair(m, E, x)
        grid = np.sort(np.append(x, m.anchor))
        keep = np.isin(grid, x)
        c1, d1, c2, d2 = (v[keep] for v in integrate_fundamental_pair(
            m.field(E), (lo, hi), m.anchor, tol=1e-12, grid=grid).unscaled())
        # the quantization pair is fixed by its data at the anchor
        f, df, g, dg = models.anchor_data(m, E)
        num = (f * c1 + df * c2, f * d1 + df * d2, g * c1 + dg * c2, g * d1 + dg * d2)
        for r, n in zip(ref, num):
            assert np.max(np.abs(r - n) / np.maximum(np.abs(r), 1e-3)) < 1e-7


class TestChecks:
    def test_pt_residual_examples(self):
        x = np.linspace(-2, 2, 41)
        sech_plus = models.make_model("sech-pair", lam=7.5, sector="plus")
        assert models.pt_residual(sech_plus.potential, x) < 1e-14
        assert models.pt_residual(lambda t: t + 0j, x) == pytest.approx(4.0)
        assert models.pt_residual(lambda t: 1j * t**3, x) == 0.0

    def test_pt_residual_asymmetric(self):
        with pytest.raises(AsymmetricGrid):
            models.pt_residual(lambda t: t, np.linspace(-1, 2, 7))

    def test_pt_action_on_superpotential(self):
        U, _, _ = models.make_model("sech-pair", lam=7.5).superpotential()
        x = np.linspace(-5, 5, 201)
        assert np.max(np.abs(np.conj(U(-x)) + U(x))) < 1e-14

    def test_iik_pt_shared_level(self):
        m = models.make_model("pt-pair", kappa=2, lam=3)
        r = models.iik_residuals(m, 24.0, np.linspace(0.2, 1.35, 60))
        assert set(r) == {"w_equal", "second_identity", "i2_identity", "im_derivative"}
        assert max(r.values()) < 1e-7
        assert r["im_derivative"] == 0.0

    def test_iik_sech(self):
        r = models.iik_residuals(models.make_model("sech-pair", lam=7.5), -30.0, np.linspace(-3, 3, 61))
        assert r["w_equal"] < 1e-8
        assert max(r.values()) < 1e-6

    def test_iik_needs_susy(self):
        with pytest.raises(ParameterOutOfRange):
            models.iik_residuals(models.make_model("harmonic"), 1.0, np.linspace(-1, 1, 5))
