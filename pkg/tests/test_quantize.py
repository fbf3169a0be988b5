import math

import numpy as np
import pytest

from milnequant import models, quantize
from milnequant.errors import InvalidBracket, ParameterOutOfRange

SW1 = dict(omega=0.5, alpha=0.125, beta=0.25)


@pytest.fixture(scope="module")
def sech_minus_spectrum():
    return quantize.spectrum(models.make_model("sech-pair", lam=7.5), 10, backend="numeric")


@pytest.fixture(scope="module")
def pt_spectra():
    m = models.make_model("pt-pair", kappa=2, lam=3)
    return (
        quantize.spectrum(m, 9, backend="numeric"),
        quantize.spectrum(m.partner(), 8, backend="numeric"),
    )


class TestScan:
    def test_two_steps_are_the_endpoints(self):
        scan = quantize.scan_energy_integral(models.make_model("harmonic"), 1.0, 3.0, 2)
        assert [s.E for s in scan] == [1.0, 3.0]
        assert abs(scan[0].I - 1) < 1e-8 and abs(scan[1].I - 2) < 1e-8

    def test_too_few_steps(self):
        with pytest.raises(ParameterOutOfRange):
            quantize.scan_energy_integral(models.make_model("harmonic"), 1.0, 3.0, 1)

    def test_empty_interval(self):
        with pytest.raises(ParameterOutOfRange):
            quantize.scan_energy_integral(models.make_model("harmonic"), 3.0, 3.0, 5)

    def test_swanson_curve(self):
        scan = quantize.scan_energy_integral(models.make_model("swanson", **SW1), 0.0, 1.4, 57, backend="numeric")
        assert not scan.errors and scan.monotone
        E = np.array([s.E for s in scan])
        I = np.array([s.I for s in scan])
        assert abs(np.interp(1 / (4 * math.sqrt(2)), E, I) - 1) < 0.02

    def test_sech_plus_is_real(self):
        m = models.make_model("sech-pair", lam=7.5, sector="plus")
        scan = quantize.scan_energy_integral(m, -45.0, 0.2, 91)
        assert not scan.errors
        assert max(s.im_residual for s in scan) < 1e-6
        assert scan.monotone

    def test_failures_are_recorded_in_line(self):
        # the intertwined pair divides by sqrt(E)
        m = models.make_model("sech-pair", lam=7.5, sector="plus")
        scan = quantize.scan_energy_integral(m, -2.0, 0.0, 3)
        assert scan[0].ok and scan[1].ok
        assert "ZeroEnergy" in scan[2].error and math.isnan(scan[2].I)
        assert scan.errors == [scan[2]]

    def test_jobs_do_not_change_values(self):
        m = models.make_model("pt-pair", kappa=2, lam=3)
        a = quantize.scan_energy_integral(m, 1.0, 120.0, 9, backend="numeric", jobs=1)
        b = quantize.scan_energy_integral(m, 1.0, 120.0, 9, backend="numeric", jobs=3)
        assert [s.I for s in a] == [s.I for s in b]


class TestSolveLevel:
    def test_swanson_ground(self):
        m = models.make_model("swanson", **SW1)
        e = quantize.solve_level(m, 0, 0.05, 0.5)
        assert abs(e.E - 1 / (4 * math.sqrt(2))) < 1e-8
        assert e.bracket[0] <= e.E <= e.bracket[1]
        assert abs(e.I_at_E - 1) < 1e-6

    def test_poschl_teller_plus_ground(self):
        m = models.make_model("pt-pair", kappa=2, lam=3, sector="plus")
        assert abs(quantize.solve_level(m, 0, 10.0, 40.0).E - 24) < 1e-7

    def test_sech_minus_top(self):
        m = models.make_model("sech-pair", lam=7.5)
        assert abs(quantize.solve_level(m, 6, -1.0, 0.5).E) < 1e-6

    def test_rejects_bad_bracket(self):
        with pytest.raises(InvalidBracket):
            quantize.solve_level(models.make_model("harmonic"), 0, 2.0, 2.5)

    def test_rejects_bad_tol(self):
        with pytest.raises(ParameterOutOfRange):
            quantize.solve_level(models.make_model("harmonic"), 0, 0.5, 2.0, tol=0)


class TestSpectrum:
    def test_swanson(self):
        spec = quantize.spectrum(models.make_model("swanson", omega=1, alpha=0.5, beta=0.25), 6, backend="numeric")
        want = [(n + 0.5) / math.sqrt(2) for n in range(6)]
        assert [e.n for e in spec] == list(range(6))
        assert np.allclose([e.E for e in spec], want, rtol=1e-8, atol=0)

    def test_sech_minus_runs_out(self, sech_minus_spectrum):
        spec = sech_minus_spectrum
        assert spec.exhausted and spec.count == 7
        assert "7 level(s)" in spec.notice
        assert np.allclose([e.E for e in spec], [-42, -30, -20, -12, -6, -2, 0], rtol=0, atol=1e-6)

    def test_poschl_teller_nine(self, pt_spectra):
        minus, _ = pt_spectra
        want = [4 * n * (n + 5) for n in range(9)]
        assert np.allclose([e.E for e in minus], want, rtol=1e-8, atol=1e-8)

    def test_poschl_teller_isospectral(self, pt_spectra):
        minus, plus = pt_spectra
        assert np.allclose([e.E for e in plus], [e.E for e in minus][1:], rtol=1e-6, atol=0)

    def test_sech_plus_keeps_the_ground_level(self, sech_minus_spectrum):
        # V+ has a normalisable state at -42 too, so no level is dropped
        plus = quantize.spectrum(models.make_model("sech-pair", lam=7.5, sector="plus"), 10, backend="numeric")
        assert plus.count == 7
        assert np.allclose([e.E for e in plus], [e.E for e in sech_minus_spectrum], rtol=0, atol=1e-6)

    def test_backends_agree(self):
        m = models.make_model("swanson", **SW1)
        a = quantize.spectrum(m, 3, backend="analytic")
        b = quantize.spectrum(m, 3, backend="numeric")
        for x, y in zip(a, b):
            assert abs(x.E - y.E) < 1e-6 * abs(x.E)

    def test_levels_must_be_positive(self):
        with pytest.raises(ParameterOutOfRange):
            quantize.spectrum(models.make_model("harmonic"), 0)
