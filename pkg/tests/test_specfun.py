import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnequant import specfun
from milnequant.errors import ConnectionFormulaPole, PoleError


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestGauss:
    def test_zero_argument(self):
        assert specfun.gauss_2f1(0.3, -1.7, 2.2, 0.0) == 1.0

    def test_log_closed_form(self, oracles):
        v = specfun.gauss_2f1(1, 1, 2, 0.5)
        assert rel(v, 2 * math.log(2)) < 1e-14
        assert rel(v, oracles["hyp2f1(1,1,2,1/2)"]) < 1e-14

    def test_terminating_series(self, oracles):
        z = math.sin(0.3) ** 2
        v = specfun.gauss_2f1(-2, 7, 2.5, z)
        exact = 1 + (-2 * 7 / 2.5) * z + (-2 * -1 * 7 * 8) / (2.5 * 3.5 * 2) * z * z
        assert rel(v, exact) < 1e-15
        assert rel(v, oracles["hyp2f1(-2,7,5/2,sin^2 0.3)"]) < 1e-14

    def test_pole_in_c(self):
        with pytest.raises(PoleError):
            specfun.gauss_2f1(0.5, 0.5, -2.0, 0.3)

    def test_continuation_outside_disc(self):
        # 2F1(1,1;2;z) = -ln(1-z)/z holds on the principal branch
        for z in (-3.0, -0.95, 0.97):
            assert rel(specfun.gauss_2f1(1, 1, 2, z), -math.log(1 - z) / z) < 1e-12


@settings(max_examples=100, deadline=None, derandomize=True)
@given(
    a=st.floats(-3, 3),
    b=st.floats(-3, 3),
    c=st.floats(1.2, 4.5),
    z=st.floats(-0.9, 0.9),
)
def test_gauss_contiguous_relation(a, b, c, z):
    # c(c-1)(z-1) F(c-1) + c[c-1-(2c-a-b-1)z] F(c) + (c-a)(c-b) z F(c+1) = 0
    f = lambda cc: specfun.gauss_2f1(a, b, cc, z)
    t1 = c * (c - 1) * (z - 1) * f(c - 1)
    t2 = c * (c - 1 - (2 * c - a - b - 1) * z) * f(c)
    t3 = (c - a) * (c - b) * z * f(c + 1)
    scale = max(abs(t1), abs(t2), abs(t3), 1.0)
    assert abs(t1 + t2 + t3) / scale < 1e-9


class TestKummer:
    def test_zero_argument(self):
        assert specfun.kummer_m(0.7, 1.9, 0.0) == 1.0

    @pytest.mark.parametrize("z", [-4.0, 0.5, 12.0, 40.0])
    def test_exponential_identity(self, z):
        assert rel(specfun.kummer_m(1, 1, z), math.exp(z)) < 1e-12

    def test_oracle_value(self, oracles):
        assert rel(specfun.kummer_m(0.7, 1.9, 3.2), oracles["hyp1f1(0.7,1.9,3.2)"]) < 1e-12

    def test_pole(self):
        with pytest.raises(PoleError):
            specfun.kummer_m(0.5, -3.0, 1.0)

    def test_full_result(self):
        r = specfun.kummer_m(0.7, 1.9, 3.2, full=True)
        assert not r.accuracy_loss
        assert r.value == specfun.kummer_m(0.7, 1.9, 3.2)


class TestWhittaker:
    def test_small_z_leading_order(self):
        for kap, mu in ((0.3, -0.25), (1.5, 0.25)):
            z = 1e-8
            assert rel(specfun.whittaker_m(kap, mu, z) / z ** (mu + 0.5), 1.0) < 1e-7

    def test_m_quarter_bessel(self, oracles):
        assert rel(specfun.whittaker_m(0, 0.25, 1.0), oracles["whitm(0,1/4,1)"]) < 1e-12

    def test_m_oracle(self, oracles):
        assert rel(specfun.whittaker_m(1.5, -0.25, 0.8), oracles["whitm(1.5,-1/4,0.8)"]) < 1e-10

    def test_w_oracle(self, oracles):
        assert rel(specfun.whittaker_w(0.25, -0.25, 2.0), oracles["whitw(0.25,-0.25,2)"]) < 1e-10

    def test_w_large_z_asymptotic(self):
        kap, mu, z = 0.7, -0.25, 400.0
        lead = math.exp(-z / 2) * z**kap
        assert rel(specfun.whittaker_w(kap, mu, z) / lead, 1.0) < 2e-3

    @pytest.mark.parametrize("kap", [0.25, 1.5])
    def test_wronskian_constant(self, kap, oracles):
        # W{M, W} = -Gamma(1 + 2 mu) / Gamma(1/2 + mu - kappa), z-independent
        mu, h = -0.25, 1e-5
        exact = oracles[f"wronskian{{M,W}}({kap},-0.25)"]
        for z in (1.0, 2.0):
            m = specfun.whittaker_m(kap, mu, z)
            w = specfun.whittaker_w(kap, mu, z)
            dm = (specfun.whittaker_m(kap, mu, z + h) - specfun.whittaker_m(kap, mu, z - h)) / (2 * h)
            dw = (specfun.whittaker_w(kap, mu, z + h) - specfun.whittaker_w(kap, mu, z - h)) / (2 * h)
            assert abs((m * dw - dm * w) - exact) < 1e-8 * max(1.0, abs(exact))

    def test_integer_two_mu_rejected(self):
        with pytest.raises(ConnectionFormulaPole):
            specfun.whittaker_w(0.3, 0.5, 1.0)

    def test_m_pole(self):
        with pytest.raises(PoleError):
            specfun.whittaker_m(0.3, -1.0, 1.0)


def test_gamma_helpers():
    assert rel(specfun.gamma(5), 24.0) < 1e-14
    assert specfun.rgamma(-3) == 0
    with pytest.raises(PoleError):
        specfun.gamma(0)
    assert rel(specfun.gamma(0.5), math.sqrt(math.pi)) < 1e-14
    assert np.isclose(specfun.gamma(1 + 1j) * specfun.rgamma(1 + 1j), 1.0)
