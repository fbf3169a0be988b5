import math

import numpy as np
import pytest

from milnequant import models, oracle
from milnequant.errors import BracketNotFound, ParameterOutOfRange


@pytest.fixture(scope="module")
def harmonic():
    return models.make_model("harmonic")


def test_harmonic_ground_shot(harmonic):
    r = oracle.shoot(harmonic, 1.0)
    assert r.node_count == 0
    assert abs(r.log_mismatch) < 1e-8


def test_mismatch_changes_sign_across_a_level(harmonic):
    a = oracle.shoot(harmonic, 2.0, match_point=0.3).log_mismatch
    b = oracle.shoot(harmonic, 4.0, match_point=0.3).log_mismatch
    assert a * b < 0


def test_poschl_teller_level_shot():
    m = models.make_model("pt-pair", kappa=2, lam=3)
    assert abs(oracle.shoot(m, 24.0).log_mismatch) < 1e-6


@pytest.mark.parametrize(
    "variant,params,n,want,tol",
    [
        ("harmonic", {}, 4, 9.0, 1e-8),
        ("swanson", dict(omega=0.5, alpha=0.125, beta=0.25), 2, 5 / (4 * math.sqrt(2)), 1e-7),
        ("pt-pair", dict(kappa=2, lam=3), 5, 200.0, 1e-6),
        ("sech-pair", dict(lam=7.5), 0, -42.0, 1e-7),
        ("sech-pair", dict(lam=7.5), 3, -12.0, 1e-7),
    ],
)
def test_levels(variant, params, n, want, tol):
    m = models.make_model(variant, **params)
    assert abs(oracle.oracle_eigenvalue(m, n) - want) < tol


def test_node_count_is_monotone():
    m = models.make_model("pt-pair", kappa=2, lam=3)
    counts = [oracle.shoot(m, E).node_count for E in np.linspace(-5.0, 240.0, 50)]
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    assert counts[0] == 0 and counts[-1] == 6


@pytest.mark.parametrize("n", range(4))
def test_node_count_at_level(harmonic, n):
    assert oracle.shoot(harmonic, 2 * n + 1.0, match_point=0.37).node_count == n


def test_complex_models_rejected():
    m = models.make_model("sech-pair", lam=7.5, sector="plus")
    with pytest.raises(ParameterOutOfRange):
        oracle.shoot(m, -30.0)


def test_negative_index(harmonic):
    with pytest.raises(ParameterOutOfRange):
        oracle.oracle_eigenvalue(harmonic, -1)


def test_finite_spectrum_runs_out():
    with pytest.raises(BracketNotFound):
        oracle.oracle_eigenvalue(models.make_model("sech-pair", lam=7.5), 7)
