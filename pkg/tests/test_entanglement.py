import math

import numpy as np
import pytest
from scipy.optimize import brentq

from analogue_entanglement.bogoliubov import BogoliubovCoefficients, to_symplectic
from analogue_entanglement.entanglement import (
    avg_particle_number,
    entanglement_temperature,
    eof_from_nu,
    full_report,
    nats_to_bits,
    nu_minus,
    sudden_death_from_occupation,
    sudden_death_temperature,
    thermal_occupation,
)
from analogue_entanglement.errors import DomainError
from analogue_entanglement.gaussian_core import apply_symplectic, ppt_nu_minus, thermal_cm
from analogue_entanglement.quench import coefficients_from_frequencies

# 40-digit evaluations of c+ ln c+ - c- ln c-, c+- = (nu^-1/2 +- nu^1/2)^2 / 4
EOF_TABLE = [
    (0.5, 0.39243610782341087739),
    (0.1, 1.9196274081045169884),
    (0.9, 0.019131921211427681375),
    (1e-3, 6.5214612511956130999),
    (1.0 / 3.0, 0.74978019282507780038),
    (0.999999, 7.5043361235981395549e-12),
]

STANDARD = BogoliubovCoefficients(2 / math.sqrt(3), 1 / math.sqrt(3))


@pytest.mark.parametrize("nu, expected", EOF_TABLE)
def test_eof_reference_values(nu, expected):
    assert eof_from_nu(nu) == pytest.approx(expected, rel=1e-12)


def test_eof_edges():
    assert eof_from_nu(1.0) == 0.0
    assert eof_from_nu(3.0) == 0.0
    assert eof_from_nu(0.0) == math.inf
    with pytest.raises(DomainError):
        eof_from_nu(-0.1)
    with pytest.raises(DomainError):
        eof_from_nu(math.nan)
    assert nats_to_bits(math.log(2)) == pytest.approx(1.0)


def test_nu_minus_standard_quench_two_routes():
    assert nu_minus(STANDARD, 1.0, 0.0) == pytest.approx(1 / 3, rel=1e-14)
    for temperature in (0.0, 0.3, 2.0):
        gamma = apply_symplectic(to_symplectic(STANDARD), thermal_cm(1.0, temperature))
        assert nu_minus(STANDARD, 1.0, temperature) == pytest.approx(ppt_nu_minus(gamma), rel=1e-12)


def test_standard_temperatures():
    t_e = entanglement_temperature(1 / math.sqrt(3), 3.0)
    assert t_e == pytest.approx(3 / (2 * math.log(2)), rel=1e-14)
    assert sudden_death_temperature(1.0, 3.0, t_e) == pytest.approx(1 / math.log(2), rel=1e-14)
    assert entanglement_temperature(0.0, 3.0) == 0.0


def test_sudden_death_matches_numeric_root():
    # c_in=1, c_out=2, k=1.5, eps^2=0.3: frequencies and root from a 40-digit solve
    w_in, w_out = 1.9413268658317176856, 3.2432622465659479877
    coeffs = coefficients_from_frequencies(w_in, w_out)
    t_e = entanglement_temperature(abs(coeffs.beta), w_out)
    assert t_e == pytest.approx(1.1735314296846744121, rel=1e-12)
    t_sd = sudden_death_temperature(w_in, w_out, t_e)
    assert t_sd == pytest.approx(1.4048867585450364735, rel=1e-12)
    root = brentq(lambda t: nu_minus(coeffs, w_in, t) - 1.0, 0.1, 10.0, xtol=1e-15)
    assert t_sd == pytest.approx(root, rel=1e-10)


def test_thermal_occupation():
    assert thermal_occupation(1.0, 0.0) == 0.0
    assert thermal_occupation(1.0, 1e-4) == 0.0
    assert thermal_occupation(1.0, 1.0) == pytest.approx(1 / (math.e - 1), rel=1e-14)
    # high-temperature limit T/omega - 1/2
    assert thermal_occupation(1e-3, 10.0) == pytest.approx(1e4 - 0.5, rel=1e-8)


def test_avg_particle_number_reduces_to_bose_einstein():
    none = BogoliubovCoefficients(1.0, 0.0)
    assert avg_particle_number(none, 2.0, 2.0, 0.7) == pytest.approx(thermal_occupation(2.0, 0.7), rel=1e-14)
    assert avg_particle_number(STANDARD, 1.0, 3.0, 0.0) == pytest.approx(1 / 3, rel=1e-14)


def test_avg_particle_number_matches_covariance_matrix():
    temperature = 0.8
    gamma = apply_symplectic(to_symplectic(STANDARD), thermal_cm(1.0, temperature))
    # (tr A / 2 - 1) / 2 is the mean occupation of mode one
    from_cm = 0.5 * (0.5 * np.trace(gamma[:2, :2]) - 1.0)
    assert avg_particle_number(STANDARD, 1.0, 3.0, temperature) == pytest.approx(from_cm, rel=1e-12)


def test_full_report_standard():
    rep = full_report(STANDARD, 1.0, 3.0, 0.0)
    assert rep.entangled
    assert rep.eof_nats == pytest.approx(0.74978019282507780038, rel=1e-12)
    assert rep.t_sudden_death == pytest.approx(1 / math.log(2))


def test_inference_round_trip():
    temperature = 0.6
    n_avg = avg_particle_number(STANDARD, 1.0, 3.0, temperature)
    inf = sudden_death_from_occupation(n_avg, 1.0, 3.0, temperature)
    assert inf.beta_sq == pytest.approx(1 / 3, rel=1e-12)
    assert inf.t_sudden_death == pytest.approx(1 / math.log(2), rel=1e-12)
    assert inf.verdict == "entangled"
    hot = sudden_death_from_occupation(avg_particle_number(STANDARD, 1.0, 3.0, 2.0), 1.0, 3.0, 2.0)
    assert hot.verdict == "separable"


def test_inference_no_squeezing():
    temperature = 0.5
    inf = sudden_death_from_occupation(thermal_occupation(1.0, temperature), 1.0, 1.0, temperature)
    assert inf.beta_sq == 0.0 and inf.t_sudden_death == 0.0
    assert inf.verdict == "no entanglement possible"
    with pytest.raises(DomainError):
        sudden_death_from_occupation(-1.0, 1.0, 1.0, 0.0)
