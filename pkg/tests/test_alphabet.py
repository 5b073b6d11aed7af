import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from coherent_receivers import SignalAlphabet, chefles_min_error, helstrom_error, overlap, usd_inconclusive
from coherent_receivers.alphabet import OperatingPoint
from coherent_receivers.exceptions import BeyondUSDWarning, DomainError

ALPHAS = np.linspace(0.01, 2.5, 60)

amplitudes = st.floats(min_value=1e-3, max_value=2.5, allow_nan=False)


def test_overlap_values():
    assert overlap(SignalAlphabet(0.0)) == 1.0
    # mpmath exp(-0.48), exp(-20)
    assert overlap(SignalAlphabet.from_mean_photons(0.24)) == pytest.approx(0.6187833918061408529, rel=1e-15)
    assert overlap(SignalAlphabet.from_mean_photons(10)) == pytest.approx(2.061153622438557828e-9, rel=1e-14)


def test_overlap_strictly_decreasing():
    s = [overlap(SignalAlphabet(a)) for a in ALPHAS]
    assert np.all(np.diff(s) < 0)


def test_helstrom_values():
    assert helstrom_error(SignalAlphabet(0.0)) == 0.5
    # mpmath: (1 - sqrt(1 - e^-0.96)) / 2
    assert helstrom_error(SignalAlphabet.from_mean_photons(0.24)) == pytest.approx(0.10721917243044818608, rel=1e-13)
    assert helstrom_error(SignalAlphabet(0.7, p1=1.0, p2=0.0)) == 0.0


def test_helstrom_against_mpmath_unequal_priors():
    mp.mp.dps = 30
    for a, p1 in [(0.3, 0.2), (0.8, 0.7), (1.3, 0.5)]:
        s = mp.e ** (-2 * mp.mpf(a) ** 2)
        want = (1 - mp.sqrt(1 - 4 * mp.mpf(p1) * (1 - mp.mpf(p1)) * s**2)) / 2
        got = helstrom_error(SignalAlphabet(a, p1, 1 - p1))
        assert got == pytest.approx(float(want), rel=1e-12)


def test_usd_inconclusive():
    assert usd_inconclusive(SignalAlphabet(0.0)) == 1.0
    assert usd_inconclusive(SignalAlphabet.from_mean_photons(0.24)) == pytest.approx(0.61878339180614085, rel=1e-15)
    assert usd_inconclusive(SignalAlphabet.from_mean_photons(1.0)) == pytest.approx(0.13533528323661269, rel=1e-15)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_chefles_endpoints(alpha):
    a = SignalAlphabet(alpha)
    s = overlap(a)
    assert chefles_min_error(a, 0.0) == pytest.approx(helstrom_error(a), abs=1e-12)
    # radicand at p_inc = sigma is (1 - sigma)^2, so the bound vanishes
    assert 1 - 2 * s * (1 - s) - s * s == pytest.approx((1 - s) ** 2, abs=1e-14)
    assert chefles_min_error(a, s) <= 1e-12


def test_chefles_zero_amplitude():
    assert chefles_min_error(SignalAlphabet(0.0), 0.0) == 0.5


@given(amplitudes)
def test_chefles_strictly_decreasing(alpha):
    a = SignalAlphabet(alpha)
    s = overlap(a)
    grid = np.linspace(0, s, 200, endpoint=False)
    vals = np.array([chefles_min_error(a, p) for p in grid])
    assert np.all(np.diff(vals) < 0)


def test_chefles_beyond_usd_clamps_and_warns():
    a = SignalAlphabet.from_mean_photons(1.0)
    with pytest.warns(BeyondUSDWarning):
        assert chefles_min_error(a, 0.5) == 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        chefles_min_error(a, overlap(a))


@pytest.mark.parametrize("p_inc", [-0.1, 1.5])
def test_chefles_domain(p_inc):
    with pytest.raises(DomainError):
        chefles_min_error(SignalAlphabet(0.5), p_inc)


def test_chefles_requires_equal_priors():
    with pytest.raises(DomainError):
        chefles_min_error(SignalAlphabet(0.5, 0.3, 0.7), 0.1)


@pytest.mark.parametrize("kwargs", [dict(alpha=-1.0), dict(alpha=0.5, p1=0.7, p2=0.7), dict(alpha=0.5, p1=1.2, p2=-0.2)])
def test_alphabet_validation(kwargs):
    with pytest.raises(DomainError):
        SignalAlphabet(**kwargs)


def test_operating_point_validation():
    OperatingPoint(0.1, 0.3)
    with pytest.raises(DomainError):
        OperatingPoint(0.1, 1.3)


def test_from_mean_photons_roundtrip():
    a = SignalAlphabet.from_mean_photons(0.47)
    assert a.alpha_sq == pytest.approx(0.47)
    assert math.isclose(a.attenuated(0.55).alpha_sq, 0.47 * 0.55)
