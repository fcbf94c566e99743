import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
import hypothesis.strategies as st

from necrosim import specfun
from necrosim.specfun import (
    BesselDomainError,
    BesselRangeError,
    bessel_i,
    bessel_i_prime,
    bessel_i_scaled,
    bessel_k,
    bessel_k_prime,
    bessel_k_scaled,
    log_bessel_i,
    log_bessel_k,
)

X = np.logspace(-3, np.log10(700), 400)
CONTRACT_X = np.logspace(-2, np.log10(50), 200)


@pytest.mark.parametrize("m", [0, 1, 2, 5, 10, 20])
def test_i_matches_scipy(m):
    ref = sp.ive(m, X)
    mask = ref > 1e-300
    assert np.max(np.abs(bessel_i_scaled(m, X[mask]) / ref[mask] - 1)) < 1e-12


@pytest.mark.parametrize("m", [0, 1, 2, 5, 10, 20])
def test_k_matches_scipy(m):
    ref = sp.kve(m, X)
    assert np.max(np.abs(bessel_k_scaled(m, X) / ref - 1)) < 1e-12


@pytest.mark.parametrize("m", [0, 3, 17, 64, 100, 128])
def test_accuracy_contract(m):
    """Relative error <= 1e-12 on [1e-2, 50]; unrepresentable values raise instead."""
    for fn, ref_fn in ((bessel_i, sp.iv), (bessel_k, sp.kv)):
        ref = ref_fn(m, CONTRACT_X)
        ok = (np.abs(ref) > 1e-290) & (np.abs(ref) < 1e290)
        assert np.max(np.abs(fn(m, CONTRACT_X[ok]) / ref[ok] - 1)) <= 1e-12
        for x in CONTRACT_X[~ok][:3]:
            with pytest.raises(BesselRangeError):
                fn(m, x)


@pytest.mark.parametrize("m", [64, 128])
def test_high_order_log_values(m):
    x = np.linspace(5, 50, 40)
    assert np.max(np.abs(np.exp(log_bessel_i(m, x) - x) / sp.ive(m, x) - 1)) < 1e-12
    assert np.max(np.abs(np.exp(log_bessel_k(m, x) + x) / sp.kve(m, x) - 1)) < 1e-12


def test_large_argument_i():
    x = np.array([2500.0, 1e4, 1e5])
    # exp of a log-space value of size ~x carries a relative error ~ eps * x
    assert np.all(np.abs(bessel_i_scaled(3, x) / sp.ive(3, x) - 1) < 1e-14 + 5e-16 * x)


def test_wronskian_on_reference_interval():
    x = np.logspace(-2, np.log10(50), 200)
    w = x * (bessel_i(0, x) * bessel_k(1, x) + bessel_i(1, x) * bessel_k(0, x))
    assert np.max(np.abs(w - 1)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(m=st.integers(0, 40), x=st.floats(0.05, 80.0))
def test_general_wronskian(m, x):
    # I_m K_{m+1} + I_{m+1} K_m = 1/x, in log space to stay finite
    a = np.exp(log_bessel_i(m, x) + log_bessel_k(m + 1, x))
    b = np.exp(log_bessel_i(m + 1, x) + log_bessel_k(m, x))
    assert abs(x * (a + b) - 1) < 1e-12


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 30), x=st.floats(0.1, 60.0))
def test_recurrences(m, x):
    i_lo, i_mid, i_hi = (bessel_i_scaled(k, x) for k in (m - 1, m, m + 1))
    k_lo, k_mid, k_hi = (bessel_k_scaled(k, x) for k in (m - 1, m, m + 1))
    assert abs(i_lo - i_hi - 2 * m / x * i_mid) <= 1e-12 * i_lo
    assert abs(k_hi - k_lo - 2 * m / x * k_mid) <= 1e-12 * k_hi


@pytest.mark.parametrize("x", [0.01, 0.3, 1.0, 7.5, 40.0])
def test_derivative_identities_central_difference(x):
    h = 1e-5 * x
    dI = (bessel_i(0, x + h) - bessel_i(0, x - h)) / (2 * h)
    dK = (bessel_k(0, x + h) - bessel_k(0, x - h)) / (2 * h)
    assert abs(dI / bessel_i(1, x) - 1) < 1e-6
    assert abs(-dK / bessel_k(1, x) - 1) < 1e-6


@pytest.mark.parametrize("m", [0, 1, 3, 12])
def test_prime_functions(m):
    x = np.linspace(0.2, 30, 50)
    assert np.allclose(bessel_i_prime(m, x), sp.ivp(m, x), rtol=1e-12, atol=0)
    assert np.allclose(bessel_k_prime(m, x), sp.kvp(m, x), rtol=1e-12, atol=0)


def test_special_values():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(3, 0.0) == 0.0
    with pytest.raises(BesselDomainError):
        bessel_k(0, 0.0)


def test_negative_order_symmetry():
    x = np.array([0.5, 2.0, 9.0])
    assert np.array_equal(bessel_i(-4, x), bessel_i(4, x))
    assert np.array_equal(bessel_k(-4, x), bessel_k(4, x))


def test_domain_errors():
    with pytest.raises(BesselDomainError):
        bessel_i(0, -1.0)
    with pytest.raises(BesselDomainError):
        bessel_k(1, np.array([1.0, -0.5]))
    with pytest.raises(BesselDomainError):
        bessel_i(0, np.nan)


def test_range_errors_instead_of_overflow():
    with pytest.raises(BesselRangeError):
        bessel_i(0, 800.0)
    with pytest.raises(BesselRangeError):
        bessel_k(128, 1e-3)
    # scaled versions stay representable
    assert np.isfinite(bessel_i_scaled(0, 800.0))


def test_fault_injection(monkeypatch):
    clean = bessel_k(0, 1.0)
    monkeypatch.setenv(specfun.FAULT_ENV, "bessel")
    assert bessel_k(0, 1.0) == pytest.approx(clean * (1 + 1e-6), rel=1e-14)
