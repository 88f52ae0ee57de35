import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polcombine.discretize import DiscreteChannel
from polcombine.equalizer import (
    EqualizerConfig,
    default_num_taps,
    equalize,
    gf_matrix,
    mmse_coefficients,
    solve_residual,
    xi_vector,
)
from polcombine.errors import DomainError, NumericalDomainError

import oracles


def rand_channel(rng, length):
    f = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    return DiscreteChannel(f / np.linalg.norm(f))


def test_gf_matrix_examples():
    np.testing.assert_array_equal(gf_matrix(DiscreteChannel([1.0]), 3), np.eye(3))
    a = gf_matrix(DiscreteChannel([1.0, 0.5]), 3)
    np.testing.assert_allclose(a, [[1.25, 0.5, 0], [0.5, 1.25, 0.5], [0, 0.5, 1.25]])


def test_gf_matrix_hermitian_toeplitz():
    ch = rand_channel(np.random.default_rng(1), 4)
    a = gf_matrix(ch, 9)
    np.testing.assert_allclose(a, a.conj().T, atol=1e-15)
    r = ch.autocorrelation()
    for m in range(9):
        for n in range(9):
            k = m - n
            expected = r[k + ch.memory] if abs(k) <= ch.memory else 0
            assert a[m, n] == pytest.approx(expected, abs=1e-15)


def test_xi_vector_examples():
    np.testing.assert_array_equal(xi_vector(DiscreteChannel([1.0, 0.5]), 3, 1), [0.5, 1.0, 0])
    np.testing.assert_array_equal(xi_vector(DiscreteChannel([1.0, 0.5j]), 3, 1), [-0.5j, 1.0, 0])
    np.testing.assert_array_equal(xi_vector(DiscreteChannel([1.0]), 3, 0), [1, 0, 0])


def test_xi_vector_domain():
    ch = DiscreteChannel([1.0, 0.5, 0.1])
    with pytest.raises(DomainError):
        xi_vector(ch, 2, 0)
    with pytest.raises(DomainError):
        xi_vector(ch, 3, 5)


def test_scalar_cases():
    eq = mmse_coefficients(DiscreteChannel([1.0]), EqualizerConfig(1, 0.0, 0))
    assert eq.c[0] == pytest.approx(1.0, abs=1e-11)
    eq = mmse_coefficients(DiscreteChannel([1.0]), EqualizerConfig(1, 1.0, 0))
    assert eq.c[0] == pytest.approx(0.5)
    assert eq.achieved_mse == pytest.approx(0.5)
    eq = mmse_coefficients(DiscreteChannel([2.0j]), EqualizerConfig(1, 0.0, 0))
    assert eq.c[0] == pytest.approx(-0.5j, abs=1e-12)


def test_matches_regression_oracle():
    rng = np.random.default_rng(7)
    ch = rand_channel(rng, 3)
    noise = 0.05
    eq = mmse_coefficients(ch, EqualizerConfig(8, noise, 4))
    ref = oracles.empirical_wiener(ch.taps, 8, 4, noise, 400_000, seed=3)
    assert np.max(np.abs(eq.c - ref)) < 1e-2 * np.max(np.abs(eq.c))


def test_mse_matches_simulation():
    rng = np.random.default_rng(11)
    ch = rand_channel(rng, 3)
    noise = 0.1
    eq = mmse_coefficients(ch, EqualizerConfig(10, noise))
    n = 200_000
    sym = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    u = np.convolve(sym, ch.taps)[:n]
    u += np.sqrt(noise / 2) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    y = equalize(u, eq)
    err = y[100:-100] - sym[100:len(y) - 100]
    assert np.mean(np.abs(err) ** 2) == pytest.approx(eq.achieved_mse, rel=0.03)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.floats(1e-4, 1.0))
def test_residual_small(length, seed, rho):
    ch = rand_channel(np.random.default_rng(seed), length)
    eq = mmse_coefficients(ch, EqualizerConfig(max(length, 12), rho))
    assert solve_residual(ch, eq) <= 1e-10
    assert 0 <= eq.achieved_mse <= 1


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_mse_monotone_in_noise(length, seed):
    ch = rand_channel(np.random.default_rng(seed), length)
    mses = [mmse_coefficients(ch, EqualizerConfig(16, rho)).achieved_mse for rho in (1e-3, 1e-2, 1e-1, 1.0)]
    assert all(a <= b + 1e-12 for a, b in zip(mses, mses[1:]))


def test_zero_forcing_limit():
    ch = DiscreteChannel([1.0, 0.5, 0.25j])
    n = 8 * (ch.memory + 1)
    eq = mmse_coefficients(ch, EqualizerConfig(n, 0.0))
    combined = np.convolve(ch.taps, eq.c)
    target = np.zeros_like(combined)
    target[eq.decision_delay] = 1
    assert np.max(np.abs(combined - target)) < 1e-3


def test_noiseless_two_tap_default_length():
    eq = mmse_coefficients(DiscreteChannel([1.0, 0.5]), EqualizerConfig())
    assert eq.achieved_mse < 1e-2


def test_fixed_delay_respected_and_optimal_delay_is_best():
    ch = rand_channel(np.random.default_rng(5), 4)
    best = mmse_coefficients(ch, EqualizerConfig(12, 0.05))
    for d in range(12 + ch.memory):
        other = mmse_coefficients(ch, EqualizerConfig(12, 0.05, d))
        assert other.decision_delay == d
        assert other.achieved_mse >= best.achieved_mse - 1e-12


def test_default_num_taps():
    assert default_num_taps(DiscreteChannel([1.0])) == 31
    assert default_num_taps(DiscreteChannel(np.ones(50))) == 50


def test_errors():
    with pytest.raises(DomainError):
        mmse_coefficients(DiscreteChannel(np.ones(5)), EqualizerConfig(3))
    with pytest.raises(NumericalDomainError):
        mmse_coefficients(DiscreteChannel([0.0, 0.0]), EqualizerConfig(3))
    with pytest.raises(DomainError):
        EqualizerConfig(0)
    with pytest.raises(DomainError):
        EqualizerConfig(3, -1.0)


def test_equalize_passthrough_and_alignment():
    eq = mmse_coefficients(DiscreteChannel([1.0]), EqualizerConfig(5, 0.0, 2))
    u = np.arange(10, dtype=complex)
    y = equalize(u, eq)
    assert y.size == 8
    np.testing.assert_allclose(y[:6], u[:6], atol=1e-10)
