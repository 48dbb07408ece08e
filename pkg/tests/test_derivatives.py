import numpy as np
import pytest

from bohmlib.derivatives import CenteredDifference, Derivative, SpectralDerivative, get_derivative


def _periodic(n, length=2 * np.pi):
    x = length * np.arange(n) / n
    return x, length / n


def test_spectral_is_exact_for_lattice_modes():
    x, h = _periodic(64)
    op = SpectralDerivative(h)
    f = np.sin(3 * x)
    d1 = op.d1(f)
    assert np.isrealobj(d1)
    np.testing.assert_allclose(d1, 3 * np.cos(3 * x), atol=1e-12)
    np.testing.assert_allclose(op.d2(f), -9 * f, atol=1e-11)
    wave = np.exp(5j * x)
    np.testing.assert_allclose(op.d1(wave), 5j * wave, atol=1e-12)


def test_spectral_nyquist_mode():
    x, h = _periodic(64)
    op = SpectralDerivative(h)
    f = np.cos(32 * x)
    np.testing.assert_allclose(op.d1(f), 0.0, atol=1e-10)
    np.testing.assert_allclose(op.d2(f), -1024 * f, atol=1e-8)


def _gaussian_errors(n):
    x = -10.0 + 20.0 * np.arange(n) / n
    op = CenteredDifference(20.0 / n)
    f = np.exp(-x**2)
    return (np.max(np.abs(op.d1(f) + 2 * x * f)),
            np.max(np.abs(op.d2(f) - (4 * x**2 - 2) * f)))


def test_fd4_is_fourth_order():
    coarse, fine = _gaussian_errors(256), _gaussian_errors(512)
    for e_coarse, e_fine in zip(coarse, fine):
        assert e_coarse / e_fine > 12


def test_fd4_agrees_with_spectral():
    n = 512
    h = 20.0 / n
    x = -10.0 + h * np.arange(n)
    f = np.exp(-x**2) * np.exp(2j * x)
    np.testing.assert_allclose(get_derivative("fd4", h).d1(f), get_derivative("spectral", h).d1(f), atol=1e-3)


def test_invalid_operators():
    with pytest.raises(ValueError):
        CenteredDifference(0.1).d(np.zeros(16), order=3)
    with pytest.raises(ValueError, match="Unknown derivative"):
        get_derivative("chebyshev", 0.1)
    with pytest.raises(ValueError):
        SpectralDerivative(0.0)
    with pytest.raises(NotImplementedError):
        Derivative(0.1).d1(np.zeros(16))
