import numpy as np
import pytest

from bohmlib.metrics import l2_distance, max_relative_error, phase_aligned_l2_distance, second_central_moment


def test_l2_distance():
    a = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    assert l2_distance(a, a, 0.5) == 0.0
    assert l2_distance(a, np.zeros(4), 0.5) == pytest.approx(np.sqrt(0.5))


def test_phase_aligned_distance_ignores_global_phase():
    x = np.linspace(-5.0, 5.0, 201)
    psi = np.exp(-x**2) * np.exp(1j * x)
    assert phase_aligned_l2_distance(psi, psi * np.exp(0.4j), 0.05) < 1e-7
    assert l2_distance(psi, psi * np.exp(0.4j), 0.05) > 0.1


def test_max_relative_error():
    assert max_relative_error([2.0, -4.0], [2.0, -3.0]) == pytest.approx(0.25)
    assert max_relative_error([2.0, -4.0], [2.0, -3.0], scale=1.0) == pytest.approx(1.0)


def test_second_central_moment():
    x = np.linspace(-20.0, 20.0, 4001)
    assert second_central_moment(x, np.exp(-(x - 3.0)**2 / 8)) == pytest.approx(4.0, rel=1e-10)
