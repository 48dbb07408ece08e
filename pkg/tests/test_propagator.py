import math

import numpy as np
import pytest

from bohmlib.datasets.states import (coherent_state, gaussian_state, harmonic_potential, plane_wave,
                                     two_slit_state)
from bohmlib.exceptions import GridMismatchError
from bohmlib.grid import GridSpec
from bohmlib.metrics import l2_distance, phase_aligned_l2_distance
from bohmlib.propagator import (Propagator, PropagatorSpec, SplitOperator, emission_times, mean_momentum,
                                order_of_accuracy, time_grid, time_steps, width)

HARMONIC_GRID = GridSpec(-16.0, 16.0, 256)


def _free(grid, dt):
    return SplitOperator(PropagatorSpec(grid, dt))


def test_time_steps():
    np.testing.assert_allclose(time_steps(0.0, 1.0, 0.3), [0.3, 0.3, 0.3, 0.1])
    assert time_steps(0.0, 1.0, 0.25) == [0.25] * 4
    assert time_steps(2.0, 2.0, 0.1) == []
    with pytest.raises(ValueError):
        time_steps(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        time_steps(1.0, 0.0, 0.1)


def test_time_grid():
    np.testing.assert_array_equal(time_grid(0.0, 1.0, 0.25), [0.0, 0.25, 0.5, 0.75, 1.0])
    times = time_grid(0.0, 10.0, 0.01)
    assert times.size == 1001 and times[-1] == 10.0


def test_emission_times():
    times = emission_times(0.0, 10.0, 1e-3, 1000)
    np.testing.assert_allclose(times, np.arange(11.0), atol=1e-12)
    assert times[-1] == 10.0
    np.testing.assert_allclose(emission_times(0.0, 0.0105, 1e-3, 5), [0.0, 0.005, 0.01, 0.0105])


def test_invalid_spec(small_grid):
    with pytest.raises(ValueError, match="dt > 0"):
        PropagatorSpec(small_grid, 0.0)
    with pytest.raises(ValueError, match="potential of shape"):
        PropagatorSpec(small_grid, 0.1, np.zeros(3))
    with pytest.raises(ValueError, match="finite"):
        PropagatorSpec(small_grid, 0.1, np.full(small_grid.n, np.inf))
    with pytest.raises(ValueError, match="unknown scheme"):
        PropagatorSpec(small_grid, 0.1, scheme="crank-nicolson")


def test_spec_defaults(small_grid):
    spec = PropagatorSpec(small_grid, 0.1)
    assert spec.is_free and spec.potential.shape == (small_grid.n,)
    assert not PropagatorSpec(small_grid, 0.1, harmonic_potential(small_grid)).is_free


def test_get_params(small_grid):
    params = SplitOperator(PropagatorSpec(small_grid, 0.1, harmonic_potential(small_grid))).get_params()
    assert params == {"scheme": "split-operator", "dt": 0.1, "grid": [-32.0, 32.0, 2048],
                      "free": False, "hbar": 1.0, "mass": 1.0}
    assert _free(small_grid, 1e-3).get_params()["free"]


def test_base_step_not_implemented(small_grid):
    with pytest.raises(NotImplementedError):
        Propagator(PropagatorSpec(small_grid, 0.1)).step(plane_wave(small_grid))


def test_free_step_is_exact_for_plane_wave(small_grid):
    w = _free(small_grid, 1e-3).step(plane_wave(small_grid, mode=3))
    assert w.t == 1e-3
    np.testing.assert_allclose(w.values, plane_wave(small_grid, mode=3, t=1e-3).values, rtol=0, atol=1e-13)


def test_grid_mismatch(small_grid):
    propagator = _free(small_grid, 0.1)
    with pytest.raises(GridMismatchError):
        propagator.step(plane_wave(GridSpec(-32.0, 32.0, 1024)))


def test_free_width_law(single, small_grid):
    t = 0.5
    w = _free(small_grid, 1e-3).advance(gaussian_state(single, small_grid), t)
    assert w.t == t
    assert width(w) == pytest.approx(math.sqrt(2) * single.sigma0, rel=1e-8)


def test_two_slit_matches_closed_form(params, wide_grid):
    final = _free(wide_grid, 1e-3).advance(two_slit_state(params, wide_grid, 0.0), 10.0)
    assert l2_distance(final.values, two_slit_state(params, wide_grid, 10.0).values, wide_grid.spacing) < 1e-6


def test_evolve_emits_frames(params):
    grid = GridSpec(-32.0, 32.0, 1024)
    propagator = _free(grid, 1e-3)
    w0 = two_slit_state(params, grid, 0.0)
    frames = propagator.evolve(w0, 1.0, emit_every=100)
    assert len(frames) == 11
    np.testing.assert_allclose([w.t for w in frames], np.linspace(0.0, 1.0, 11), atol=1e-12)
    assert frames[0] is w0 and frames[-1].t == 1.0
    assert propagator.history["steps"] == 1000
    assert max(abs(norm - w0.norm) for norm in propagator.history["norm"]) < 1e-9


def test_evolve_shortens_last_step(params):
    grid = GridSpec(-32.0, 32.0, 1024)
    frames = _free(grid, 1e-3).evolve(two_slit_state(params, grid, 0.0), 0.0105, emit_every=5)
    times = [w.t for w in frames]
    np.testing.assert_allclose(times, emission_times(0.0, 0.0105, 1e-3, 5), atol=1e-15)
    assert times[-1] == 0.0105


def test_evolve_without_steps(params, small_grid):
    w0 = two_slit_state(params, small_grid, 0.0)
    assert _free(small_grid, 1e-3).evolve(w0, 0.0) == [w0]
    with pytest.raises(ValueError):
        _free(small_grid, 1e-3).evolve(w0, 1.0, emit_every=0)


def test_iter_evolve_is_lazy(params, small_grid):
    frames = _free(small_grid, 1e-3).iter_evolve(two_slit_state(params, small_grid, 0.0), 10.0)
    assert next(frames).t == 0.0
    assert next(frames).t == pytest.approx(1e-3)


def test_momentum_is_conserved(small_grid):
    propagator = _free(small_grid, 1e-3)
    w0 = coherent_state(small_grid, 0.0, p0=1.0)
    w = propagator.advance(w0, 1.0)
    assert mean_momentum(w0) == pytest.approx(1.0, abs=1e-9)
    assert abs(mean_momentum(w) - mean_momentum(w0)) < 1e-12


def test_time_reversal():
    grid = HARMONIC_GRID
    propagator = SplitOperator(PropagatorSpec(grid, 1e-3, harmonic_potential(grid)))
    w0 = coherent_state(grid, 0.0, x0=2.0)
    w = w0
    for _ in range(1000):
        w = propagator.step(w)
    back = propagator.run_backward(w, 1000)
    assert l2_distance(back.values, w0.values, grid.spacing) < 1e-8


@pytest.mark.parametrize("dt, bound", [(1e-3, 1e-5), (0.5, None)])
def test_harmonic_oscillator(dt, bound):
    grid = HARMONIC_GRID
    propagator = SplitOperator(PropagatorSpec(grid, dt, harmonic_potential(grid)))
    final = propagator.advance(coherent_state(grid, 0.0, x0=2.0), 1.0)
    error = phase_aligned_l2_distance(final.values, coherent_state(grid, 1.0, x0=2.0).values, grid.spacing)
    if bound is None:
        assert error > 1e-5
    else:
        assert error < bound


def test_order_of_accuracy():
    result = order_of_accuracy((0.04, 0.02, 0.01))
    assert len(result["errors"]) == 3
    assert result["errors"][0] > result["errors"][1] > result["errors"][2]
    assert 1.8 <= result["order"] <= 2.2
