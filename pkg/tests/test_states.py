import os

import numpy as np
import pytest

from bohmlib.datasets.states import (coherent_state, gaussian_state, harmonic_potential, load_state,
                                     plane_wave, save_state, two_slit_state)
from bohmlib.exceptions import GridMismatchError
from bohmlib.grid import GridSpec
from bohmlib.utils.io_utils import load_json, read_csv, write_csv, write_json


def test_samples_are_normalized(params, single, small_grid):
    for w in (two_slit_state(params, small_grid, 1.0), gaussian_state(single, small_grid, 1.0),
              plane_wave(small_grid, mode=2), coherent_state(small_grid, 0.3, x0=1.0, p0=-0.5)):
        assert w.norm == pytest.approx(1.0, abs=1e-12)


def test_raw_two_slit_state(params, small_grid):
    w = two_slit_state(params, small_grid, 0.0, raw=True)
    assert abs(w.values[small_grid.index_nearest(5.0)]) == pytest.approx(1.0, rel=1e-12)


def test_single_packet_limit(single, small_grid):
    np.testing.assert_allclose(two_slit_state(single, small_grid, 2.0).values,
                               gaussian_state(single, small_grid, 2.0).values, rtol=0, atol=1e-14)


def test_coherent_state_follows_orbit():
    grid = GridSpec(-16.0, 16.0, 256)
    w = coherent_state(grid, np.pi / 2, x0=2.0)
    # a quarter period moves the centre from 2 to 0
    assert abs(grid.points[np.argmax(np.abs(w.values))]) < grid.spacing


def test_harmonic_potential(small_grid):
    V = harmonic_potential(small_grid, omega=2.0, mass=0.5)
    assert V[small_grid.index_nearest(1.0)] == pytest.approx(1.0)


def test_state_round_trip(params, small_grid, tmp_path):
    path = str(tmp_path / "state.csv")
    w = two_slit_state(params, small_grid, 1.0)
    save_state(w, path)
    loaded = load_state(path, small_grid, t=1.0)
    np.testing.assert_array_equal(loaded.values, w.values)
    with pytest.raises(GridMismatchError):
        load_state(path, GridSpec(-32.0, 32.0, 1024))


def test_csv_writer(tmp_path):
    path = str(tmp_path / "table.csv")
    values = np.array([0.1, 1 / 3, 2.0**-40])
    write_csv(path, {"a": values, "b": [1, 2, 3]}, comments=["first", "second"])
    with open(path) as f:
        assert f.readline() == "# first\n"
        assert f.readline() == "# second\n"
        assert f.readline() == "a,b\n"
    columns = read_csv(path)
    np.testing.assert_array_equal(columns["a"], values)
    assert [name for name in os.listdir(str(tmp_path)) if name.startswith(".tmp-")] == []


def test_json_writer(tmp_path):
    path = str(tmp_path / "data.json")
    write_json(path, {"x": np.arange(3), "y": np.float64(0.5), "ok": np.bool_(True)})
    assert load_json(path) == {"ok": True, "x": [0, 1, 2], "y": 0.5}
    with pytest.raises(TypeError):
        write_json(path, {"bad": object()})
    assert load_json(path)["y"] == 0.5
