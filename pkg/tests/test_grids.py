"""Grid construction, trajectory containers, and CSV serialization."""

import math
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractime import GridError, TimeGrid, Trajectory, trapezoid, write_csv, write_keyvalues


def test_grid_nodes_hit_endpoints_exactly():
    grid = TimeGrid(0.25, 2.75, 10)
    t = grid.nodes()
    assert t[0] == 0.25
    assert t[-1] == pytest.approx(2.75, abs=1e-15)
    assert len(grid) == 11
    assert grid.h == pytest.approx(0.25)


def test_grid_rejects_degenerate_intervals():
    with pytest.raises(GridError):
        TimeGrid(1.0, 1.0, 4)
    with pytest.raises(GridError):
        TimeGrid(2.0, 1.0, 4)
    with pytest.raises(GridError):
        TimeGrid(0.0, 1.0, 1)
    with pytest.raises(GridError):
        TimeGrid(0.0, math.inf, 4)


def test_trajectory_accepts_flat_and_stacked_values():
    grid = TimeGrid(0.0, 1.0, 4)
    flat = Trajectory(grid, np.arange(5.0))
    assert flat.dim == 1
    assert flat.values.shape == (5, 1)
    wide = Trajectory(grid, np.ones((5, 3)))
    assert wide.dim == 3
    np.testing.assert_array_equal(wide.component(2), np.ones(5))


def test_trajectory_rejects_bad_shapes_and_nonfinite():
    grid = TimeGrid(0.0, 1.0, 4)
    with pytest.raises(GridError):
        Trajectory(grid, np.ones(4))
    with pytest.raises(GridError):
        Trajectory(grid, np.ones((5, 2, 2)))
    bad = np.ones(5)
    bad[2] = np.nan
    with pytest.raises(GridError):
        Trajectory(grid, bad)


def test_from_callable_supports_scalar_and_vector_outputs():
    grid = TimeGrid(0.0, 1.0, 8)
    scalar = Trajectory.from_callable(grid, np.sin)
    np.testing.assert_array_equal(scalar.component(0), np.sin(grid.nodes()))
    vector = Trajectory.from_callable(grid, lambda t: np.stack([t, t * t], axis=1))
    assert vector.dim == 2
    np.testing.assert_array_equal(vector.component(1), grid.nodes() ** 2)


def test_constant_trajectory_tiles_value():
    grid = TimeGrid(0.0, 1.0, 3)
    traj = Trajectory.constant(grid, [2.0, -1.0])
    assert traj.dim == 2
    assert np.all(traj.values == [2.0, -1.0])


def test_same_grid_guards_mixed_grids():
    x = Trajectory.constant(TimeGrid(0.0, 1.0, 4), 1.0)
    y = Trajectory.constant(TimeGrid(0.0, 1.0, 5), 1.0)
    with pytest.raises(GridError):
        x.same_grid(y)


def test_write_csv_roundtrips_doubles_exactly(tmp_path):
    path = tmp_path / "vals.csv"
    col = np.array([math.pi, 1.0 / 3.0, 1e-17, -2.5e300])
    write_csv(path, ["t", "v"], [np.arange(4.0), col])
    lines = path.read_text().split("\n")
    assert lines[0] == "t,v"
    back = np.array([float(line.split(",")[1]) for line in lines[1:5]])
    np.testing.assert_array_equal(back, col)
    # LF only, trailing newline
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.endswith(b"\n")


def test_write_csv_rejects_ragged_columns(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "bad.csv", ["a", "b"], [np.ones(3), np.ones(4)])


def test_write_csv_leaves_no_temp_files(tmp_path):
    write_csv(tmp_path / "out.csv", ["a"], [np.ones(2)])
    assert sorted(os.listdir(tmp_path)) == ["out.csv"]


def test_write_keyvalues_format(tmp_path):
    path = tmp_path / "meta.txt"
    write_keyvalues(path, {"alpha": 0.5, "n": 2048})
    text = path.read_text()
    assert "alpha=0.5" in text
    assert "n=2048" in text


def test_trajectory_save_csv_headers(tmp_path):
    grid = TimeGrid(0.0, 1.0, 2)
    traj = Trajectory(grid, np.ones((3, 2)))
    path = tmp_path / "traj.csv"
    traj.save_csv(path)
    assert path.read_text().splitlines()[0] == "t,x0,x1"


def test_trapezoid_matches_reference_quadrature():
    grid = TimeGrid(0.0, math.pi, 2000)
    vals = np.sin(grid.nodes())
    assert trapezoid(vals, grid.h) == pytest.approx(2.0, abs=1e-6)
    assert trapezoid(vals, grid.h) == pytest.approx(
        np.trapezoid(vals, dx=grid.h), abs=0.0
    )


@settings(max_examples=50, deadline=None)
@given(
    c1=st.floats(-10, 10, allow_nan=False),
    c2=st.floats(-10, 10, allow_nan=False),
    seed=st.integers(0, 2**31),
)
def test_trapezoid_is_linear(c1, c2, seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(17)
    g = rng.standard_normal(17)
    h = 0.125
    combined = trapezoid(c1 * f + c2 * g, h)
    split = c1 * trapezoid(f, h) + c2 * trapezoid(g, h)
    assert combined == pytest.approx(split, abs=1e-9)
