"""Reference-object scale estimation from corner grids."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from foodvol.errors import DegenerateGridError, InvalidGridError
from foodvol.fixtures import make_corner_grid
from foodvol.registration import RigidTransform
from foodvol.scale import (
    CornerGrid,
    adjacent_corner_distances,
    estimate_scale,
    load_corner_grid,
    save_corner_grid,
    scale_from_distances,
)


def _lattice(rows, cols, dx=1.0, dy=1.0):
    corners = np.zeros((rows, cols, 3))
    corners[..., 0] = np.arange(cols)[None, :] * dx
    corners[..., 1] = np.arange(rows)[:, None] * dy
    return corners.reshape(-1, 3)


# ----------------------------------------------------------------- validation


def test_grid_validation():
    good = _lattice(2, 2)
    with pytest.raises(InvalidGridError):
        CornerGrid(good, 1, 4, 0.05)  # fewer than 2 rows
    with pytest.raises(InvalidGridError):
        CornerGrid(good, 2, 2, 0.0)
    with pytest.raises(InvalidGridError):
        CornerGrid(good, 2, 2, float("nan"))
    with pytest.raises(InvalidGridError):
        CornerGrid(good[:3], 2, 2, 0.05)  # wrong corner count
    with pytest.raises(InvalidGridError):
        CornerGrid(good[:, :2], 2, 2, 0.05)  # not (n, 3)
    bad = good.copy()
    bad[0, 0] = np.inf
    with pytest.raises(InvalidGridError):
        CornerGrid(bad, 2, 2, 0.05)


def test_degenerate_grid_rejected():
    corners = _lattice(2, 2)
    corners[1] = corners[0]  # two adjacent corners coincide
    with pytest.raises(DegenerateGridError):
        adjacent_corner_distances(CornerGrid(corners, 2, 2, 0.05))


# ------------------------------------------------------------------ distances


def test_distances_2x2():
    grid = CornerGrid(_lattice(2, 2), 2, 2, 0.05)
    np.testing.assert_array_equal(adjacent_corner_distances(grid), [1.0, 1.0, 1.0, 1.0])


def test_distance_count_formula():
    for rows, cols in [(2, 2), (3, 3), (7, 10), (2, 5)]:
        grid = CornerGrid(_lattice(rows, cols), rows, cols, 0.05)
        expected = rows * (cols - 1) + cols * (rows - 1)
        assert adjacent_corner_distances(grid).size == expected


def test_distance_ordering():
    """Horizontal pairs in row-major order first, then vertical pairs in
    column-major order."""
    rng = np.random.default_rng(11)
    corners = rng.normal(size=(3, 4, 3)) * 2.0
    grid = CornerGrid(corners.reshape(-1, 3), 3, 4, 0.05)
    distances = adjacent_corner_distances(grid)
    expected = [
        np.linalg.norm(corners[r, j + 1] - corners[r, j])
        for r in range(3)
        for j in range(3)
    ] + [
        np.linalg.norm(corners[r + 1, j] - corners[r, j])
        for j in range(4)
        for r in range(2)
    ]
    np.testing.assert_allclose(distances, expected, rtol=1e-12)


# ----------------------------------------------------------------- estimation


def test_scale_exact_on_clean_grid():
    grid = make_corner_grid(7, 10, spacing=0.5, square_size_real=0.0468)
    assert estimate_scale(grid).s == 0.0936


def test_even_median_averages_central_values():
    """2x2 grid with dx=1, dy=2 yields distances [1,1,2,2]: median 1.5."""
    grid = CornerGrid(_lattice(2, 2, dx=1.0, dy=2.0), 2, 2, 0.03)
    estimate = estimate_scale(grid)
    assert estimate.median_distance == 1.5
    assert estimate.s == 0.03 / 1.5
    assert estimate.distance_count == 4


def test_scale_invariant_under_rigid_pose():
    pose = RigidTransform(
        Rotation.from_rotvec([0.4, -0.2, 1.1]).as_matrix(), np.array([3.0, -1.0, 2.0])
    )
    plain = estimate_scale(make_corner_grid(7, 10, 0.5, 0.0468))
    posed = estimate_scale(make_corner_grid(7, 10, 0.5, 0.0468, pose=pose))
    assert posed.s == pytest.approx(plain.s, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    rotvec=st.tuples(
        st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0)
    ),
    translation=st.tuples(
        st.floats(-10.0, 10.0), st.floats(-10.0, 10.0), st.floats(-10.0, 10.0)
    ),
)
def test_scale_rigid_invariance_property(rotvec, translation):
    pose = RigidTransform(
        Rotation.from_rotvec(np.asarray(rotvec)).as_matrix(),
        np.asarray(translation, dtype=np.float64),
    )
    posed = estimate_scale(make_corner_grid(3, 4, 0.7, 0.02, pose=pose))
    assert posed.s == pytest.approx(0.02 / 0.7, rel=1e-12)


def test_scaling_corners_divides_s():
    grid = make_corner_grid(5, 6, 1.0, 0.05)
    for k in (2.0, 0.25, 10.0):
        scaled = CornerGrid(grid.corners * k, grid.rows, grid.cols, grid.square_size_real)
        assert estimate_scale(scaled).s == pytest.approx(0.05 / k, rel=1e-12)


def test_median_ignores_one_bad_corner():
    """Displacing a single corner cannot move the median of 123 distances."""
    grid = make_corner_grid(7, 10, 1.0, 0.05)
    corners = grid.corners.copy()
    corners[0] += np.array([0.37, -0.12, 0.25])
    tweaked = CornerGrid(corners, 7, 10, 0.05)
    assert estimate_scale(tweaked).s == 0.05


def test_noisy_grid_recovers_scale_within_one_percent():
    grid = make_corner_grid(7, 10, 1.0, 0.05, noise_sigma=0.01, seed=0)
    s = estimate_scale(grid).s
    assert abs(s - 0.05) / 0.05 <= 0.01


# -------------------------------------------------------- scale_from_distances


def test_scale_from_distances_matches_estimate():
    grid = make_corner_grid(4, 5, 0.5, 0.012)
    via_grid = estimate_scale(grid)
    via_distances = scale_from_distances(0.012, adjacent_corner_distances(grid))
    assert via_distances.s == via_grid.s
    assert via_distances.distance_count == via_grid.distance_count


def test_scale_from_distances_median_robustness():
    """Corrupting floor((n-1)/2) distances upward leaves the estimate inside
    the clean range."""
    rng = np.random.default_rng(3)
    clean = 1.0 + 0.01 * rng.standard_normal(123)
    s_clean_all = 0.05 / clean
    corrupted = clean.copy()
    k = (clean.size - 1) // 2
    corrupted[rng.choice(clean.size, size=k, replace=False)] *= 50.0
    s = scale_from_distances(0.05, corrupted).s
    assert s_clean_all.min() <= s <= s_clean_all.max()


def test_scale_from_distances_validation():
    with pytest.raises(DegenerateGridError):
        scale_from_distances(0.05, [])
    with pytest.raises(DegenerateGridError):
        scale_from_distances(0.05, [1.0, 0.0])
    with pytest.raises(DegenerateGridError):
        scale_from_distances(0.05, [1.0, -2.0])
    with pytest.raises(InvalidGridError):
        scale_from_distances(-0.05, [1.0])


# ------------------------------------------------------------------- file I/O


def test_corner_grid_json_round_trip(tmp_path):
    grid = make_corner_grid(
        3,
        4,
        0.37,
        0.0123,
        pose=RigidTransform(
            Rotation.from_rotvec([0.2, 0.3, -0.1]).as_matrix(), np.array([1.0, 2.0, 3.0])
        ),
    )
    path = tmp_path / "corners.json"
    save_corner_grid(grid, path)
    again = load_corner_grid(path)
    assert np.array_equal(again.corners, grid.corners)
    assert (again.rows, again.cols) == (3, 4)
    assert again.square_size_real == 0.0123


def test_load_corner_grid_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([1, 2, 3]))
    with pytest.raises(InvalidGridError, match="JSON object"):
        load_corner_grid(path)
    path.write_text(json.dumps({"rows": 2, "cols": 2}))
    with pytest.raises(InvalidGridError, match="missing fields"):
        load_corner_grid(path)
    path.write_text(
        json.dumps(
            {
                "rows": 2,
                "cols": 2,
                "square_size_real_m": 0.05,
                "corners": [[0, 0, 0]] * 3,
            }
        )
    )
    with pytest.raises(InvalidGridError):
        load_corner_grid(path)
