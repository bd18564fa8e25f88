import numpy as np
import pytest

from fracback import build_graded_time_mesh, build_space_grid, default_grading


def test_space_grid_quarters():
    grid = build_space_grid(1.0, 4)
    assert grid.h == 0.25
    np.testing.assert_allclose(grid.x, [0.0, 0.25, 0.5, 0.75, 1.0], rtol=0, atol=0)


def test_space_grid_minimal():
    grid = build_space_grid(1.0, 2)
    assert grid.h == 0.5
    np.testing.assert_allclose(grid.interior, [0.5])


def test_space_grid_longer_domain():
    grid = build_space_grid(2.0, 8)
    assert grid.h == 0.25
    assert grid.x[3] == 0.75


@pytest.mark.parametrize("l,N", [(0.0, 4), (-1.0, 4), (1.0, 1), (1.0, 0)])
def test_space_grid_rejects_bad_args(l, N):
    with pytest.raises(ValueError):
        build_space_grid(l, N)


def test_uniform_time_mesh():
    mesh = build_graded_time_mesh(1.0, 4, 1.0)
    np.testing.assert_allclose(mesh.t, [0.0, 0.25, 0.5, 0.75, 1.0], atol=0)
    np.testing.assert_allclose(mesh.tau, 0.25, atol=0)


def test_graded_time_mesh_r2():
    mesh = build_graded_time_mesh(1.0, 4, 2.0)
    np.testing.assert_allclose(mesh.t, [0.0, 0.0625, 0.25, 0.5625, 1.0], atol=0)


def test_strong_grading_first_step():
    mesh = build_graded_time_mesh(1.0, 100, default_grading(0.5))
    assert default_grading(0.5) == 3.0
    assert mesh.t[1] == pytest.approx(1e-6, rel=1e-12)


@pytest.mark.parametrize("T,M,r", [(0.0, 4, 1.0), (1.0, 0, 1.0), (1.0, 4, 0.5)])
def test_time_mesh_rejects_bad_args(T, M, r):
    with pytest.raises(ValueError):
        build_graded_time_mesh(T, M, r)


def test_single_step_mesh_allowed():
    mesh = build_graded_time_mesh(2.0, 1, 1.0)
    np.testing.assert_allclose(mesh.t, [0.0, 2.0])


def test_mesh_invariants_random_family():
    rng = np.random.default_rng(7)
    for _ in range(50):
        T = float(rng.uniform(0.1, 5.0))
        M = int(rng.integers(1, 200))
        r = float(rng.uniform(1.0, 4.0))
        mesh = build_graded_time_mesh(T, M, r)
        assert mesh.t[0] == 0.0
        assert mesh.t[-1] == T
        assert np.all(mesh.tau > 0)
        # steps shrink towards t=0, never the other way, when r >= 1
        assert np.all(np.diff(mesh.tau) >= -1e-15 * T)
        assert abs(mesh.tau.sum() - T) < 1e-12 * T
        assert mesh.tau_max <= r * T / M + 1e-12 * T


def test_default_grading_clamped():
    assert default_grading(0.9) == pytest.approx((2 - 0.9) / 0.9)
    assert default_grading(0.99) >= 1.0
    with pytest.raises(ValueError):
        default_grading(1.0)
