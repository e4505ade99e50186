"""Terrain field: analytic derivatives checked against finite differences."""
import numpy as np
import pytest

from terrasim import terrain


def fd_derivatives(field, X, Y, step=1e-5):
    """Central finite differences of the elevation: the derivative oracle."""
    e = field.elevation
    h_x = (e(X + step, Y) - e(X - step, Y)) / (2 * step)
    h_y = (e(X, Y + step) - e(X, Y - step)) / (2 * step)
    h_xx = (e(X + step, Y) - 2 * e(X, Y) + e(X - step, Y)) / step ** 2
    h_yy = (e(X, Y + step) - 2 * e(X, Y) + e(X, Y - step)) / step ** 2
    h_xy = (e(X + step, Y + step) - e(X + step, Y - step)
            - e(X - step, Y + step) + e(X - step, Y - step)) / (4 * step ** 2)
    return h_x, h_y, h_xx, h_xy, h_yy


def test_flat_all_zero():
    f = terrain.flat()
    assert f.elevation(3.2, -1.7) == 0.0
    assert f.spatial_derivatives(3.2, -1.7) == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert f.path_height_rates(1.0, 2.0, 3.0, 4.0, 5.0, 6.0) == (0.0, 0.0)


def test_sinusoidal_gradient_vanishes_at_pi():
    f = terrain.sinusoidal(0.05)
    h_x = f.spatial_derivatives(np.pi, 0.0)[0]
    assert abs(h_x) < 1e-15


def test_sinusoidal_matches_finite_differences():
    f = terrain.sinusoidal(0.05)
    rng = np.random.default_rng(1)
    for _ in range(50):
        X, Y = rng.uniform(-10, 10, size=2)
        analytic = f.spatial_derivatives(X, Y)
        oracle = fd_derivatives(f, X, Y)
        assert analytic == pytest.approx(oracle, abs=1e-6)


def test_gradient_consistency_many_points():
    # 1000 random points, relative tolerance 1e-5 (absolute floor for the
    # near-zero crossings of the trig factors)
    f = terrain.sinusoidal(0.11)
    rng = np.random.default_rng(7)
    pts = rng.uniform(-20, 20, size=(1000, 2))
    for X, Y in pts:
        analytic = np.array(f.spatial_derivatives(X, Y))
        # step 1e-4: second differences at 1e-5 sit at the roundoff floor
        oracle = np.array(fd_derivatives(f, X, Y, step=1e-4))
        assert np.allclose(analytic, oracle, rtol=1e-5, atol=1e-6)


def test_path_rates_stationary():
    f = terrain.sinusoidal(0.05)
    assert f.path_height_rates(1.3, 0.4, 0.0, 0.0, 0.0, 0.0) == (0.0, 0.0)


def test_path_hddot_matches_time_finite_difference():
    # straight constant-speed path: H(t) sampled along the path, second
    # finite difference in time vs. the chain-rule Hddot
    f = terrain.sinusoidal(0.05)
    Xdot, Ydot = 3.0, 1.5
    tau = 1e-4
    for t in (0.0, 0.7, 2.9):
        X, Y = 0.2 + Xdot * t, -0.1 + Ydot * t
        hs = [f.elevation(X + Xdot * dt, Y + Ydot * dt) for dt in (-tau, 0, tau)]
        hddot_fd = (hs[2] - 2 * hs[1] + hs[0]) / tau ** 2
        _, hddot = f.path_height_rates(X, Y, Xdot, Ydot, 0.0, 0.0)
        assert hddot == pytest.approx(hddot_fd, abs=1e-4)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        terrain.TerrainField(kind="perlin")


def test_custom_requires_callables():
    with pytest.raises(ValueError):
        terrain.TerrainField(kind="custom")
