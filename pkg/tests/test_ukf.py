"""UKF building blocks: weights, sigma points, analytic Kalman oracle."""
import numpy as np
import pytest

from terrasim.harness import generate_observations
from terrasim.ukf import (FLAG_SINGULAR, UkfConfig, measurement_update,
                          run_estimation, sigma_points, sigma_weights,
                          time_update)

from _helpers import make_scenario


def scalar_kalman(w_prior, P_prior, H, b, R, d):
    """Closed-form scalar Kalman update for d = H w + b + e: the oracle."""
    S = H * P_prior * H + R
    K = P_prior * H / S
    w_post = w_prior + K * (d - (H * w_prior + b))
    P_post = (1.0 - K * H) * P_prior
    return w_post, P_post, K


# ---------------------------------------------------------------- weights

def test_weights_unit_alpha():
    lam, a_m, a_c = sigma_weights(1, 1.0, 0.0)
    assert lam == 0.0
    assert a_m[0] == 0.0
    assert a_c[0] == 2.0
    assert a_m[1] == a_m[2] == 0.5


def test_weights_half_alpha():
    lam, a_m, _ = sigma_weights(1, 0.5, 0.0)
    assert lam == pytest.approx(-0.75, abs=1e-15)
    assert a_m[0] == pytest.approx(-3.0, abs=1e-12)
    assert a_m[1] == pytest.approx(2.0, abs=1e-12)


def test_weight_sums_random():
    rng = np.random.default_rng(3)
    for _ in range(50):
        L = int(rng.integers(1, 6))
        alpha = rng.uniform(0.2, 2.0)
        kappa = rng.uniform(0.0, 3.0)
        lam = alpha * alpha * (L + kappa) - L
        if L + lam <= 0:
            continue
        _, a_m, _ = sigma_weights(L, alpha, kappa)
        assert abs(a_m.sum() - 1.0) <= 1e-14


def test_weights_reject_degenerate():
    with pytest.raises(ValueError):
        sigma_weights(1, 1.0, -2.0)  # L + lambda < 0


# ---------------------------------------------------------------- time update

def test_time_update_identity():
    w, P = time_update(np.array([1.3]), np.array([[0.2]]), np.array([[0.0]]))
    assert w[0] == 1.3 and P[0, 0] == 0.2


def test_time_update_scalar_sum():
    _, P = time_update(np.array([0.0]), np.array([[0.1]]), np.array([[0.01]]))
    assert P[0, 0] == pytest.approx(0.11, abs=1e-15)


# ---------------------------------------------------------------- sigma points

def test_sigma_points_scalar_example():
    pts = sigma_points(np.array([1.0]), np.array([[0.04]]), 0.0)
    assert pts[:, 0] == pytest.approx([1.0, 1.2, 0.8], abs=1e-12)


def test_sigma_points_zero_covariance():
    pts = sigma_points(np.array([0.7]), np.array([[0.0]]), 0.0)
    assert np.all(pts == 0.7)


def test_sigma_points_weighted_mean_recovers_prior():
    lam, a_m, _ = sigma_weights(2, 0.8, 1.0)
    w = np.array([0.3, -1.2])
    P = np.array([[0.5, 0.1], [0.1, 0.3]])
    pts = sigma_points(w, P, lam)
    assert a_m @ pts == pytest.approx(w, abs=1e-12)


# ---------------------------------------------------------------- update

def test_update_zero_innovation_keeps_mean():
    lam, a_m, a_c = sigma_weights(1, 1.0, 0.0)
    w = np.array([1.0])
    P = np.array([[0.04]])
    W = sigma_points(w, P, lam)
    D = 2.0 * W + 0.5                      # affine observation
    d = a_m @ D                            # observe exactly the prediction
    w2, P2, info = measurement_update(D, a_m, a_c, d, np.array([[0.01]]), w, P, W)
    assert w2[0] == pytest.approx(1.0, abs=1e-14)
    assert P2[0, 0] < P[0, 0]


def test_update_flat_predictions_no_gain():
    lam, a_m, a_c = sigma_weights(1, 1.0, 0.0)
    w = np.array([1.0])
    P = np.array([[0.04]])
    W = sigma_points(w, P, lam)
    D = np.full((3, 1), 5.0)               # observation insensitive to w
    w2, P2, info = measurement_update(D, a_m, a_c, np.array([4.0]),
                                      np.array([[0.01]]), w, P, W)
    assert np.all(info["gain"] == 0.0)
    assert w2[0] == 1.0 and P2[0, 0] == pytest.approx(0.04, abs=1e-15)


def test_update_matches_scalar_kalman_oracle():
    rng = np.random.default_rng(11)
    for _ in range(50):
        w0 = rng.normal()
        P0 = rng.uniform(0.01, 1.0)
        H = rng.uniform(-3.0, 3.0)
        b = rng.normal()
        R = rng.uniform(0.01, 1.0)
        d = rng.normal()
        lam, a_m, a_c = sigma_weights(1, 1.0, 0.0)
        W = sigma_points(np.array([w0]), np.array([[P0]]), lam)
        D = H * W + b
        w2, P2, info = measurement_update(D, a_m, a_c, np.array([d]),
                                          np.array([[R]]),
                                          np.array([w0]), np.array([[P0]]), W)
        w_ref, P_ref, K_ref = scalar_kalman(w0, P0, H, b, R, d)
        assert abs(w2[0] - w_ref) <= 1e-12
        assert abs(P2[0, 0] - P_ref) <= 1e-12
        assert abs(info["gain"][0, 0] - K_ref) <= 1e-12


def test_linear_map_moment_exactness():
    # for affine D the unscented d_hat, P_d, P_wd equal the analytic values
    rng = np.random.default_rng(12)
    for alpha in (0.5, 1.0, 1.5):
        lam, a_m, a_c = sigma_weights(1, alpha, 0.0)
        w0, P0, H, b, R = 0.4, 0.09, -2.0, 1.0, 0.02
        W = sigma_points(np.array([w0]), np.array([[P0]]), lam)
        D = H * W + b
        d_hat = a_m @ D
        dD = D - d_hat
        P_d = R + (a_c[:, None] * dD).T @ dD
        P_wd = (a_c[:, None] * (W - w0)).T @ dD
        assert abs(d_hat[0] - (H * w0 + b)) <= 1e-10
        assert abs(P_d[0, 0] - (H * H * P0 + R)) <= 1e-10
        assert abs(P_wd[0, 0] - H * P0) <= 1e-10


def test_covariance_stays_psd_under_random_updates():
    rng = np.random.default_rng(13)
    lam, a_m, a_c = sigma_weights(1, 1.0, 0.0)
    P = np.array([[0.04]])
    w = np.array([1.0])
    for _ in range(1000):
        w_m, P_m = time_update(w, P, np.array([[1e-4]]))
        W = sigma_points(w_m, P_m, lam)
        D = rng.uniform(-2, 2) * W + rng.normal()
        w, P, _ = measurement_update(D, a_m, a_c, np.array([rng.normal()]),
                                     np.array([[0.1]]), w_m, P_m, W)
        assert P[0, 0] >= -1e-15
        assert P[0, 1:].size == 0 or np.allclose(P, P.T)


def test_monotone_information_without_process_noise():
    lam, a_m, a_c = sigma_weights(1, 1.0, 0.0)
    w = np.array([1.0])
    P = np.array([[0.04]])
    last = P[0, 0]
    for _ in range(20):
        W = sigma_points(w, P, lam)
        D = 3.0 * W
        w, P, _ = measurement_update(D, a_m, a_c, np.array([2.9]),
                                     np.array([[0.05]]), w, P, W)
        assert P[0, 0] <= last + 1e-15
        last = P[0, 0]


def test_singular_observation_covariance_skips_update():
    lam, a_m, a_c = sigma_weights(1, 1.0, 0.0)
    w = np.array([1.0])
    P = np.array([[0.04]])
    W = sigma_points(w, P, lam)
    # zero assumed noise and predictions insensitive to the parameter:
    # P_d = 0, the guard must return the prior with the singular flag
    D0 = np.zeros((3, 1))
    w3, P3, info = measurement_update(D0, a_m, a_c, np.array([1.0]),
                                      np.array([[0.0]]), w, P, W)
    assert info["flag"] == FLAG_SINGULAR
    assert w3[0] == 1.0 and P3[0, 0] == 0.04


def test_config_validation():
    with pytest.raises(ValueError):
        UkfConfig(alpha=0.0)
    with pytest.raises(ValueError):
        UkfConfig(n_substeps=0)
    with pytest.raises(ValueError):
        UkfConfig(noise_inflation=0.5)


# ---------------------------------------------------------------- filter runs

def test_estimation_fixed_point_at_truth():
    # zero measurement noise makes the observation covariance singular, so
    # every update is skipped and the estimate must hold exactly at truth
    sc = make_scenario(duration=2.0, terrain_amplitude=0.05,
                       sigma_accel=0.0, sigma_gyro=0.0,
                       ukf={"initial_mean": 0.5, "initial_cov": 0.04})
    obs, _ = generate_observations(sc)
    trace = run_estimation("coupled", sc, obs)
    assert np.max(np.abs(trace.w_hat - 0.5)) <= 1e-6


def test_estimation_near_fixed_point_with_tiny_noise():
    # truth integrated at the filter period so the only model error is the
    # tiny injected noise; a wide prior here would amplify curvature bias
    sc = make_scenario(duration=2.0, terrain_amplitude=0.05, dt=0.01,
                       sigma_accel=1e-6, sigma_gyro=1e-7, seed=5,
                       ukf={"initial_mean": 0.5, "initial_cov": 1e-4})
    obs, _ = generate_observations(sc)
    trace = run_estimation("coupled", sc, obs)
    assert np.max(np.abs(trace.w_hat - 0.5)) <= 2e-3


def test_estimation_degenerate_prior_constant():
    sc = make_scenario(duration=1.0, terrain_amplitude=0.05, seed=2,
                       ukf={"initial_mean": 0.9, "initial_cov": 0.0,
                            "process_noise": 0.0})
    obs, _ = generate_observations(sc)
    trace = run_estimation("coupled", sc, obs)
    assert np.all(trace.w_hat == 0.9)


def test_estimation_deterministic():
    sc = make_scenario(duration=1.0, terrain_amplitude=0.05, seed=9)
    obs, _ = generate_observations(sc)
    a = run_estimation("coupled", sc, obs)
    b = run_estimation("coupled", sc, obs)
    assert np.array_equal(a.w_hat, b.w_hat)
    assert np.array_equal(a.innovation, b.innovation)


def test_estimation_bicycle_channels():
    sc = make_scenario(duration=1.0, terrain_amplitude=0.05, seed=9)
    obs, _ = generate_observations(sc)
    trace = run_estimation("bicycle", sc, obs)
    assert trace.channels == ("ax", "ay", "wz")
    assert trace.d_hat.shape[1] == 3


def test_estimation_rejects_unknown_model():
    sc = make_scenario(duration=1.0, terrain_amplitude=0.05)
    obs, _ = generate_observations(sc)
    with pytest.raises(ValueError):
        run_estimation("tricycle", sc, obs)
