"""Counter-based sensor noise: determinism, independence, statistics."""
import numpy as np

from terrasim.noise import CHANNELS, gaussian_draws, imu_noise


def test_zero_sigma_zero_noise():
    assert np.all(gaussian_draws(0, 0, 100, 0.0) == 0.0)


def test_same_key_reproduces():
    a = gaussian_draws(42, 3, 1000, 0.2)
    b = gaussian_draws(42, 3, 1000, 0.2)
    assert np.array_equal(a, b)


def test_channels_independent_of_each_other():
    a = gaussian_draws(42, 0, 1000, 0.2)
    b = gaussian_draws(42, 1, 1000, 0.2)
    assert not np.array_equal(a, b)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.1


def test_different_seeds_differ():
    a = gaussian_draws(1, 0, 100, 0.2)
    b = gaussian_draws(2, 0, 100, 0.2)
    assert not np.array_equal(a, b)


def test_sample_std_within_one_percent():
    for ch in range(len(CHANNELS)):
        draws = gaussian_draws(7, ch, 100_000, 0.2)
        assert abs(draws.std() - 0.2) <= 0.002


def test_imu_noise_layout():
    block = imu_noise(0, 50_000, 0.2, 0.0175)
    assert block.shape == (50_000, 5)
    for ch, expect in enumerate((0.2, 0.2, 0.2, 0.0175, 0.0175)):
        assert abs(block[:, ch].std() - expect) <= 0.01 * expect


def test_imu_noise_prefix_stable():
    # drawing a longer stream leaves the common prefix unchanged
    short = imu_noise(3, 100, 0.2, 0.0175)
    long = imu_noise(3, 200, 0.2, 0.0175)
    assert np.array_equal(short, long[:100])
