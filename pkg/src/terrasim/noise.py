"""Counter-based, per-channel Gaussian noise for sensor corruption.

Each (seed, channel) pair keys an independent Philox stream, so channels
can be generated in any order and always reproduce the same draws.
"""
from __future__ import annotations

import numpy as np

CHANNELS = ("ax", "ay", "az", "wy", "wz")


def gaussian_draws(seed: int, channel: int, count: int, sigma: float) -> np.ndarray:
    """``count`` zero-mean Gaussian draws with std ``sigma`` for one channel."""
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(channel)],
                   dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    return rng.normal(0.0, sigma, size=count)


def imu_noise(seed: int, count: int, sigma_accel: float,
              sigma_gyro: float) -> np.ndarray:
    """(count, 5) noise block: accel sigma on ax/ay/az, gyro sigma on wy/wz."""
    out = np.empty((count, 5))
    for ch, name in enumerate(CHANNELS):
        sigma = sigma_accel if name.startswith("a") else sigma_gyro
        out[:, ch] = gaussian_draws(seed, ch, count, sigma)
    return out
