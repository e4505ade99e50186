"""Importable test helpers: random parameter draws and scenario builders."""
import math

from terrasim.soil import SoilParams, WheelKinematics
from terrasim.scenario import scenario_from_dict


def random_soil(rng) -> SoilParams:
    """A random but physically sensible soil; parameters span clay-to-sand."""
    a0 = rng.uniform(0.2, 0.6)
    return SoilParams(
        k_c=rng.uniform(0.5, 20.0) * 1e3,
        k_phi=rng.uniform(200.0, 2000.0) * 1e3,
        n=rng.uniform(0.3, 1.3),
        c=rng.uniform(0.0, 5000.0),
        phi=math.radians(rng.uniform(5.0, 35.0)),
        k_x=rng.uniform(0.005, 0.05),
        k_y=rng.uniform(0.005, 0.05),
        a0=a0, a1=rng.uniform(0.0, 0.3),
        b0=rng.uniform(0.0, 0.5) * a0, b1=rng.uniform(0.0, 0.1),
    )


def random_kinematics(rng) -> WheelKinematics:
    return WheelKinematics(slip=rng.uniform(0.0, 0.4),
                           beta=rng.uniform(-0.5, 0.5))


def make_scenario(soil="clay", terrain_amplitude=None, duration=5.0,
                  drive=(0.8, 0.5, 0.8), steer=(0.0, 0.3, 0.1),
                  dt=1e-3, output_rate=100.0, n_true=None, seed=0,
                  obs_rate=100.0, sigma_accel=0.2, sigma_gyro=0.0175,
                  ukf=None, initial_speed=1.0):
    cfg = {
        "soil": {"preset": soil},
        "inputs": {
            "drive": {"kind": "sinusoid", "offset": drive[0],
                      "amplitude": drive[1], "frequency": drive[2],
                      "scale_by_mass": True},
            "steer": {"kind": "sinusoid", "offset": steer[0],
                      "amplitude": steer[1], "frequency": steer[2]},
        },
        "run": {"duration": duration, "dt": dt, "output_rate": output_rate,
                "initial_speed": initial_speed},
        "observations": {"rate": obs_rate, "sigma_accel": sigma_accel,
                         "sigma_gyro": sigma_gyro, "seed": seed},
    }
    if terrain_amplitude is not None:
        cfg["terrain"] = {"kind": "sinusoidal", "amplitude": terrain_amplitude}
    if n_true is not None:
        cfg["soil"]["n_true"] = n_true
    if ukf is not None:
        cfg["ukf"] = ukf
    return scenario_from_dict(cfg, name="test")
