"""Soil and wheel parameter types plus named soil presets.

Pressure-sinkage moduli follow the conventional Bekker units in data files
(k_c in kN/m^(n+1), k_phi in kN/m^(n+2)) and are converted to SI (Pa-based)
on load.  All in-memory values are SI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources

import yaml


@dataclass(frozen=True)
class SoilParams:
    """Bekker soil description (SI units internally)."""

    k_c: float          # pressure-sinkage modulus, N/m^(n+1)
    k_phi: float        # frictional modulus, N/m^(n+2)
    n: float            # sinkage exponent
    c: float            # cohesion, Pa
    phi: float          # internal friction angle, rad
    k_x: float          # longitudinal shear modulus, m
    k_y: float          # lateral shear modulus, m
    a0: float           # max-stress angle coefficients
    a1: float
    b0: float           # rear contact angle coefficients
    b1: float

    def __post_init__(self):
        if not self.n > 0:
            raise ValueError(f"sinkage exponent n must be positive, got {self.n}")
        if not self.k_x > 0 or not self.k_y > 0:
            raise ValueError("shear moduli k_x, k_y must be positive")
        if not (0.0 <= self.phi < math.pi / 2):
            raise ValueError(f"friction angle phi out of range: {self.phi}")
        if not (0.0 < self.a0 <= 1.0):
            raise ValueError(f"a0 must lie in (0, 1], got {self.a0}")
        if not (0.0 <= self.b0 < self.a0):
            raise ValueError(f"b0 must lie in [0, a0), got {self.b0}")

    def with_n(self, n: float) -> "SoilParams":
        return replace(self, n=n)


@dataclass(frozen=True)
class WheelGeom:
    """Rigid wheel geometry."""

    r: float            # radius, m
    b: float            # effective width, m
    m_w: float          # wheel mass, kg

    def __post_init__(self):
        if self.r <= 0 or self.b <= 0 or self.m_w <= 0:
            raise ValueError("wheel radius, width, and mass must be positive")


@dataclass(frozen=True)
class WheelKinematics:
    """Contact kinematics for one wheel."""

    slip: float         # slip ratio s
    beta: float         # side-slip angle, rad
    v_l: float = 0.0    # longitudinal contact speed, m/s

    def __post_init__(self):
        if not math.isfinite(self.slip):
            raise ValueError("slip ratio must be finite")


def soil_from_dict(d: dict) -> SoilParams:
    """Build SoilParams from a preset/config mapping (conventional kN units)."""
    try:
        return SoilParams(
            k_c=float(d["k_c"]) * 1e3,
            k_phi=float(d["k_phi"]) * 1e3,
            n=float(d["n"]),
            c=float(d["c"]),
            phi=math.radians(float(d["phi_deg"])) if "phi_deg" in d else float(d["phi"]),
            k_x=float(d["k_x"]),
            k_y=float(d["k_y"]),
            a0=float(d["a0"]),
            a1=float(d["a1"]),
            b0=float(d["b0"]),
            b1=float(d["b1"]),
        )
    except KeyError as exc:
        raise KeyError(f"soil parameter missing: {exc.args[0]}") from exc


def load_preset(name: str) -> tuple[SoilParams, float]:
    """Load a named soil preset; returns (params, true sinkage exponent)."""
    ref = resources.files("terrasim").joinpath(f"data/soils/{name}.yaml")
    if not ref.is_file():
        raise FileNotFoundError(f"no soil preset named {name!r}")
    d = yaml.safe_load(ref.read_text())
    soil = soil_from_dict(d)
    return soil, soil.n
