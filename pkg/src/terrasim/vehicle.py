"""Vehicle parameter/state types and the planar + vertical dynamics equations.

The functions here are the readable reference implementations of the model
equations; the simulation hot path in :mod:`terrasim._dynamics` evaluates
the same formulas on packed float arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources

import yaml

from .soil import WheelGeom

GRAVITY = 9.81  # m/s^2


@dataclass(frozen=True)
class VehicleParams:
    m: float            # sprung mass, kg
    I_z: float          # yaw inertia, kg m^2
    I_y: float          # pitch inertia, kg m^2
    l_f: float          # CG to front axle, m
    l_r: float          # CG to rear axle, m
    k_f: float          # front suspension stiffness, N/m
    k_r: float          # rear suspension stiffness, N/m
    c_f: float          # front damping, N s/m
    c_r: float          # rear damping, N s/m
    wheel: WheelGeom
    slip: float = 0.1   # constant slip ratio

    def __post_init__(self):
        for name in ("m", "I_z", "I_y", "l_f", "l_r", "k_f", "k_r"):
            if getattr(self, name) <= 0:
                raise ValueError(f"vehicle parameter {name} must be positive")
        if self.c_f < 0 or self.c_r < 0:
            raise ValueError("damping must be nonnegative")


@dataclass
class VehicleState:
    """Planar pose/velocities, vertical/pitch coordinates, and step memory.

    ``z`` and ``theta`` are measured from static equilibrium.  The sinkage
    memory and previous-step planar accelerations are carried to break the
    algebraic loops in the coupled step (they are refreshed once per full
    integration step).
    """

    X: float = 0.0
    Y: float = 0.0
    psi: float = 0.0
    xdot: float = 0.0
    ydot: float = 0.0
    psidot: float = 0.0
    z: float = 0.0
    theta: float = 0.0
    zdot: float = 0.0
    thetadot: float = 0.0
    h_f_front: float = 0.0
    h_f_rear: float = 0.0
    dhf_dt_front: float = 0.0
    dhf_dt_rear: float = 0.0
    xddot_prev: float = 0.0
    yddot_prev: float = 0.0

    def copy(self) -> "VehicleState":
        return replace(self)


@dataclass(frozen=True)
class Schedule:
    """Closed-form input schedule: offset + amplitude * sin(frequency * t)."""

    kind: str = "constant"          # "constant" | "sinusoid"
    offset: float = 0.0
    amplitude: float = 0.0
    frequency: float = 0.0
    scale_by_mass: bool = False     # force schedules given per unit mass

    def __post_init__(self):
        if self.kind not in ("constant", "sinusoid"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    def value(self, t: float) -> float:
        if self.kind == "constant":
            return self.offset
        return self.offset + self.amplitude * math.sin(self.frequency * t)


@dataclass(frozen=True)
class InputSignal:
    drive: Schedule = field(default_factory=Schedule)
    steer: Schedule = field(default_factory=Schedule)

    def f_u(self, t: float, mass: float) -> float:
        v = self.drive.value(t)
        return v * mass if self.drive.scale_by_mass else v

    def delta(self, t: float) -> float:
        return self.steer.value(t)


@dataclass(frozen=True)
class ImuObservation:
    """Body-frame linear accelerations and angular rates."""

    a_x: float
    a_y: float
    a_z: float
    w_y: float
    w_z: float


def static_normal(params: VehicleParams) -> float:
    """Per-axle static normal reaction, (1/2) m g."""
    return 0.5 * params.m * GRAVITY


def dynamic_normal(axle: str, state: VehicleState, z_g: float, zdot_g: float,
                   Hddot: float, params: VehicleParams):
    """Dynamic normal reaction at one axle; returns (N, liftoff_flag).

    N = (1/2) m g - k (z_axle - z_g) - c (zdot_axle - zdot_g) + m_w * Hddot,
    clamped to zero on liftoff.
    """
    if axle == "front":
        k, c = params.k_f, params.c_f
        z_axle = state.z + params.l_f * math.sin(state.theta)
        zdot_axle = state.zdot + params.l_f * state.thetadot * math.cos(state.theta)
    elif axle == "rear":
        k, c = params.k_r, params.c_r
        z_axle = state.z - params.l_r * math.sin(state.theta)
        zdot_axle = state.zdot - params.l_r * state.thetadot * math.cos(state.theta)
    else:
        raise ValueError(f"axle must be 'front' or 'rear', got {axle!r}")
    N = (0.5 * params.m * GRAVITY
         - k * (z_axle - z_g)
         - c * (zdot_axle - zdot_g)
         + params.wheel.m_w * Hddot)
    if N < 0.0:
        return 0.0, True
    return N, False


def bicycle_derivatives(state: VehicleState, delta: float, F_u: float,
                        forces_front, forces_rear, params: VehicleParams,
                        coupled: bool = True):
    """Planar accelerations and global kinematics from the bicycle equations.

    Returns (Xdot, Ydot, psidot, xddot, yddot, psiddot).  ``forces_*`` carry
    wheel-frame (F_l, F_c) pairs.  With ``coupled=False`` the vertical
    coupling terms are dropped (z, theta and their rates treated as zero).
    """
    F_lf, F_cf = forces_front.F_l, forces_front.F_c
    F_lr, F_cr = forces_rear.F_l, forces_rear.F_c
    cd, sd = math.cos(delta), math.sin(delta)
    if coupled:
        ct = math.cos(state.theta)
        st = math.sin(state.theta)
        couple_x = state.ydot * state.psidot * ct + state.zdot * state.thetadot
        couple_y = (state.zdot * state.psidot * st
                    - state.xdot * state.psidot * ct)
    else:
        couple_x = state.ydot * state.psidot
        couple_y = -state.xdot * state.psidot
    xddot = couple_x + (F_lf * cd - F_cf * sd + F_lr + F_u) / params.m
    yddot = couple_y + (F_lf * sd + F_cf * cd + F_cr) / params.m
    psiddot = ((F_lf * sd + F_cf * cd) * params.l_f - F_cr * params.l_r) / params.I_z
    cp, sp = math.cos(state.psi), math.sin(state.psi)
    Xdot = state.xdot * cp - state.ydot * sp
    Ydot = state.xdot * sp + state.ydot * cp
    return Xdot, Ydot, state.psidot, xddot, yddot, psiddot


def halfcar_derivatives(state: VehicleState, z_fg: float, z_rg: float,
                        zdot_fg: float, zdot_rg: float, params: VehicleParams):
    """Heave and pitch accelerations (zddot, thetaddot) of the half-car."""
    st = math.sin(state.theta)
    ct = math.cos(state.theta)
    z_f = state.z + params.l_f * st
    z_r = state.z - params.l_r * st
    zdot_f = state.zdot + params.l_f * state.thetadot * ct
    zdot_r = state.zdot - params.l_r * state.thetadot * ct
    df = params.k_f * (z_f - z_fg) + params.c_f * (zdot_f - zdot_fg)
    dr = params.k_r * (z_r - z_rg) + params.c_r * (zdot_r - zdot_rg)
    zddot = (-dr - df) / params.m
    thetaddot = (dr * params.l_r - df * params.l_f) * ct / params.I_y
    return zddot, thetaddot


def imu_output(state: VehicleState, deriv, coupled: bool = True) -> ImuObservation:
    """IMU observation from a state and its time-derivative at the same instant.

    ``deriv`` carries (xddot, yddot, zddot).  The decoupled bicycle variant
    leaves the vertical channels at zero (unmodeled, unobserved).
    """
    xddot, yddot, zddot = deriv
    if not coupled:
        return ImuObservation(a_x=xddot, a_y=yddot, a_z=0.0, w_y=0.0,
                              w_z=state.psidot)
    return ImuObservation(a_x=xddot, a_y=yddot, a_z=zddot,
                          w_y=state.thetadot, w_z=state.psidot)


def vehicle_from_dict(d: dict) -> VehicleParams:
    w = d["wheel"]
    return VehicleParams(
        m=float(d["m"]), I_z=float(d["I_z"]), I_y=float(d["I_y"]),
        l_f=float(d["l_f"]), l_r=float(d["l_r"]),
        k_f=float(d["k_f"]), k_r=float(d["k_r"]),
        c_f=float(d["c_f"]), c_r=float(d["c_r"]),
        wheel=WheelGeom(r=float(w["r"]), b=float(w["b"]), m_w=float(w["m_w"])),
        slip=float(d.get("slip", 0.1)),
    )


def load_vehicle_preset(name: str) -> VehicleParams:
    ref = resources.files("terrasim").joinpath(f"data/vehicles/{name}.yaml")
    if not ref.is_file():
        raise FileNotFoundError(f"no vehicle preset named {name!r}")
    return vehicle_from_dict(yaml.safe_load(ref.read_text()))
