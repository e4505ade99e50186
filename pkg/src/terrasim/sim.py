"""Fixed-step simulation of the coupled (5-DOF) and bicycle models.

Both models assume forward rolling (xdot > 0).  The fixed-slip traction
model produces a speed-independent drag, so a run with insufficient drive
force will decelerate through a stall, where the side-slip geometry
inverts and the lateral dynamics are anti-damped; such runs fail with a
non-finite-state error shortly after xdot crosses zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from . import _dynamics, _kernels
from .soil import SoilParams, WheelKinematics
from .terrain import TerrainField
from .terramech import solve_sinkage
from .vehicle import GRAVITY, InputSignal, VehicleParams, VehicleState

if TYPE_CHECKING:
    from .scenario import Scenario

TRAJECTORY_COLUMNS = (
    "t", "X", "Y", "psi", "xdot", "ydot", "psidot",
    "z", "theta", "zdot", "thetadot",
    "Nf", "Nr", "Flf", "Fcf", "Flr", "Fcr", "hf_f", "hf_r",
    "ax", "ay", "az", "wy", "wz",
)

_STATUS_MSG = {
    1.0: "sinkage solve failed to converge",
    2.0: "normal load exceeds soil capacity",
    3.0: "state became non-finite",
}


class SimulationError(Exception):
    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t = {time:.6f} s")
        self.time = time


@dataclass(frozen=True)
class ModelContext:
    """Packed parameter arrays shared by every derivative evaluation."""

    veh: np.ndarray
    soil_args: np.ndarray
    terr: np.ndarray
    fu_p: np.ndarray
    dl_p: np.ndarray
    h_static: np.ndarray


def pack_soil_args(params: VehicleParams, soil: SoilParams) -> np.ndarray:
    w = params.wheel
    return np.array([
        w.r, w.b, soil.k_c / w.b + soil.k_phi, soil.n, soil.c,
        math.tan(soil.phi), soil.k_x, soil.k_y,
        soil.a0, soil.a1, soil.b0, soil.b1,
    ])


def _pack_vehicle(params: VehicleParams) -> np.ndarray:
    return np.array([
        params.m, params.I_z, params.I_y, params.l_f, params.l_r,
        params.k_f, params.k_r, params.c_f, params.c_r,
        params.wheel.m_w, params.slip,
    ])


def _pack_terrain(field: TerrainField) -> np.ndarray:
    if field.kind == "flat":
        return np.array([_dynamics.TERRAIN_FLAT, 0.0])
    if field.kind == "sinusoidal":
        return np.array([_dynamics.TERRAIN_SINUSOIDAL, field.amplitude])
    raise ValueError("custom terrain fields are not supported by the simulator")


def _pack_inputs(inputs: InputSignal):
    d = inputs.drive
    s = inputs.steer
    fu_p = np.array([d.offset, d.amplitude if d.kind == "sinusoid" else 0.0,
                     d.frequency, 1.0 if d.scale_by_mass else 0.0])
    dl_p = np.array([s.offset, s.amplitude if s.kind == "sinusoid" else 0.0,
                     s.frequency])
    return fu_p, dl_p


def static_sinkage(params: VehicleParams, soil: SoilParams) -> float:
    """Static per-axle sinkage: F_z(h) = (1/2) m g at zero side slip."""
    kin = WheelKinematics(slip=params.slip, beta=0.0)
    return solve_sinkage(0.5 * params.m * GRAVITY, kin, params.wheel, soil)


def make_context(params: VehicleParams, soil: SoilParams, field: TerrainField,
                 inputs: InputSignal) -> ModelContext:
    fu_p, dl_p = _pack_inputs(inputs)
    hs = static_sinkage(params, soil)
    return ModelContext(
        veh=_pack_vehicle(params),
        soil_args=pack_soil_args(params, soil),
        terr=_pack_terrain(field),
        fu_p=fu_p, dl_p=dl_p,
        h_static=np.array([hs, hs]),
    )


def initial_arrays(state: VehicleState):
    y = np.array([state.X, state.Y, state.psi, state.xdot, state.ydot,
                  state.psidot, state.z, state.theta, state.zdot,
                  state.thetadot])
    mem = np.array([state.h_f_front, state.h_f_rear,
                    state.dhf_dt_front, state.dhf_dt_rear,
                    state.xddot_prev, state.yddot_prev])
    return y, mem


def state_from_arrays(y: np.ndarray, mem: np.ndarray) -> VehicleState:
    return VehicleState(
        X=y[0], Y=y[1], psi=y[2], xdot=y[3], ydot=y[4], psidot=y[5],
        z=y[6], theta=y[7], zdot=y[8], thetadot=y[9],
        h_f_front=mem[0], h_f_rear=mem[1],
        dhf_dt_front=mem[2], dhf_dt_rear=mem[3],
        xddot_prev=mem[4], yddot_prev=mem[5],
    )


def default_initial_state(ctx: ModelContext, speed: float) -> VehicleState:
    """Vehicle at the origin at the given forward speed, vertical equilibrium."""
    return VehicleState(xdot=speed,
                        h_f_front=ctx.h_static[0], h_f_rear=ctx.h_static[1])


def _check_status(status: float, t: float):
    if status != 0.0:
        raise SimulationError(_STATUS_MSG.get(status, "numerical failure"), t)


def _step(coupled: bool, state: VehicleState, t: float, ctx: ModelContext,
          dt: float):
    if dt <= 0:
        raise ValueError("dt must be positive")
    y, mem = initial_arrays(state)
    y_new, mem_new, diag = _dynamics.rk4_step(
        coupled, t, y, mem, dt, ctx.veh, ctx.soil_args, ctx.terr,
        ctx.fu_p, ctx.dl_p, ctx.h_static)
    _check_status(diag[14], t)
    return state_from_arrays(y_new, mem_new), diag


def coupled_step(state: VehicleState, t: float, ctx: ModelContext, dt: float):
    """One RK4 step of the coupled 10-coordinate system.

    Returns (new_state, diagnostics) where the diagnostics row describes the
    step-start instant (normal loads, wheel forces, solved sinkages, IMU).
    """
    return _step(True, state, t, ctx, dt)


def bicycle_step(state: VehicleState, t: float, ctx: ModelContext, dt: float):
    """As coupled_step but with the vertical subsystem frozen and static normals."""
    return _step(False, state, t, ctx, dt)


@dataclass
class Trajectory:
    """Recorded time series of states, wheel quantities, and IMU output."""

    model: str
    times: np.ndarray            # (K,)
    states: np.ndarray           # (K, 10)
    diags: np.ndarray            # (K, 15)
    liftoff_steps: int = 0

    def __len__(self):
        return len(self.times)

    def column(self, name: str) -> np.ndarray:
        i = TRAJECTORY_COLUMNS.index(name)
        if i == 0:
            return self.times
        if i <= 10:
            return self.states[:, i - 1]
        return self.diags[:, i - 11]

    def imu(self) -> np.ndarray:
        """(K, 5) array of (ax, ay, az, wy, wz)."""
        return self.diags[:, 8:13]

    def to_csv(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        cols = [self.column(c) for c in TRAJECTORY_COLUMNS]
        with open(path, "w") as fh:
            fh.write(",".join(TRAJECTORY_COLUMNS) + "\n")
            for k in range(len(self.times)):
                fh.write(",".join(f"{c[k]:.9g}" for c in cols) + "\n")

    @staticmethod
    def read_csv(path) -> dict:
        data = np.genfromtxt(path, delimiter=",", names=True)
        return {name: np.atleast_1d(data[name]) for name in data.dtype.names}


def simulate(model: str, scenario: "Scenario",
             initial_state: VehicleState | None = None) -> Trajectory:
    """Run a fixed-step simulation, recording at the scenario output rate."""
    if model not in ("coupled", "bicycle"):
        raise ValueError(f"model must be 'coupled' or 'bicycle', got {model!r}")
    ctx = make_context(scenario.vehicle, scenario.soil, scenario.terrain,
                       scenario.inputs)
    if initial_state is None:
        initial_state = default_initial_state(ctx, scenario.initial_speed)
    dt = scenario.dt
    n_steps = int(round(scenario.duration / dt)) if scenario.duration > 0 else 0
    record_every = max(int(round(1.0 / (scenario.output_rate * dt))), 1)
    if n_steps % record_every != 0:
        raise ValueError("duration must cover a whole number of output periods")
    y0, mem0 = initial_arrays(initial_state)
    times, states, diags, n_rec, status, fail_t, _, _ = _dynamics.run_sim(
        model == "coupled", y0, mem0, 0.0, dt, n_steps, record_every,
        ctx.veh, ctx.soil_args, ctx.terr, ctx.fu_p, ctx.dl_p, ctx.h_static)
    _check_status(status, fail_t)
    lift = int(np.sum(diags[:n_rec, 13]))
    return Trajectory(model=model, times=times[:n_rec], states=states[:n_rec],
                      diags=diags[:n_rec], liftoff_steps=lift)
