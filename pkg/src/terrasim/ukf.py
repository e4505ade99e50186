"""Unscented Kalman filter in the parameter-estimation formulation.

The parameter random walk is w_{k+1} = w_k + n_k with observation
d_k = f(xi_k, w_k) + e_k; the filter carries only the parameter mean and
covariance, propagating a nominal vehicle state between updates to supply
the observation map.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from . import _dynamics, _kernels
from .sim import SimulationError, initial_arrays, make_context
from .vehicle import VehicleState

if TYPE_CHECKING:
    from .scenario import Scenario

FLAG_SINGULAR = 1
FLAG_DIVERGED = 2

PARAM_CLAMP = (0.1, 2.0)      # admissible sinkage exponent after each update
_EVAL_CLAMP = (0.05, 3.0)     # safety clip for sigma-point model evaluations

COUPLED_CHANNELS = ("ax", "ay", "az", "wy", "wz")
BICYCLE_CHANNELS = ("ax", "ay", "wz")
_CHANNEL_INDEX = {"ax": 0, "ay": 1, "az": 2, "wy": 3, "wz": 4}


class FactorizationError(Exception):
    """Sigma-point covariance factorization failed (not PSD after jitter)."""


@dataclass(frozen=True)
class UkfConfig:
    alpha: float = 1.0
    kappa: float = 0.0
    process_noise: float = 1e-5      # R_n (scalar, L = 1)
    initial_mean: float = 1.0        # w_hat_0
    initial_cov: float = 0.04        # P_w0
    n_substeps: int = 1              # RK4 substeps per filter period
    noise_inflation: float = 6.0     # assumed measurement sigma = inflation x sensor sigma
    vertical_inflation: float = 25.0  # extra factor on the a_z and w_y channels

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.n_substeps < 1:
            raise ValueError("n_substeps must be at least 1")
        if self.noise_inflation < 1.0:
            raise ValueError("noise_inflation must be at least 1")
        if self.vertical_inflation < 1.0:
            raise ValueError("vertical_inflation must be at least 1")


def sigma_weights(L: int, alpha: float, kappa: float):
    """Scaling constant and mean/covariance weights for 2L+1 sigma points."""
    lam = alpha * alpha * (L + kappa) - L
    if L + lam <= 0:
        raise ValueError(f"L + lambda must be positive, got {L + lam}")
    a_m = np.full(2 * L + 1, 1.0 / (2.0 * (L + lam)))
    a_c = a_m.copy()
    a_m[0] = lam / (L + lam)
    a_c[0] = lam / (L + lam) - alpha * alpha + 3.0
    return lam, a_m, a_c


def time_update(w_hat: np.ndarray, P_w: np.ndarray, R_n: np.ndarray):
    """Random-walk prior: mean unchanged, covariance inflated by R_n."""
    return w_hat.copy(), P_w + R_n


def sigma_points(w_minus: np.ndarray, P_minus: np.ndarray, lam: float) -> np.ndarray:
    """(2L+1, L) array: the mean and symmetric spreads of sqrt((L+lam) P)."""
    L = len(w_minus)
    sym = 0.5 * (P_minus + P_minus.T)
    evals, vecs = np.linalg.eigh(sym)
    if evals.min() < -1e-12:
        evals, vecs = np.linalg.eigh(sym + 1e-12 * np.eye(L))
        if evals.min() < 0:
            raise FactorizationError(
                f"covariance not PSD (min eigenvalue {evals.min():.3e})")
    evals = np.clip(evals, 0.0, None)
    root = (vecs * np.sqrt(evals)) @ vecs.T
    spread = math.sqrt(L + lam) * root
    pts = np.empty((2 * L + 1, L))
    pts[0] = w_minus
    for i in range(L):
        pts[1 + i] = w_minus + spread[:, i]
        pts[1 + L + i] = w_minus - spread[:, i]
    return pts


def measurement_update(D: np.ndarray, a_m: np.ndarray, a_c: np.ndarray,
                       d: np.ndarray, R_e: np.ndarray,
                       w_minus: np.ndarray, P_minus: np.ndarray,
                       W: np.ndarray):
    """Unscented measurement update.

    Returns (w_hat, P_w, info) with info carrying the predicted observation,
    innovation, gain, and a singularity flag.  The gain uses the
    parameter-observation cross covariance, K = P_wd P_d^{-1}.
    """
    d_hat = a_m @ D
    dD = D - d_hat
    dW = W - w_minus
    P_d = R_e + (a_c[:, None] * dD).T @ dD
    P_wd = (a_c[:, None] * dW).T @ dD
    innovation = d - d_hat
    info = {"d_hat": d_hat, "innovation": innovation, "flag": 0}
    try:
        if np.linalg.cond(P_d) > 1e12:
            raise np.linalg.LinAlgError("ill-conditioned observation covariance")
        K = np.linalg.solve(P_d.T, P_wd.T).T
    except np.linalg.LinAlgError:
        info["flag"] = FLAG_SINGULAR
        info["gain"] = np.zeros_like(P_wd)
        return w_minus.copy(), P_minus.copy(), info
    w_hat = w_minus + K @ innovation
    P_w = P_minus - K @ P_d @ K.T
    P_w = 0.5 * (P_w + P_w.T)
    info["gain"] = K
    return w_hat, P_w, info


@dataclass
class EstimateTrace:
    """Per-step filter record for a scalar parameter estimate."""

    model: str
    channels: tuple
    times: np.ndarray        # (K,)
    w_hat: np.ndarray        # (K,)
    P_w: np.ndarray          # (K,)
    d_hat: np.ndarray        # (K, M)
    innovation: np.ndarray   # (K, M)
    gain: np.ndarray         # (K, M)
    flags: np.ndarray        # (K,) int

    def __len__(self):
        return len(self.times)

    def to_csv(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = ["t", "w_hat", "P_w"]
        header += [f"d_hat_{c}" for c in self.channels]
        header += [f"innov_{c}" for c in self.channels]
        header += ["flag"]
        with open(path, "w") as fh:
            fh.write(",".join(header) + "\n")
            for k in range(len(self.times)):
                row = [self.times[k], self.w_hat[k], self.P_w[k],
                       *self.d_hat[k], *self.innovation[k]]
                fh.write(",".join(f"{v:.9g}" for v in row)
                         + f",{int(self.flags[k])}\n")


@dataclass(frozen=True)
class ObservationStream:
    """Timestamped IMU observations, full 5-channel layout (ax, ay, az, wy, wz)."""

    times: np.ndarray       # (K,)
    values: np.ndarray      # (K, 5)

    def __len__(self):
        return len(self.times)


def _static_sinkage_packed(sa: np.ndarray, veh: np.ndarray) -> float:
    N = 0.5 * veh[0] * _dynamics.GRAVITY
    h, status = _kernels.solve_sinkage(
        N, veh[10], 0.0, sa[0], sa[1], sa[2], sa[3], sa[4], sa[5],
        sa[6], sa[7], sa[8], sa[9], sa[10], sa[11], 0.0)
    if status != _kernels.SOLVE_OK:
        raise SimulationError("static sinkage solve failed", 0.0)
    return h


def run_estimation(model: str, scenario: "Scenario",
                   observations: ObservationStream,
                   cfg: UkfConfig | None = None) -> EstimateTrace:
    """Estimate the sinkage exponent from an IMU observation stream.

    The filter propagates its own nominal vehicle state: at each observation
    instant every sigma point's parameter value is written into the soil
    model, the nominal state is advanced one filter period to produce that
    point's predicted observation, and after the measurement update the
    state is re-advanced with the posterior mean and kept.
    """
    if model not in ("coupled", "bicycle"):
        raise ValueError(f"model must be 'coupled' or 'bicycle', got {model!r}")
    if cfg is None:
        cfg = scenario.ukf
    coupled = model == "coupled"
    channels = COUPLED_CHANNELS if coupled else BICYCLE_CHANNELS
    ch_idx = np.array([_CHANNEL_INDEX[c] for c in channels])
    M = len(channels)

    ctx = make_context(scenario.vehicle, scenario.soil, scenario.terrain,
                       scenario.inputs)
    base_sa = ctx.soil_args.copy()
    sigmas = np.array([
        scenario.noise.sigma_accel if c.startswith("a") else scenario.noise.sigma_gyro
        for c in channels])
    # the assumed observation error budgets sensor noise plus the nominal
    # trajectory's drift away from the true one; pure sensor sigma makes the
    # filter chase terrain-phase mismatch once the ride gets rough.  The
    # vertical channels (a_z, w_y) carry that drift almost entirely, so they
    # get a further inflation on top of the common one
    inflation = np.array([
        cfg.noise_inflation * (cfg.vertical_inflation if c in ("az", "wy") else 1.0)
        for c in channels])
    R_e = np.diag((inflation * sigmas) ** 2)
    R_n = np.array([[cfg.process_noise]])

    lam, a_m, a_c = sigma_weights(1, cfg.alpha, cfg.kappa)
    w_hat = np.array([cfg.initial_mean])
    P_w = np.array([[cfg.initial_cov]])

    def packed_for(n_value: float):
        n_eval = min(max(n_value, _EVAL_CLAMP[0]), _EVAL_CLAMP[1])
        sa = base_sa.copy()
        sa[3] = n_eval
        hs = _static_sinkage_packed(sa, ctx.veh)
        return sa, np.array([hs, hs])

    _, hs0 = packed_for(cfg.initial_mean)
    state0 = VehicleState(xdot=scenario.initial_speed,
                          h_f_front=hs0[0], h_f_rear=hs0[1])
    y, mem = initial_arrays(state0)
    hs_nom = hs0

    def shifted_mem(hs_new):
        # changing the parameter moves the static-sinkage reference; shift
        # the stored sinkages by the same amount so the ground displacement
        # z_g = H - (h_f - h_static) stays continuous in the parameter
        m2 = mem.copy()
        m2[0] += hs_new[0] - hs_nom[0]
        m2[1] += hs_new[1] - hs_nom[1]
        return m2

    K_steps = len(observations) - 1
    times = observations.times[1:]
    out_w = np.empty(K_steps)
    out_P = np.empty(K_steps)
    out_dhat = np.empty((K_steps, M))
    out_innov = np.empty((K_steps, M))
    out_gain = np.empty((K_steps, M))
    out_flags = np.zeros(K_steps, dtype=int)

    consecutive_clamped = 0
    W_pts = np.empty((3, 1))
    for k in range(K_steps):
        t_prev = observations.times[k]
        dt_f = observations.times[k + 1] - t_prev
        dt_sub = dt_f / cfg.n_substeps
        w_minus, P_minus = time_update(w_hat, P_w, R_n)
        W_pts = sigma_points(w_minus, P_minus, lam)
        D = np.empty((3, M))
        for i in range(3):
            sa, hs = packed_for(W_pts[i, 0])
            _, _, imu, status = _dynamics.propagate_imu(
                coupled, t_prev, y, shifted_mem(hs), dt_sub, cfg.n_substeps,
                ctx.veh, sa, ctx.terr, ctx.fu_p, ctx.dl_p, hs)
            if status != 0.0:
                raise SimulationError("sigma-point propagation failed", t_prev)
            D[i] = imu[ch_idx]
        d_k = observations.values[k + 1][ch_idx]
        w_hat, P_w, info = measurement_update(
            D, a_m, a_c, d_k, R_e, w_minus, P_minus, W_pts)
        flag = info["flag"]
        clamped = w_hat[0] < PARAM_CLAMP[0] or w_hat[0] > PARAM_CLAMP[1]
        if clamped:
            w_hat[0] = min(max(w_hat[0], PARAM_CLAMP[0]), PARAM_CLAMP[1])
            consecutive_clamped += 1
        else:
            consecutive_clamped = 0
        if consecutive_clamped >= 10:
            flag |= FLAG_DIVERGED
        sa, hs = packed_for(w_hat[0])
        y, mem, imu_nom, status = _dynamics.propagate_imu(
            coupled, t_prev, y, shifted_mem(hs), dt_sub, cfg.n_substeps,
            ctx.veh, sa, ctx.terr, ctx.fu_p, ctx.dl_p, hs)
        hs_nom = hs
        if status != 0.0:
            raise SimulationError("nominal-state propagation failed", t_prev)
        out_w[k] = w_hat[0]
        out_P[k] = P_w[0, 0]
        out_dhat[k] = info["d_hat"]
        out_innov[k] = info["innovation"]
        out_gain[k] = np.ravel(info["gain"])
        out_flags[k] = flag

    return EstimateTrace(model=model, channels=channels, times=times,
                         w_hat=out_w, P_w=out_P, d_hat=out_dhat,
                         innovation=out_innov, gain=out_gain, flags=out_flags)
