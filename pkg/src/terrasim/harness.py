"""Ground-truth generation, estimator comparison, sweeps, and run metrics."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .noise import imu_noise
from .scenario import Scenario
from .sim import SimulationError, Trajectory, simulate
from .ukf import EstimateTrace, ObservationStream, UkfConfig, run_estimation

CONVERGENCE_BAND = 0.05


def generate_observations(scenario: Scenario):
    """Simulate the coupled ground truth and corrupt its IMU samples.

    Returns (noisy ObservationStream, clean Trajectory sampled at the
    observation rate).  Noise is zero-mean Gaussian, independent per
    channel, drawn from counter-based streams keyed by (seed, channel).
    """
    gt_scenario = dataclasses.replace(scenario, output_rate=scenario.obs_rate)
    clean = simulate("coupled", gt_scenario)
    times = clean.times
    values = clean.imu().copy()
    noise = imu_noise(scenario.noise.seed, len(times),
                      scenario.noise.sigma_accel, scenario.noise.sigma_gyro)
    return ObservationStream(times=times, values=values + noise), clean


def mse(trace: EstimateTrace, n_true: float) -> float:
    """Mean square error of the parameter estimate against the true value."""
    if len(trace) == 0:
        raise ValueError("empty estimate trace")
    err = trace.w_hat - n_true
    return float(np.mean(err * err))


def convergence_time(trace: EstimateTrace, n_true: float,
                     band: float = CONVERGENCE_BAND) -> Optional[float]:
    """First time the estimate enters +/-band of truth and never leaves."""
    inside = np.abs(trace.w_hat - n_true) <= band
    if not inside[-1]:
        return None
    # last index where the estimate was outside the band
    outside = np.nonzero(~inside)[0]
    k = 0 if len(outside) == 0 else outside[-1] + 1
    return float(trace.times[k])


@dataclass
class RunReport:
    scenario: str
    model: str
    n_true: float
    mse: Optional[float] = None
    final_estimate: Optional[float] = None
    convergence_time: Optional[float] = None
    error: Optional[str] = None
    files: dict = field(default_factory=dict)

    def to_json(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(dataclasses.asdict(self), indent=2) + "\n")


@dataclass
class ModelComparison:
    coupled: Trajectory
    bicycle: Trajectory
    times: np.ndarray
    separation: np.ndarray       # planar distance between the two trajectories

    @property
    def max_separation(self) -> float:
        return float(np.max(self.separation)) if len(self.separation) else 0.0

    @property
    def final_separation(self) -> float:
        return float(self.separation[-1]) if len(self.separation) else 0.0


def compare_models(scenario: Scenario) -> ModelComparison:
    """Forward-simulate both models with identical inputs; no filtering."""
    coupled = simulate("coupled", scenario)
    bicycle = simulate("bicycle", scenario)
    n = min(len(coupled), len(bicycle))
    dx = coupled.states[:n, 0] - bicycle.states[:n, 0]
    dy = coupled.states[:n, 1] - bicycle.states[:n, 1]
    return ModelComparison(coupled=coupled, bicycle=bicycle,
                           times=coupled.times[:n],
                           separation=np.hypot(dx, dy))


def _estimate_report(model: str, scenario: Scenario,
                     observations: ObservationStream,
                     cfg: Optional[UkfConfig] = None):
    report = RunReport(scenario=scenario.name, model=model, n_true=scenario.n_true)
    trace = None
    try:
        trace = run_estimation(model, scenario, observations, cfg)
        report.mse = mse(trace, scenario.n_true)
        report.final_estimate = float(trace.w_hat[-1])
        report.convergence_time = convergence_time(trace, scenario.n_true)
    except SimulationError as exc:
        report.error = str(exc)
    return trace, report


def compare_estimators(scenario: Scenario, cfg: Optional[UkfConfig] = None):
    """Run both estimators against one shared observation stream.

    Returns (observations, {model: trace}, {model: RunReport}); a failure in
    one estimator is recorded in its report without aborting the other.
    """
    observations, _ = generate_observations(scenario)
    traces = {}
    reports = {}
    for model in ("coupled", "bicycle"):
        trace, report = _estimate_report(model, scenario, observations, cfg)
        traces[model] = trace
        reports[model] = report
    return observations, traces, reports


def sweep_filter_params(scenario: Scenario, alphas, process_noises,
                        model: str = "coupled"):
    """Grid sweep over (alpha, R_n); returns rows ranked ascending by MSE.

    Each row is a dict with alpha, process_noise, mse (None on failure), and
    error.  Failed cells sort last.
    """
    alphas = list(alphas)
    process_noises = list(process_noises)
    if not alphas or not process_noises:
        raise ValueError("sweep grids must be nonempty")
    observations, _ = generate_observations(scenario)
    rows = []
    for alpha in alphas:
        for rn in process_noises:
            cfg = dataclasses.replace(scenario.ukf, alpha=alpha, process_noise=rn)
            row = {"alpha": alpha, "process_noise": rn, "mse": None, "error": None}
            try:
                trace = run_estimation(model, scenario, observations, cfg)
                row["mse"] = mse(trace, scenario.n_true)
            except (SimulationError, ValueError) as exc:
                row["error"] = str(exc)
            rows.append(row)
    rows.sort(key=lambda r: (r["mse"] is None, r["mse"]))
    return rows


def write_sweep_csv(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("alpha,process_noise,mse,error\n")
        for r in rows:
            mse_s = "" if r["mse"] is None else f"{r['mse']:.9g}"
            err_s = "" if r["error"] is None else str(r["error"]).replace(",", ";")
            fh.write(f"{r['alpha']:.9g},{r['process_noise']:.9g},{mse_s},{err_s}\n")
