"""Scenario configuration: YAML schema, validation, presets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import terrain as terrain_mod
from .soil import SoilParams, load_preset, soil_from_dict
from .ukf import UkfConfig
from .vehicle import InputSignal, Schedule, VehicleParams, load_vehicle_preset

SCHEMA_VERSION = 1


class ScenarioError(Exception):
    """Malformed scenario configuration; message names the offending key."""


@dataclass(frozen=True)
class NoiseSpec:
    sigma_accel: float = 0.2     # m/s^2, applied to a_x, a_y, a_z
    sigma_gyro: float = 0.0175   # rad/s, applied to w_y, w_z
    seed: int = 0


@dataclass(frozen=True)
class Scenario:
    name: str
    soil: SoilParams             # ground-truth soil (n_true included)
    soil_preset: str
    n_true: float
    terrain: terrain_mod.TerrainField
    vehicle: VehicleParams
    inputs: InputSignal
    duration: float
    dt: float
    output_rate: float
    obs_rate: float
    noise: NoiseSpec
    initial_speed: float
    ukf: UkfConfig
    sweep_alphas: tuple = ()
    sweep_process_noises: tuple = ()

    @property
    def obs_period(self) -> float:
        return 1.0 / self.obs_rate


def _schedule_from(d, key, scale_by_mass_default=False) -> Schedule:
    if not isinstance(d, dict):
        raise ScenarioError(f"{key}: expected a mapping")
    kind = d.get("kind", "constant")
    try:
        return Schedule(
            kind=kind,
            offset=float(d.get("offset", d.get("value", 0.0))),
            amplitude=float(d.get("amplitude", 0.0)),
            frequency=float(d.get("frequency", 0.0)),
            scale_by_mass=bool(d.get("scale_by_mass", scale_by_mass_default)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{key}: {exc}") from exc


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ScenarioError(f"missing required key '{where}.{key}'")
    return d[key]


def _reject_unknown(d: dict, allowed, where: str):
    unknown = set(d) - set(allowed)
    if unknown:
        key = sorted(unknown)[0]
        raise ScenarioError(f"unknown key '{where}.{key}'"
                            f" (allowed: {', '.join(sorted(allowed))})")


def scenario_from_dict(cfg: dict, name: str = "scenario") -> Scenario:
    if not isinstance(cfg, dict):
        raise ScenarioError("scenario file must contain a mapping at top level")
    schema = cfg.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported value for 'schema': {schema}")
    _reject_unknown(cfg, ("schema", "name", "soil", "terrain", "vehicle",
                          "inputs", "run", "observations", "ukf", "sweep"), "scenario")

    soil_cfg = cfg.get("soil", {})
    _reject_unknown(soil_cfg, ("preset", "n_true", "name", "n", "k_c", "k_phi",
                               "c", "phi_deg", "k_x", "k_y",
                               "a0", "a1", "b0", "b1"), "soil")
    preset = soil_cfg.get("preset", "")
    try:
        if preset:
            soil, n_true = load_preset(preset)
        else:
            soil = soil_from_dict(soil_cfg)
            n_true = soil.n
    except FileNotFoundError as exc:
        raise ScenarioError(f"soil.preset: {exc}") from exc
    except (KeyError, ValueError) as exc:
        raise ScenarioError(f"soil: {exc}") from exc
    if "n_true" in soil_cfg:
        n_true = float(soil_cfg["n_true"])
        soil = soil.with_n(n_true)

    terr_cfg = cfg.get("terrain", {"kind": "flat"})
    _reject_unknown(terr_cfg, ("kind", "amplitude"), "terrain")
    kind = terr_cfg.get("kind", "flat")
    try:
        if kind == "flat":
            terr = terrain_mod.flat()
        elif kind == "sinusoidal":
            terr = terrain_mod.sinusoidal(float(_require(terr_cfg, "amplitude", "terrain")))
        else:
            raise ScenarioError(f"terrain.kind: unknown kind {kind!r}")
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"terrain: {exc}") from exc

    veh_cfg = cfg.get("vehicle", {})
    _reject_unknown(veh_cfg, ("preset", "slip"), "vehicle")
    veh_preset = veh_cfg.get("preset", "mrzr_like")
    try:
        vehicle = load_vehicle_preset(veh_preset)
    except FileNotFoundError as exc:
        raise ScenarioError(f"vehicle.preset: {exc}") from exc
    if "slip" in veh_cfg:
        from dataclasses import replace
        vehicle = replace(vehicle, slip=float(veh_cfg["slip"]))

    in_cfg = cfg.get("inputs", {})
    _reject_unknown(in_cfg, ("drive", "steer"), "inputs")
    for sub in ("drive", "steer"):
        if sub in in_cfg and isinstance(in_cfg[sub], dict):
            _reject_unknown(in_cfg[sub],
                            ("kind", "value", "offset", "amplitude",
                             "frequency", "scale_by_mass"), f"inputs.{sub}")
    inputs = InputSignal(
        drive=_schedule_from(in_cfg.get("drive", {}), "inputs.drive",
                             scale_by_mass_default=True),
        steer=_schedule_from(in_cfg.get("steer", {}), "inputs.steer"),
    )

    run_cfg = cfg.get("run", {})
    _reject_unknown(run_cfg, ("duration", "dt", "output_rate", "initial_speed"),
                    "run")
    try:
        duration = float(run_cfg.get("duration", 50.0))
        dt = float(run_cfg.get("dt", 1e-3))
        output_rate = float(run_cfg.get("output_rate", 100.0))
        initial_speed = float(run_cfg.get("initial_speed", 1.0))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"run: {exc}") from exc
    if duration < 0:
        raise ScenarioError("run.duration must be nonnegative")
    if dt <= 0:
        raise ScenarioError("run.dt must be positive")

    obs_cfg = cfg.get("observations", {})
    _reject_unknown(obs_cfg, ("rate", "sigma_accel", "sigma_gyro", "seed"),
                    "observations")
    try:
        obs_rate = float(obs_cfg.get("rate", 100.0))
        noise = NoiseSpec(
            sigma_accel=float(obs_cfg.get("sigma_accel", 0.2)),
            sigma_gyro=float(obs_cfg.get("sigma_gyro", 0.0175)),
            seed=int(obs_cfg.get("seed", 0)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"observations: {exc}") from exc

    for rate, key in ((output_rate, "run.output_rate"), (obs_rate, "observations.rate")):
        if rate <= 0:
            raise ScenarioError(f"{key} must be positive")
        period = 1.0 / rate
        ratio = period / dt
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ScenarioError(
                f"{key}: period {period} must be an integer multiple of run.dt {dt}")

    ukf_cfg = cfg.get("ukf", {})
    _reject_unknown(ukf_cfg, ("alpha", "kappa", "process_noise",
                              "initial_mean", "initial_cov", "n_substeps",
                              "noise_inflation", "vertical_inflation"),
                    "ukf")
    try:
        defaults = UkfConfig()
        ukf = UkfConfig(
            alpha=float(ukf_cfg.get("alpha", defaults.alpha)),
            kappa=float(ukf_cfg.get("kappa", defaults.kappa)),
            process_noise=float(ukf_cfg.get("process_noise", defaults.process_noise)),
            initial_mean=float(ukf_cfg.get("initial_mean", defaults.initial_mean)),
            initial_cov=float(ukf_cfg.get("initial_cov", defaults.initial_cov)),
            n_substeps=int(ukf_cfg.get("n_substeps", defaults.n_substeps)),
            noise_inflation=float(ukf_cfg.get("noise_inflation",
                                              defaults.noise_inflation)),
            vertical_inflation=float(ukf_cfg.get("vertical_inflation",
                                                 defaults.vertical_inflation)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"ukf: {exc}") from exc

    sweep_cfg = cfg.get("sweep", {})
    _reject_unknown(sweep_cfg, ("alphas", "process_noises"), "sweep")
    sweep_alphas = tuple(float(a) for a in sweep_cfg.get("alphas", ()))
    sweep_rns = tuple(float(r) for r in sweep_cfg.get("process_noises", ()))

    return Scenario(
        name=cfg.get("name", name),
        soil=soil, soil_preset=preset, n_true=n_true,
        terrain=terr, vehicle=vehicle, inputs=inputs,
        duration=duration, dt=dt, output_rate=output_rate,
        obs_rate=obs_rate, noise=noise, initial_speed=initial_speed,
        ukf=ukf, sweep_alphas=sweep_alphas, sweep_process_noises=sweep_rns,
    )


def load_scenario(path) -> Scenario:
    p = Path(path)
    if not p.is_file():
        raise ScenarioError(f"scenario file not found: {p}")
    try:
        cfg = yaml.safe_load(p.read_text())
    except yaml.YAMLError as exc:
        raise ScenarioError(f"invalid YAML in {p}: {exc}") from exc
    return scenario_from_dict(cfg, name=p.stem)
