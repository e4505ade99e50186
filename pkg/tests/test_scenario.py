"""Scenario schema: presets, validation, unknown-key rejection."""
import pytest

from terrasim.scenario import (ScenarioError, load_scenario,
                               scenario_from_dict)


def minimal():
    return {"soil": {"preset": "clay"}}


def test_defaults():
    sc = scenario_from_dict(minimal())
    assert sc.n_true == 0.5
    assert sc.duration == 50.0
    assert sc.dt == 1e-3
    assert sc.obs_rate == 100.0
    assert sc.obs_period == 0.01
    assert sc.noise.sigma_accel == 0.2
    assert sc.noise.sigma_gyro == 0.0175
    assert sc.terrain.kind == "flat"


def test_soil_presets_load():
    clay = scenario_from_dict({"soil": {"preset": "clay"}})
    sand = scenario_from_dict({"soil": {"preset": "sand"}})
    assert clay.n_true == 0.5 and sand.n_true == 1.1
    assert sand.soil.phi > clay.soil.phi


def test_n_true_override():
    sc = scenario_from_dict({"soil": {"preset": "clay", "n_true": 0.4}})
    assert sc.n_true == 0.4
    assert sc.soil.n == 0.4


def test_inline_soil_kn_unit_conversion():
    sc = scenario_from_dict({"soil": {
        "n": 0.5, "k_c": 13.19, "k_phi": 692.15, "c": 4140.0, "phi_deg": 13.0,
        "k_x": 0.01, "k_y": 0.01, "a0": 0.4, "a1": 0.15, "b0": 0.0, "b1": 0.0}})
    assert sc.soil.k_c == pytest.approx(13.19e3)
    assert sc.soil.k_phi == pytest.approx(692.15e3)


def test_unknown_top_level_key():
    cfg = minimal()
    cfg["noize"] = {}
    with pytest.raises(ScenarioError, match="noize"):
        scenario_from_dict(cfg)


def test_unknown_nested_key_named():
    cfg = minimal()
    cfg["run"] = {"durration": 10.0}
    with pytest.raises(ScenarioError, match="run.durration"):
        scenario_from_dict(cfg)
    cfg = minimal()
    cfg["observations"] = {"sigma": 0.2}
    with pytest.raises(ScenarioError, match="observations.sigma"):
        scenario_from_dict(cfg)


def test_unknown_soil_preset():
    with pytest.raises(ScenarioError, match="preset"):
        scenario_from_dict({"soil": {"preset": "loam"}})


def test_unknown_terrain_kind():
    cfg = minimal()
    cfg["terrain"] = {"kind": "fractal"}
    with pytest.raises(ScenarioError):
        scenario_from_dict(cfg)


def test_sinusoidal_requires_amplitude():
    cfg = minimal()
    cfg["terrain"] = {"kind": "sinusoidal"}
    with pytest.raises(ScenarioError, match="amplitude"):
        scenario_from_dict(cfg)


def test_rate_must_divide_dt():
    cfg = minimal()
    cfg["run"] = {"dt": 1e-3, "output_rate": 300.0}
    with pytest.raises(ScenarioError, match="output_rate"):
        scenario_from_dict(cfg)


def test_negative_duration_rejected():
    cfg = minimal()
    cfg["run"] = {"duration": -1.0}
    with pytest.raises(ScenarioError):
        scenario_from_dict(cfg)


def test_bad_schema_version():
    cfg = minimal()
    cfg["schema"] = 99
    with pytest.raises(ScenarioError, match="schema"):
        scenario_from_dict(cfg)


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError, match="not found"):
        load_scenario(tmp_path / "nope.yaml")


def test_invalid_yaml(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("soil: [unterminated\n")
    with pytest.raises(ScenarioError, match="YAML"):
        load_scenario(p)


def test_shipped_scenarios_load():
    import glob
    from pathlib import Path
    root = Path(__file__).resolve().parent.parent / "scenarios"
    paths = sorted(glob.glob(str(root / "*.yaml")))
    assert len(paths) >= 11
    for p in paths:
        sc = load_scenario(p)
        assert sc.duration > 0


def test_ukf_block_parsed():
    cfg = minimal()
    cfg["ukf"] = {"alpha": 0.9, "process_noise": 1e-5, "initial_mean": 1.2,
                  "noise_inflation": 4.0}
    sc = scenario_from_dict(cfg)
    assert sc.ukf.alpha == 0.9
    assert sc.ukf.process_noise == 1e-5
    assert sc.ukf.initial_mean == 1.2
    assert sc.ukf.noise_inflation == 4.0


def test_vehicle_slip_override():
    cfg = minimal()
    cfg["vehicle"] = {"slip": 0.2}
    sc = scenario_from_dict(cfg)
    assert sc.vehicle.slip == 0.2
