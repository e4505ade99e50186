"""Shared fixtures: real terrasim CLI output plus handcrafted CSVs."""
import subprocess
import sys
import textwrap

import pytest

SCENARIO = """\
name: viz_sample
soil:
  preset: clay
terrain:
  kind: sinusoidal
  amplitude: 0.05
inputs:
  drive:
    kind: sinusoid
    offset: 0.8
    amplitude: 0.5
    frequency: 0.8
    scale_by_mass: true
  steer:
    kind: sinusoid
    offset: 0.0
    amplitude: 0.2
    frequency: 1.0
observations:
  rate: 100.0
  seed: 42
run:
  duration: 2.0
  dt: 0.001
  output_rate: 100.0
  initial_speed: 1.0
"""


@pytest.fixture(scope="session")
def terrasim_outputs(tmp_path_factory):
    """Trajectory and estimate CSVs produced through the terrasim CLI."""
    root = tmp_path_factory.mktemp("terrasim_out")
    scenario = root / "viz_sample.yaml"
    scenario.write_text(textwrap.dedent(SCENARIO))
    for cmd in (["compare-models"], ["estimate", "--model", "coupled"]):
        subprocess.run(
            [sys.executable, "-m", "terrasim.cli", *cmd,
             "--scenario", str(scenario), "--out", str(root)],
            check=True, capture_output=True, text=True)
    return {
        "coupled": root / "viz_sample_coupled_trajectory.csv",
        "bicycle": root / "viz_sample_bicycle_trajectory.csv",
        "estimate": root / "viz_sample_coupled_estimate.csv",
    }


@pytest.fixture()
def bad_trajectory_csv(tmp_path):
    # drops the Nr column on purpose
    p = tmp_path / "bad_traj.csv"
    p.write_text("t,X,Y\n0.0,0.0,0.0\n0.01,0.02,0.0\n")
    return p


@pytest.fixture()
def bad_estimate_csv(tmp_path):
    # d_hat_ax has no matching innov_ax
    p = tmp_path / "bad_est.csv"
    p.write_text("t,w_hat,P_w,d_hat_ax,flag\n0.01,1.0,0.04,0.1,0\n")
    return p
