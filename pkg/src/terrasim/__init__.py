"""Off-road vehicle simulation on deformable terrain with online estimation
of the Bekker sinkage exponent from synthetic IMU data."""

from .soil import SoilParams, WheelGeom, WheelKinematics, load_preset
from .terrain import TerrainField, flat, sinusoidal
from .terramech import (ContactGeometry, NoBracketError, NonConvergenceError,
                        WheelForces, contact_geometry, integrate_forces,
                        side_slip_angles, sinkage_profile, solve_sinkage,
                        stresses_at, wheel_interaction)
from .vehicle import (ImuObservation, InputSignal, Schedule, VehicleParams,
                      VehicleState, bicycle_derivatives, dynamic_normal,
                      halfcar_derivatives, imu_output, load_vehicle_preset,
                      static_normal)
from .sim import (SimulationError, Trajectory, bicycle_step, coupled_step,
                  make_context, simulate, static_sinkage)
from .ukf import (EstimateTrace, ObservationStream, UkfConfig,
                  measurement_update, run_estimation, sigma_points,
                  sigma_weights, time_update)
from .scenario import Scenario, ScenarioError, load_scenario
from .harness import (compare_estimators, compare_models, convergence_time,
                      generate_observations, mse, sweep_filter_params)

__version__ = "0.1.0"
