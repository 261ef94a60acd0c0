"""Reverse-parking path planning for a car towing a single-axle trailer.

Kinematic model, virtual-tractor steering maps, hitch-angle-aware motion
primitives, occupancy-grid collision checking and a best-first planner,
plus a scenario-driven CLI.
"""

from ._kernels import NUMBA_ENABLED
from .errors import (EmptySteerRange, InvalidStart, JackknifeAbort,
                     ScenarioError, SingularConfiguration, TrailerPlanError)
from .ik_study import SteerProfile, StudyResult, run_study
from .kinematics import (ActualControl, SystemState, Trajectory,
                         concat_trajectories, follow, hitch_point,
                         integrate_step, simulate, state_derivative,
                         trailer_pose)
from .occupancy import (ObstacleSpec, OccupancyGrid, branch_collides,
                        build_grid, centerline_points, inflate, read_pgm,
                        state_collides, write_pgm)
from .params import VehicleTrailerParams, default_params
from .planner import (CostWeights, GoalSpec, PlannedPath, QueueEntry,
                      action_cost, goal_reached, heuristic_cost, plan,
                      total_cost)
from .primitives import (Branch, PrimitiveConfig, expand_node,
                         intermediate_steer, virtual_steer_bounds)
from .scenario import Scenario, build_maps, load_scenario, save_scenario
from .steering import (VirtualControl, actual_to_virtual,
                       actual_virtual_steer, desired_yaw_rates,
                       rear_speed_for, trailer_speed, virtual_to_actual)

__version__ = "0.1.0"
