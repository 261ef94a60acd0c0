"""Virtual-steer tracking study.

A desired sinusoidal virtual-steer profile is converted into a
front-steer command profile by integrating the trailer-frame model on a
refined time grid, the command profile is driven through the full pose
model, and the realized virtual steer is reconstructed from the
hitch-velocity direction at every sample.  In continuous time the
realized profile equals the desired one identically, so the reported
residual measures pure integration error and shrinks at fourth order in
the step size.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import JackknifeAbort, SingularConfiguration
from .kinematics import ActualControl, SystemState
from .params import VehicleTrailerParams
from .steering import actual_virtual_steer


@dataclass(frozen=True)
class SteerProfile:
    """Sinusoidal virtual-steer command."""

    amplitude: float  # rad
    period: float  # s

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be > 0")
        if abs(self.amplitude) >= 0.5 * math.pi:
            raise ValueError("amplitude magnitude must be below pi/2")

    def value(self, t: float) -> float:
        return self.amplitude * math.sin(2.0 * math.pi * t / self.period)


@dataclass(frozen=True)
class StudyResult:
    """Per-sample profiles (radians) and the worst tracking error."""

    times: np.ndarray
    desired: np.ndarray
    actual: np.ndarray
    steer: np.ndarray  # front-steer command applied at each sample
    states: np.ndarray
    max_error: float  # rad


def run_study(p: VehicleTrailerParams, profile: SteerProfile, duration: float,
              dt: float, rear_speed: float = -1.0, refine: int = 2) -> StudyResult:
    """Run the tracking study from a straight rest pose.

    ``refine`` (even) sets how much finer the command-profile grid is
    than the forward integration step, so RK4 stage times land exactly on
    profile nodes.
    """
    if refine < 2 or refine % 2:
        raise ValueError("refine must be an even integer >= 2")
    n = duration / dt
    n_steps = round(n)
    if n_steps < 1 or abs(n - n_steps) > 1e-9:
        raise ValueError("duration must be a positive integer multiple of dt")
    n_steps = int(n_steps)

    dt_ref = dt / refine
    steer_profile, bad = _kernels.ik_reference(
        n_steps * refine, dt_ref, profile.amplitude, profile.period,
        rear_speed, p.wheelbase, p.rear_axle_to_hitch, p.hitch_to_trailer_axle)
    if bad >= 0:
        raise SingularConfiguration(
            f"steering map singular at t={bad * dt_ref:.6f} s")

    states, abort = _kernels.ik_forward(
        steer_profile, refine, rear_speed, p.wheelbase, p.rear_axle_to_hitch,
        p.hitch_to_trailer_axle, dt, n_steps, p.max_hitch_angle)
    if abort >= 0:
        raise JackknifeAbort(
            f"hitch cap exceeded at t={(abort + 1) * dt:.6f} s")

    times = np.arange(n_steps + 1) * dt
    desired = np.array([profile.value(t) for t in times])
    steer = steer_profile[::refine].copy()
    actual = np.empty(n_steps + 1)
    for k in range(n_steps + 1):
        state = SystemState(states[k, 0], states[k, 1], states[k, 2], states[k, 3])
        actual[k] = actual_virtual_steer(
            state, ActualControl(speed=rear_speed, steer=steer[k]), p)
    max_error = float(np.max(np.abs(actual - desired)))
    return StudyResult(times=times, desired=desired, actual=actual,
                       steer=steer, states=states, max_error=max_error)
