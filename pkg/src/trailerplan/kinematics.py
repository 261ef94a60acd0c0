"""Forward kinematics of a car towing a single-axle trailer.

The integrated state is minimal: rear-axle position of the car plus the
two body headings.  The trailer axle position follows algebraically from
the rigid hitch link and is derived on demand, never integrated, so the
link constraint holds exactly at every sample.  Controls are the car's
rear-axle speed (negative in reverse) and its front steer angle.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .angles import wrap_angle
from .errors import JackknifeAbort
from .params import VehicleTrailerParams

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class SystemState:
    """Planar pose of the combination.

    ``x``/``y`` locate the car's rear-axle center; ``yaw`` is the car
    heading and ``trailer_yaw`` the trailer heading, both stored wrapped
    to (-pi, pi].
    """

    x: float
    y: float
    yaw: float
    trailer_yaw: float

    def __post_init__(self):
        object.__setattr__(self, "yaw", wrap_angle(self.yaw))
        object.__setattr__(self, "trailer_yaw", wrap_angle(self.trailer_yaw))

    @property
    def hitch_angle(self) -> float:
        """Articulation angle (car heading minus trailer heading)."""
        return wrap_angle(self.yaw - self.trailer_yaw)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.yaw, self.trailer_yaw])


@dataclass(frozen=True)
class ActualControl:
    """Inputs applied at the car: signed rear-axle speed and front steer."""

    speed: float  # m/s, negative = reverse
    steer: float  # rad

    def __post_init__(self):
        if not (math.isfinite(self.speed) and math.isfinite(self.steer)):
            raise ValueError("control values must be finite")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled motion history.

    ``states`` rows are (x, y, yaw, trailer_yaw); ``controls`` rows are
    (speed, steer) holding the input that produced the step ending at the
    row's time (row 0 repeats the first input).  Sample times are the row
    index times ``dt``.
    """

    dt: float
    states: np.ndarray
    controls: np.ndarray

    def __post_init__(self):
        states = np.ascontiguousarray(self.states, dtype=float)
        controls = np.ascontiguousarray(self.controls, dtype=float)
        if states.ndim != 2 or states.shape[1] != 4:
            raise ValueError("states must have shape (n, 4)")
        if controls.shape != (states.shape[0], 2):
            raise ValueError("controls must have shape (n, 2)")
        if states.shape[0] < 2:
            raise ValueError("a trajectory needs at least two samples")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        states.setflags(write=False)
        controls.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "controls", controls)

    @property
    def n_samples(self) -> int:
        return self.states.shape[0]

    @property
    def duration(self) -> float:
        return (self.n_samples - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    def state(self, i: int) -> SystemState:
        row = self.states[i]
        return SystemState(row[0], row[1], row[2], row[3])

    def control(self, i: int) -> ActualControl:
        row = self.controls[i]
        return ActualControl(row[0], row[1])

    @property
    def terminal_state(self) -> SystemState:
        return self.state(self.n_samples - 1)

    def samples(self):
        """Yield (t, SystemState, ActualControl) triples."""
        for i in range(self.n_samples):
            yield i * self.dt, self.state(i), self.control(i)


def state_derivative(state: SystemState, u: ActualControl,
                     p: VehicleTrailerParams):
    """Time derivatives (dx, dy, dyaw, dtrailer_yaw) of the pose state."""
    hitch = state.hitch_angle
    if abs(hitch) >= _HALF_PI:
        raise ValueError("hitch angle magnitude must be below pi/2")
    if abs(u.steer) >= _HALF_PI:
        raise ValueError("steer magnitude must be below pi/2")
    tan_steer = math.tan(u.steer)
    dx = u.speed * math.cos(state.yaw)
    dy = u.speed * math.sin(state.yaw)
    dyaw = u.speed / p.wheelbase * tan_steer
    dtrailer = u.speed / p.hitch_to_trailer_axle * (
        math.sin(hitch) - p.rear_axle_to_hitch / p.wheelbase * math.cos(hitch) * tan_steer)
    return dx, dy, dyaw, dtrailer


def trailer_pose(state: SystemState, p: VehicleTrailerParams):
    """Trailer axle position and heading (x_t, y_t, trailer_yaw).

    Pure rigid-link geometry: hitch sits ``rear_axle_to_hitch`` behind
    the car's rear axle, the trailer axle ``hitch_to_trailer_axle``
    behind the hitch along the trailer heading.
    """
    x_t = state.x - p.rear_axle_to_hitch * math.cos(state.yaw) \
        - p.hitch_to_trailer_axle * math.cos(state.trailer_yaw)
    y_t = state.y - p.rear_axle_to_hitch * math.sin(state.yaw) \
        - p.hitch_to_trailer_axle * math.sin(state.trailer_yaw)
    return x_t, y_t, state.trailer_yaw


def hitch_point(state: SystemState, p: VehicleTrailerParams):
    """Hitch ball position (x, y)."""
    return (state.x - p.rear_axle_to_hitch * math.cos(state.yaw),
            state.y - p.rear_axle_to_hitch * math.sin(state.yaw))


def integrate_step(state: SystemState, u: ActualControl,
                   p: VehicleTrailerParams, dt: float) -> SystemState:
    """One fixed RK4 step with the input held constant.

    Raises JackknifeAbort when the hitch angle exceeds the cap at the end
    of the step.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    states, abort = _kernels.rollout(
        state.x, state.y, state.yaw, state.trailer_yaw,
        u.speed, u.steer,
        p.wheelbase, p.rear_axle_to_hitch, p.hitch_to_trailer_axle,
        dt, 1, p.max_hitch_angle)
    if abort >= 0:
        raise JackknifeAbort("hitch angle exceeded the safety cap")
    row = states[1]
    return SystemState(row[0], row[1], row[2], row[3])


def _step_count(duration: float, dt: float) -> int:
    n = duration / dt
    n_int = round(n)
    if n_int < 1 or abs(n - n_int) > 1e-9:
        raise ValueError("duration must be a positive integer multiple of dt")
    return int(n_int)


def simulate(state: SystemState, u: ActualControl, p: VehicleTrailerParams,
             duration: float, dt: float) -> Trajectory:
    """Roll the model forward under a constant input.

    Returns duration/dt + 1 samples.  On a hitch-cap violation raises
    JackknifeAbort with the partial trajectory (up to and including the
    offending sample) attached.
    """
    n_steps = _step_count(duration, dt)
    states, abort = _kernels.rollout(
        state.x, state.y, state.yaw, state.trailer_yaw,
        u.speed, u.steer,
        p.wheelbase, p.rear_axle_to_hitch, p.hitch_to_trailer_axle,
        dt, n_steps, p.max_hitch_angle)
    if abort >= 0:
        n_kept = abort + 2  # rows up to and including the violating state
        controls = np.broadcast_to([u.speed, u.steer], (n_kept, 2)).copy()
        partial = Trajectory(dt=dt, states=states[:n_kept].copy(), controls=controls)
        raise JackknifeAbort("hitch angle exceeded the safety cap", trajectory=partial)
    controls = np.broadcast_to([u.speed, u.steer], (n_steps + 1, 2)).copy()
    return Trajectory(dt=dt, states=states, controls=controls)


def follow(state: SystemState, inputs, p: VehicleTrailerParams,
           step_duration: float, dt: float) -> Trajectory:
    """Replay a sequence of piecewise-constant inputs open loop.

    Each input is held for ``step_duration``.  The result is the exact
    concatenation of the per-input simulations (junction samples are not
    duplicated), so replaying a planner solution reproduces its stored
    trajectory bit for bit.
    """
    inputs = list(inputs)
    if not inputs:
        raise ValueError("need at least one input to follow")
    segments = []
    current = state
    for u in inputs:
        seg = simulate(current, u, p, step_duration, dt)
        segments.append(seg)
        current = seg.terminal_state
    return concat_trajectories(segments)


def concat_trajectories(segments) -> Trajectory:
    """Join back-to-back trajectories, dropping duplicated junction rows."""
    segments = list(segments)
    if not segments:
        raise ValueError("nothing to concatenate")
    dt = segments[0].dt
    for seg in segments:
        if seg.dt != dt:
            raise ValueError("all segments must share dt")
    states = np.concatenate([segments[0].states]
                            + [seg.states[1:] for seg in segments[1:]])
    controls = np.concatenate([segments[0].controls]
                              + [seg.controls[1:] for seg in segments[1:]])
    return Trajectory(dt=dt, states=states, controls=controls)
