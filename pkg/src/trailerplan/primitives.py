"""Constant-input reverse branches expanded at each search node.

The admissible virtual-steer interval depends on the hitch angle: the
car's steer range maps through the articulation geometry into a moving
window, which is intersected with a fixed comfort range.  Each branch
freezes the car inputs computed for one commanded virtual steer at the
node's hitch angle and simulates them for a fixed duration, so the
commanded trailer speed and virtual steer hold exactly at the branch
start and drift slightly as the articulation evolves.
"""

import math
from dataclasses import dataclass

from .errors import EmptySteerRange, JackknifeAbort
from .kinematics import ActualControl, SystemState, Trajectory, simulate
from .params import VehicleTrailerParams
from .steering import actual_to_virtual, rear_speed_for, virtual_to_actual

_STEER_SLACK = 1e-9  # numerical slack on the mapped steer-range assertion


@dataclass(frozen=True)
class PrimitiveConfig:
    """Branch generation settings."""

    branch_count: int = 3
    duration: float = 1.0  # simulated time per branch [s]
    trailer_speed: float = -1.0  # commanded at each branch start [m/s]
    dt: float = 0.05  # integrator step [s]

    def __post_init__(self):
        if self.branch_count < 2:
            raise ValueError("branch_count must be >= 2")
        if not self.duration > 0 or not self.dt > 0:
            raise ValueError("duration and dt must be > 0")
        if self.trailer_speed >= 0:
            raise ValueError("trailer_speed must be negative (reverse motion)")
        n = self.duration / self.dt
        if abs(n - round(n)) > 1e-9 or round(n) < 1:
            raise ValueError("duration must be a positive integer multiple of dt")


@dataclass(frozen=True)
class Branch:
    """One simulated primitive: command, frozen car inputs, motion."""

    index: int  # position in the deterministic command order
    command: float  # commanded virtual steer at the branch start [rad]
    actual: ActualControl
    trajectory: Trajectory

    @property
    def terminal(self) -> SystemState:
        return self.trajectory.terminal_state


def virtual_steer_bounds(hitch_angle: float, p: VehicleTrailerParams):
    """Admissible virtual-steer interval (lo, hi) at a hitch angle.

    The car steer endpoints are mapped into virtual-steer space (the map
    is decreasing, so the endpoints swap), then intersected with the
    comfort range.  Raises EmptySteerRange when the intersection is
    empty.
    """
    if abs(hitch_angle) >= 0.5 * math.pi:
        raise ValueError("hitch angle magnitude must be below pi/2")
    a = actual_to_virtual(hitch_angle, p.steer_max, p)
    b = actual_to_virtual(hitch_angle, p.steer_min, p)
    lo_mapped, hi_mapped = (a, b) if a <= b else (b, a)
    lo = max(lo_mapped, p.virtual_steer_min)
    hi = min(hi_mapped, p.virtual_steer_max)
    if lo > hi:
        raise EmptySteerRange("no admissible virtual steer at this hitch angle")
    return lo, hi


def intermediate_steer(bounds) -> float:
    """Midpoint of a virtual-steer interval."""
    lo, hi = bounds
    return 0.5 * (hi + lo)


def branch_commands(bounds, branch_count: int):
    """Commanded virtual steers in deterministic order.

    Endpoints always come first (hi, then lo); for more than three
    branches the interior fills with evenly spaced values, high to low.
    """
    lo, hi = bounds
    if branch_count == 2:
        return [hi, lo]
    if branch_count == 3:
        return [hi, lo, intermediate_steer(bounds)]
    step = (hi - lo) / (branch_count - 1)
    interior = [lo + i * step for i in range(branch_count - 2, 0, -1)]
    return [hi, lo] + interior


def expand_node(state: SystemState, p: VehicleTrailerParams,
                cfg: PrimitiveConfig):
    """Simulate one constant-input branch per commanded virtual steer.

    Returns an empty list when the steer interval is empty; branches that
    trip the hitch-angle cap are dropped.  Surviving branches keep their
    command-slot index so callers can name actions deterministically.
    """
    try:
        bounds = virtual_steer_bounds(state.hitch_angle, p)
    except EmptySteerRange:
        return []
    hitch = state.hitch_angle
    branches = []
    for slot, command in enumerate(branch_commands(bounds, cfg.branch_count)):
        steer = virtual_to_actual(hitch, command, p)
        assert p.steer_min - _STEER_SLACK <= steer <= p.steer_max + _STEER_SLACK
        steer = min(max(steer, p.steer_min), p.steer_max)
        speed = rear_speed_for(hitch, command, cfg.trailer_speed)
        control = ActualControl(speed=speed, steer=steer)
        try:
            traj = simulate(state, control, p, cfg.duration, cfg.dt)
        except JackknifeAbort:
            continue
        branches.append(Branch(index=slot, command=command,
                               actual=control, trajectory=traj))
    return branches
