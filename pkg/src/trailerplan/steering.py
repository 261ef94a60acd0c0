"""Mappings between trailer-frame (virtual) and car-frame (actual) inputs.

Treating the trailer as a stand-alone steered vehicle with a fictitious
steered axle at the hitch gives exact algebraic maps between that
virtual steer angle and the car's front steer angle, plus the matching
speed conversion.  The maps are mutual inverses away from the
singularity where the mapping denominator vanishes.
"""

import math
from dataclasses import dataclass

from .angles import wrap_angle
from .errors import SingularConfiguration
from .kinematics import ActualControl, SystemState, state_derivative
from .params import VehicleTrailerParams

_DENOM_TOL = 1e-9
_SPEED_TOL = 1e-9


@dataclass(frozen=True)
class VirtualControl:
    """Inputs expressed at the trailer: axle speed and virtual steer."""

    speed: float  # m/s, negative = reverse
    steer: float  # rad

    def __post_init__(self):
        if abs(self.steer) >= 0.5 * math.pi:
            raise ValueError("virtual steer magnitude must be below pi/2")


def virtual_to_actual(hitch_angle: float, virtual_steer: float,
                      p: VehicleTrailerParams) -> float:
    """Front steer angle that realizes a virtual steer command.

    The result lies in (-pi/2, pi/2) and is not clamped to the car's
    steer range; callers check feasibility.
    """
    t = math.tan(virtual_steer)
    den = math.cos(hitch_angle) + math.sin(hitch_angle) * t
    if abs(den) < _DENOM_TOL:
        raise SingularConfiguration("virtual-to-actual mapping is singular here")
    num = math.sin(hitch_angle) - math.cos(hitch_angle) * t
    return math.atan(p.wheelbase / p.rear_axle_to_hitch * num / den)


def actual_to_virtual(hitch_angle: float, steer: float,
                      p: VehicleTrailerParams) -> float:
    """Virtual steer angle realized by a given front steer angle."""
    t = math.tan(steer)
    den = p.wheelbase * math.cos(hitch_angle) \
        + p.rear_axle_to_hitch * math.sin(hitch_angle) * t
    if abs(den) < _DENOM_TOL:
        raise SingularConfiguration("actual-to-virtual mapping is singular here")
    num = p.wheelbase * math.sin(hitch_angle) \
        - p.rear_axle_to_hitch * math.cos(hitch_angle) * t
    return math.atan(num / den)


def trailer_speed(hitch_angle: float, virtual_steer: float,
                  rear_speed: float) -> float:
    """Trailer axle speed produced by a given car rear-axle speed."""
    den = math.cos(hitch_angle) + math.sin(hitch_angle) * math.tan(virtual_steer)
    if abs(den) < _DENOM_TOL:
        raise SingularConfiguration("speed mapping is singular here")
    return rear_speed / den


def rear_speed_for(hitch_angle: float, virtual_steer: float,
                   trailer_axle_speed: float) -> float:
    """Car rear-axle speed that yields the requested trailer axle speed."""
    return trailer_axle_speed * (
        math.cos(hitch_angle) + math.sin(hitch_angle) * math.tan(virtual_steer))


def desired_yaw_rates(hitch_angle: float, v: VirtualControl,
                      p: VehicleTrailerParams):
    """Yaw rates (car, trailer) commanded by a virtual control."""
    t = math.tan(v.steer)
    dyaw = v.speed / p.rear_axle_to_hitch * (
        math.sin(hitch_angle) - math.cos(hitch_angle) * t)
    dtrailer = v.speed / p.hitch_to_trailer_axle * t
    return dyaw, dtrailer


def actual_virtual_steer(state: SystemState, u: ActualControl,
                         p: VehicleTrailerParams) -> float:
    """Virtual steer angle realized by the current motion.

    Reconstructed from the hitch-point velocity direction relative to the
    trailer axis; when the trailer moves backward the direction is
    measured against the reversed axis, so straight reversing reads zero.
    Used for validation, not control.
    """
    _, _, _, dtrailer = state_derivative(state, u, p)
    hitch = state.hitch_angle
    v_t = u.speed * (math.cos(hitch)
                     + p.rear_axle_to_hitch / p.wheelbase * math.sin(hitch)
                     * math.tan(u.steer))
    lt = p.hitch_to_trailer_axle
    c2 = math.cos(state.trailer_yaw)
    s2 = math.sin(state.trailer_yaw)
    vx = v_t * c2 - lt * dtrailer * s2
    vy = v_t * s2 + lt * dtrailer * c2
    if math.hypot(vx, vy) < _SPEED_TOL:
        raise SingularConfiguration("hitch point is stationary")
    angle = math.atan2(vy, vx) - state.trailer_yaw
    if v_t < 0:
        angle -= math.pi
    return wrap_angle(angle)
