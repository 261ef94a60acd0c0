"""Geometric constants and input limits of the car-plus-trailer combination."""

import math
from dataclasses import dataclass

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class VehicleTrailerParams:
    """Fixed geometry and input limits.

    Lengths are meters, angles radians.  The hitch sits behind the car's
    rear axle (``rear_axle_to_hitch > 0``), the usual configuration for a
    passenger car, SUV or pickup towing a single-axle trailer.
    """

    wheelbase: float  # front axle to rear axle of the towing car
    rear_axle_to_hitch: float  # rear axle center to hitch ball, > 0
    hitch_to_trailer_axle: float  # hitch ball to trailer axle center
    vehicle_width: float = 1.9
    trailer_width: float = 1.8
    vehicle_front_overhang: float = 0.9  # body beyond the front axle
    trailer_rear_overhang: float = 0.5  # body beyond the trailer axle
    steer_min: float = -0.75  # front steer range of the car
    steer_max: float = 0.75
    virtual_steer_min: float = -0.5  # comfort range of the trailer's virtual steer
    virtual_steer_max: float = 0.5
    max_hitch_angle: float = math.radians(75.0)  # abort cap on |hitch angle|

    def __post_init__(self):
        if self.wheelbase <= 0 or self.rear_axle_to_hitch <= 0 or self.hitch_to_trailer_axle <= 0:
            raise ValueError("wheelbase, rear_axle_to_hitch and hitch_to_trailer_axle must be > 0")
        if not (self.steer_min < 0.0 < self.steer_max):
            raise ValueError("steer range must straddle zero")
        if not (self.virtual_steer_min < 0.0 < self.virtual_steer_max):
            raise ValueError("virtual steer range must straddle zero")
        for a in (self.steer_min, self.steer_max, self.virtual_steer_min, self.virtual_steer_max):
            if abs(a) >= _HALF_PI:
                raise ValueError("steer limits must have magnitude below pi/2")
        for w in (self.vehicle_width, self.trailer_width,
                  self.vehicle_front_overhang, self.trailer_rear_overhang):
            if w < 0:
                raise ValueError("widths and overhangs must be >= 0")
        if not (0.0 < self.max_hitch_angle < _HALF_PI):
            raise ValueError("max_hitch_angle must lie in (0, pi/2)")


def default_params() -> VehicleTrailerParams:
    """Parameter set used by the bundled scenarios: a passenger car towing
    a mid-size single-axle trailer."""
    return VehicleTrailerParams(
        wheelbase=2.896,
        rear_axle_to_hitch=1.159,
        hitch_to_trailer_axle=2.693,
    )
