"""Angle helpers. All stored headings live in the interval (-pi, pi]."""

import math

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]; idempotent, maps -pi to +pi."""
    return math.pi - (math.pi - a) % TWO_PI
