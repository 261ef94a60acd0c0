"""Deterministic SVG rendering of maps, search trees and solutions.

Plain text output with fixed numeric formatting and element order, no
timestamps and no randomness, so identical inputs give identical bytes.
"""

import math

import numpy as np

from .kinematics import Trajectory, hitch_point, trailer_pose
from .occupancy import OccupancyGrid
from .params import VehicleTrailerParams

_FREE = "#eef3ee"
_INFLATED = "#f4b183"
_OBSTACLE = "#3b3b3b"
_VEHICLE_PATH = "#1f5fd0"
_TRAILER_PATH = "#c02f1f"
_TREE_BRANCH = "#7a9cc6"
_GOAL = "#1a9641"
_START = "#7b3294"


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class _Canvas:
    """World-to-pixel mapping (y up in world, y down in SVG)."""

    def __init__(self, xmin, ymin, xmax, ymax, scale=24.0, margin=12.0):
        self.xmin = xmin
        self.ymax = ymax
        self.scale = scale
        self.margin = margin
        self.width = (xmax - xmin) * scale + 2 * margin
        self.height = (ymax - ymin) * scale + 2 * margin
        self.parts = []

    def to_px(self, x, y):
        return (self.margin + (x - self.xmin) * self.scale,
                self.margin + (self.ymax - y) * self.scale)

    def rect_world(self, x0, y0, x1, y1, fill):
        px0, py1 = self.to_px(x0, y0)
        px1, py0 = self.to_px(x1, y1)
        self.parts.append(
            f'<rect x="{_fmt(px0)}" y="{_fmt(py0)}" width="{_fmt(px1 - px0)}"'
            f' height="{_fmt(py1 - py0)}" fill="{fill}"/>')

    def polyline(self, points, stroke, width=1.5, dashed=False):
        if len(points) < 2:
            return
        coords = " ".join(f"{_fmt(px)},{_fmt(py)}"
                          for px, py in (self.to_px(x, y) for x, y in points))
        dash = ' stroke-dasharray="4 3"' if dashed else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}"'
            f' stroke-width="{_fmt(width)}"{dash}/>')

    def polygon(self, points, stroke, width=1.0):
        coords = " ".join(f"{_fmt(px)},{_fmt(py)}"
                          for px, py in (self.to_px(x, y) for x, y in points))
        self.parts.append(
            f'<polygon points="{coords}" fill="none" stroke="{stroke}"'
            f' stroke-width="{_fmt(width)}"/>')

    def marker(self, x, y, color, radius=4.0):
        px, py = self.to_px(x, y)
        self.parts.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(radius)}"'
            f' fill="{color}"/>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{_fmt(self.width)}" height="{_fmt(self.height)}" '
                f'viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">')
        return "\n".join([head, *self.parts, "</svg>"]) + "\n"


def _occupied_runs(cells):
    """Yield (row, col0, col1) run-length spans of occupied cells."""
    for iy in range(cells.shape[0]):
        row = cells[iy]
        ix = 0
        n = row.shape[0]
        while ix < n:
            if row[ix]:
                j = ix
                while j < n and row[j]:
                    j += 1
                yield iy, ix, j
                ix = j
            else:
                ix += 1


def _grid_extent(grid: OccupancyGrid):
    return (grid.origin_x, grid.origin_y,
            grid.origin_x + grid.n_cols * grid.resolution,
            grid.origin_y + grid.n_rows * grid.resolution)


def _paint_map(canvas: _Canvas, raw: OccupancyGrid, inflated: OccupancyGrid):
    xmin, ymin, xmax, ymax = _grid_extent(raw)
    canvas.rect_world(xmin, ymin, xmax, ymax, _FREE)
    res = raw.resolution
    for iy, ix0, ix1 in _occupied_runs(inflated.cells):
        canvas.rect_world(xmin + ix0 * res, ymin + iy * res,
                          xmin + ix1 * res, ymin + (iy + 1) * res, _INFLATED)
    for iy, ix0, ix1 in _occupied_runs(raw.cells):
        canvas.rect_world(xmin + ix0 * res, ymin + iy * res,
                          xmin + ix1 * res, ymin + (iy + 1) * res, _OBSTACLE)


def _map_canvas(raw: OccupancyGrid) -> _Canvas:
    xmin, ymin, xmax, ymax = _grid_extent(raw)
    span = max(xmax - xmin, ymax - ymin)
    scale = 720.0 / span if span > 0 else 24.0
    return _Canvas(xmin, ymin, xmax, ymax, scale=scale)


def render_map_svg(raw: OccupancyGrid, inflated: OccupancyGrid) -> str:
    """Occupancy map with the inflated margin shown behind the obstacles."""
    canvas = _map_canvas(raw)
    _paint_map(canvas, raw, inflated)
    return canvas.render()


def _trailer_track(traj: Trajectory, p: VehicleTrailerParams):
    return [(x, y) for x, y, _ in
            (trailer_pose(traj.state(i), p) for i in range(traj.n_samples))]


def _vehicle_track(traj: Trajectory):
    return [(row[0], row[1]) for row in traj.states]


def render_tree_svg(raw, inflated, branches, p, start, goal) -> str:
    """Trailer-axle traces of every explored branch plus start/goal marks."""
    canvas = _map_canvas(raw)
    _paint_map(canvas, raw, inflated)
    for traj in branches:
        canvas.polyline(_trailer_track(traj, p), _TREE_BRANCH, width=1.0)
    sx, sy, _ = trailer_pose(start, p)
    canvas.marker(sx, sy, _START)
    canvas.marker(goal.x, goal.y, _GOAL)
    return canvas.render()


def body_outlines(state, p: VehicleTrailerParams):
    """Corner loops (car, trailer) of the body rectangles at a pose."""
    c1, s1 = math.cos(state.yaw), math.sin(state.yaw)
    c2, s2 = math.cos(state.trailer_yaw), math.sin(state.trailer_yaw)
    hx, hy = hitch_point(state, p)

    def rect(cx, cy, ch, sh, back, front, half_w):
        corners = []
        for a, b in ((front, half_w), (front, -half_w),
                     (-back, -half_w), (-back, half_w)):
            corners.append((cx + a * ch - b * sh, cy + a * sh + b * ch))
        return corners

    car = rect(state.x, state.y, c1, s1,
               p.rear_axle_to_hitch, p.wheelbase + p.vehicle_front_overhang,
               p.vehicle_width / 2.0)
    trailer = rect(hx, hy, c2, s2,
                   p.hitch_to_trailer_axle + p.trailer_rear_overhang, 0.0,
                   p.trailer_width / 2.0)
    return car, trailer


def render_solution_svg(raw, inflated, traj, p, start, goal,
                        outline_stride=20) -> str:
    """Axle-center tracks of both bodies plus periodic body outlines."""
    canvas = _map_canvas(raw)
    _paint_map(canvas, raw, inflated)
    if traj is not None:
        indices = list(range(0, traj.n_samples, outline_stride))
        if indices[-1] != traj.n_samples - 1:
            indices.append(traj.n_samples - 1)
        for i in indices:
            car, trailer = body_outlines(traj.state(i), p)
            canvas.polygon(car, _VEHICLE_PATH, width=0.6)
            canvas.polygon(trailer, _TRAILER_PATH, width=0.6)
        canvas.polyline(_vehicle_track(traj), _VEHICLE_PATH, width=2.0)
        canvas.polyline(_trailer_track(traj, p), _TRAILER_PATH, width=2.0)
    sx, sy, _ = trailer_pose(start, p)
    canvas.marker(sx, sy, _START)
    canvas.marker(goal.x, goal.y, _GOAL)
    return canvas.render()


def render_profile_svg(times, desired_deg, actual_deg) -> str:
    """Overlay of desired and realized virtual-steer profiles."""
    times = np.asarray(times)
    desired_deg = np.asarray(desired_deg)
    actual_deg = np.asarray(actual_deg)
    t1 = float(times[-1]) if len(times) else 1.0
    lo = float(min(desired_deg.min(), actual_deg.min(), -1.0))
    hi = float(max(desired_deg.max(), actual_deg.max(), 1.0))
    pad = 0.05 * (hi - lo)
    canvas = _Canvas(0.0, lo - pad, t1, hi + pad,
                     scale=720.0 / t1 if t1 > 0 else 1.0)
    canvas.scale_y = 1.0
    # vertical exaggeration so degrees are readable against seconds
    y_scale = 320.0 / (hi - lo + 2 * pad)
    canvas.height = (hi - lo + 2 * pad) * y_scale + 2 * canvas.margin
    base_to_px = canvas.to_px

    def to_px(x, y):
        px, _ = base_to_px(x, 0.0)
        py = canvas.margin + ((hi + pad) - y) * y_scale
        return px, py

    canvas.to_px = to_px
    canvas.polyline([(0.0, 0.0), (t1, 0.0)], "#999999", width=0.8)
    step = max(1, len(times) // 2000)
    pts_desired = list(zip(times[::step], desired_deg[::step]))
    pts_actual = list(zip(times[::step], actual_deg[::step]))
    canvas.polyline(pts_desired, _GOAL, width=2.0)
    canvas.polyline(pts_actual, _VEHICLE_PATH, width=1.0, dashed=True)
    return canvas.render()
