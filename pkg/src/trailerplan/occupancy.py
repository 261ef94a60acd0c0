"""Binary occupancy maps: rasterization, inflation, collision checks.

Cell-center semantics throughout: a cell is occupied by a rectangle iff
its center lies inside (boundary inclusive), inflation marks a free cell
iff its center is within the inflation radius of an occupied cell's
center, and collision checks probe the cells under sampled body
centerline points.  Queries outside the grid count as occupied, so the
map boundary acts as a wall.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .kinematics import SystemState, Trajectory
from .params import VehicleTrailerParams

# sample-spacing cap along body centerlines used by collision checks [m]
MAX_CENTERLINE_SPACING = 0.05


@dataclass(frozen=True)
class ObstacleSpec:
    """Rotated rectangle: center, half extents along/across the heading."""

    center_x: float
    center_y: float
    half_length: float
    half_width: float
    heading: float = 0.0

    def __post_init__(self):
        if self.half_length <= 0 or self.half_width <= 0:
            raise ValueError("half extents must be > 0")

    def contains(self, px: float, py: float) -> bool:
        """Boundary-inclusive membership test."""
        dx = px - self.center_x
        dy = py - self.center_y
        c = math.cos(self.heading)
        s = math.sin(self.heading)
        local_x = c * dx + s * dy
        local_y = c * dy - s * dx
        return abs(local_x) <= self.half_length and abs(local_y) <= self.half_width


@dataclass(frozen=True)
class OccupancyGrid:
    """Row-major boolean raster; cells[iy, ix], True = occupied."""

    origin_x: float  # world position of the corner of cell (0, 0)
    origin_y: float
    resolution: float  # m per cell
    cells: np.ndarray

    def __post_init__(self):
        if not self.resolution > 0:
            raise ValueError("resolution must be > 0")
        cells = np.ascontiguousarray(self.cells, dtype=bool)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise ValueError("cells must be a non-empty 2-d array")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def n_rows(self) -> int:
        return self.cells.shape[0]

    @property
    def n_cols(self) -> int:
        return self.cells.shape[1]

    def cell_index(self, px: float, py: float):
        """(ix, iy) of the cell containing a point; may be out of range."""
        ix = int(math.floor((px - self.origin_x) / self.resolution))
        iy = int(math.floor((py - self.origin_y) / self.resolution))
        return ix, iy

    def cell_center(self, ix: int, iy: int):
        return (self.origin_x + (ix + 0.5) * self.resolution,
                self.origin_y + (iy + 0.5) * self.resolution)

    def occupied_at(self, px: float, py: float) -> bool:
        """Occupancy at a world point; outside the grid counts occupied."""
        ix, iy = self.cell_index(px, py)
        if ix < 0 or iy < 0 or ix >= self.n_cols or iy >= self.n_rows:
            return True
        return bool(self.cells[iy, ix])


def _grid_shape(bounds, resolution):
    xmin, ymin, xmax, ymax = bounds
    if not (xmax > xmin and ymax > ymin):
        raise ValueError("bounds must satisfy xmax > xmin and ymax > ymin")
    n_cols = max(1, int(math.ceil((xmax - xmin) / resolution - 1e-9)))
    n_rows = max(1, int(math.ceil((ymax - ymin) / resolution - 1e-9)))
    return n_rows, n_cols


def build_grid(bounds, resolution: float, obstacles) -> OccupancyGrid:
    """Rasterize rectangles over bounds (xmin, ymin, xmax, ymax).

    A cell is occupied iff its center lies inside any rectangle.
    """
    if not resolution > 0:
        raise ValueError("resolution must be > 0")
    n_rows, n_cols = _grid_shape(bounds, resolution)
    xmin, ymin = bounds[0], bounds[1]
    cells = np.zeros((n_rows, n_cols), dtype=bool)
    if obstacles:
        cx = xmin + (np.arange(n_cols) + 0.5) * resolution
        cy = ymin + (np.arange(n_rows) + 0.5) * resolution
        px = cx[None, :]
        py = cy[:, None]
        for rect in obstacles:
            cells |= _rect_mask(rect, px, py)
    return OccupancyGrid(origin_x=xmin, origin_y=ymin,
                         resolution=resolution, cells=cells)


def _rect_mask(rect: ObstacleSpec, px, py):
    # elementwise mirror of ObstacleSpec.contains
    dx = px - rect.center_x
    dy = py - rect.center_y
    c = math.cos(rect.heading)
    s = math.sin(rect.heading)
    local_x = c * dx + s * dy
    local_y = c * dy - s * dx
    return (np.abs(local_x) <= rect.half_length) & (np.abs(local_y) <= rect.half_width)


def stamp_rectangles(grid: OccupancyGrid, rectangles) -> OccupancyGrid:
    """Return a copy of the grid with extra rectangles marked occupied."""
    if not rectangles:
        return grid
    cells = np.array(grid.cells)
    cx = grid.origin_x + (np.arange(grid.n_cols) + 0.5) * grid.resolution
    cy = grid.origin_y + (np.arange(grid.n_rows) + 0.5) * grid.resolution
    px = cx[None, :]
    py = cy[:, None]
    for rect in rectangles:
        cells |= _rect_mask(rect, px, py)
    return OccupancyGrid(grid.origin_x, grid.origin_y, grid.resolution, cells)


def inflation_radius(p: VehicleTrailerParams) -> float:
    """Half of the wider body."""
    return max(p.vehicle_width, p.trailer_width) / 2.0


def disc_offsets(radius: float, resolution: float) -> np.ndarray:
    """Integer cell offsets whose center distance is within the radius."""
    reach = int(math.floor(radius / resolution + 1e-12))
    r2 = radius * radius
    offsets = [
        (di, dj)
        for di in range(-reach, reach + 1)
        for dj in range(-reach, reach + 1)
        if (di * resolution) ** 2 + (dj * resolution) ** 2 <= r2
    ]
    return np.array(offsets, dtype=np.int64).reshape(-1, 2)


def inflate(grid: OccupancyGrid, p: VehicleTrailerParams) -> OccupancyGrid:
    """Dilate the occupied set with a disc of the larger body half-width."""
    offsets = disc_offsets(inflation_radius(p), grid.resolution)
    cells = _kernels.dilate(grid.cells, offsets)
    return OccupancyGrid(grid.origin_x, grid.origin_y, grid.resolution, cells)


def _segment_offsets(start: float, end: float, spacing: float) -> np.ndarray:
    length = end - start
    n = max(1, int(math.ceil(length / spacing - 1e-12)))
    return np.linspace(start, end, n + 1)


def body_offsets(p: VehicleTrailerParams, spacing: float):
    """Centerline sample offsets for (car, trailer).

    Car offsets are measured from the rear axle along the heading and
    span hitch to front bumper; trailer offsets are measured backwards
    from the hitch and span hitch to rear bumper.  Endpoints are always
    included and consecutive samples are at most ``spacing`` apart.
    """
    if not spacing > 0:
        raise ValueError("spacing must be > 0")
    vehicle = _segment_offsets(-p.rear_axle_to_hitch,
                               p.wheelbase + p.vehicle_front_overhang, spacing)
    trailer = _segment_offsets(0.0,
                               p.hitch_to_trailer_axle + p.trailer_rear_overhang,
                               spacing)
    return vehicle, trailer


def centerline_points(state: SystemState, p: VehicleTrailerParams,
                      spacing: float) -> np.ndarray:
    """World positions of both body centerlines, car samples first."""
    veh_off, trl_off = body_offsets(p, spacing)
    c1 = math.cos(state.yaw)
    s1 = math.sin(state.yaw)
    c2 = math.cos(state.trailer_yaw)
    s2 = math.sin(state.trailer_yaw)
    vehicle = np.column_stack((state.x + veh_off * c1, state.y + veh_off * s1))
    hx = state.x - p.rear_axle_to_hitch * c1
    hy = state.y - p.rear_axle_to_hitch * s1
    trailer = np.column_stack((hx - trl_off * c2, hy - trl_off * s2))
    return np.vstack((vehicle, trailer))


def collision_spacing(grid: OccupancyGrid) -> float:
    return min(MAX_CENTERLINE_SPACING, grid.resolution / 2.0)


def branch_collides(trajectory: Trajectory, inflated: OccupancyGrid,
                    p: VehicleTrailerParams) -> bool:
    """True iff any centerline point of any sample hits the inflated map."""
    veh_off, trl_off = body_offsets(p, collision_spacing(inflated))
    return bool(_kernels.collides(
        trajectory.states, veh_off, trl_off, p.rear_axle_to_hitch,
        inflated.origin_x, inflated.origin_y, inflated.resolution,
        inflated.cells))


def state_collides(state: SystemState, inflated: OccupancyGrid,
                   p: VehicleTrailerParams) -> bool:
    """Single-pose variant of :func:`branch_collides`."""
    veh_off, trl_off = body_offsets(p, collision_spacing(inflated))
    states = state.as_array().reshape(1, 4)
    return bool(_kernels.collides(
        states, veh_off, trl_off, p.rear_axle_to_hitch,
        inflated.origin_x, inflated.origin_y, inflated.resolution,
        inflated.cells))


# ---------------------------------------------------------------------------
# PGM import/export (binary P5, maxval 255; 0 = occupied, 255 = free)


def write_pgm(grid: OccupancyGrid, path) -> None:
    """Write the grid as a P5 image, top row = highest-y cells."""
    values = np.where(grid.cells, 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{grid.n_cols} {grid.n_rows}\n255\n".encode("ascii"))
        fh.write(values[::-1].tobytes())


def read_pgm(path, origin_x: float, origin_y: float,
             resolution: float) -> OccupancyGrid:
    """Read a P5 image written by :func:`write_pgm`; 0 maps to occupied."""
    with open(path, "rb") as fh:
        data = fh.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    if fields[0] != b"P5":
        raise ValueError("not a binary PGM (P5) file")
    n_cols, n_rows, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 255:
        raise ValueError("expected maxval 255")
    raster = np.frombuffer(data, dtype=np.uint8, count=n_rows * n_cols, offset=pos)
    cells = (raster.reshape(n_rows, n_cols)[::-1] == 0)
    return OccupancyGrid(origin_x=origin_x, origin_y=origin_y,
                         resolution=resolution, cells=cells)
