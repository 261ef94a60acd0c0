"""Scenario files: loading, validation, saving and map construction.

Scenarios are plain JSON.  Lengths are meters and every angle in the
file is degrees; angles are converted to radians on load and back to
degrees on save.  There is no randomness anywhere in a scenario, so a
given file always produces the same planning problem.  Validation errors
name the offending field with a dotted path.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ScenarioError
from .kinematics import SystemState
from .occupancy import (ObstacleSpec, OccupancyGrid, build_grid, inflate,
                        read_pgm, stamp_rectangles)
from .params import VehicleTrailerParams
from .planner import CostWeights, GoalSpec, DEFAULT_MAX_EXPANSIONS
from .primitives import PrimitiveConfig


@dataclass(frozen=True)
class Scenario:
    """A complete planning problem, all angles in radians."""

    params: VehicleTrailerParams
    bounds: tuple  # (xmin, ymin, xmax, ymax)
    resolution: float
    obstacles: tuple  # ObstacleSpec rasterized before inflation
    extra_occupied: tuple  # ObstacleSpec stamped onto the inflated map
    pgm: str | None  # optional raster source, path relative to the file
    start: SystemState
    goal: GoalSpec
    primitives: PrimitiveConfig
    weights: CostWeights
    max_expansions: int
    prune: bool


def _expect_mapping(value, path):
    if not isinstance(value, dict):
        raise ScenarioError(f"{path}: expected an object")
    return value


def _get(data, key, path, required=True, default=None):
    if key not in data:
        if required:
            raise ScenarioError(f"{path}.{key}: missing required field")
        return default
    return data[key]


def _number(value, path, minimum=None, strict_min=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}: expected a number")
    value = float(value)
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{path}: must be >= {minimum}")
    if strict_min is not None and value <= strict_min:
        raise ScenarioError(f"{path}: must be > {strict_min}")
    return value


def _integer(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{path}: expected an integer")
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{path}: must be >= {minimum}")
    return value


def _pair(value, path):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ScenarioError(f"{path}: expected a pair of numbers")
    return (_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _angle(value, path):
    return math.radians(_number(value, path))


def _rectangles(value, path):
    if not isinstance(value, list):
        raise ScenarioError(f"{path}: expected a list")
    rects = []
    for i, item in enumerate(value):
        rpath = f"{path}[{i}]"
        item = _expect_mapping(item, rpath)
        center = _pair(_get(item, "center", rpath), f"{rpath}.center")
        half = _pair(_get(item, "half_extents", rpath), f"{rpath}.half_extents")
        heading = _angle(item.get("heading_deg", 0.0), f"{rpath}.heading_deg")
        if half[0] <= 0 or half[1] <= 0:
            raise ScenarioError(f"{rpath}.half_extents: must be > 0")
        rects.append(ObstacleSpec(center_x=center[0], center_y=center[1],
                                  half_length=half[0], half_width=half[1],
                                  heading=heading))
    return tuple(rects)


def _load_params(data) -> VehicleTrailerParams:
    d = _expect_mapping(data, "params")
    steer_range = _get(d, "steer_range_deg", "params")
    virt_range = _get(d, "virtual_steer_range_deg", "params")
    if not isinstance(steer_range, (list, tuple)) or len(steer_range) != 2:
        raise ScenarioError("params.steer_range_deg: expected [min, max]")
    if not isinstance(virt_range, (list, tuple)) or len(virt_range) != 2:
        raise ScenarioError("params.virtual_steer_range_deg: expected [min, max]")
    # cg_to_front_axle / cg_to_rear_axle are accepted for completeness but
    # no computation uses them
    for key in ("cg_to_front_axle", "cg_to_rear_axle"):
        if key in d:
            _number(d[key], f"params.{key}")
    try:
        return VehicleTrailerParams(
            wheelbase=_number(_get(d, "wheelbase", "params"), "params.wheelbase", strict_min=0),
            rear_axle_to_hitch=_number(_get(d, "rear_axle_to_hitch", "params"),
                                       "params.rear_axle_to_hitch", strict_min=0),
            hitch_to_trailer_axle=_number(_get(d, "hitch_to_trailer_axle", "params"),
                                          "params.hitch_to_trailer_axle", strict_min=0),
            vehicle_width=_number(_get(d, "vehicle_width", "params"),
                                  "params.vehicle_width", minimum=0),
            trailer_width=_number(_get(d, "trailer_width", "params"),
                                  "params.trailer_width", minimum=0),
            vehicle_front_overhang=_number(_get(d, "vehicle_front_overhang", "params"),
                                           "params.vehicle_front_overhang", minimum=0),
            trailer_rear_overhang=_number(_get(d, "trailer_rear_overhang", "params"),
                                          "params.trailer_rear_overhang", minimum=0),
            steer_min=_angle(steer_range[0], "params.steer_range_deg[0]"),
            steer_max=_angle(steer_range[1], "params.steer_range_deg[1]"),
            virtual_steer_min=_angle(virt_range[0], "params.virtual_steer_range_deg[0]"),
            virtual_steer_max=_angle(virt_range[1], "params.virtual_steer_range_deg[1]"),
            max_hitch_angle=_angle(_get(d, "max_hitch_angle_deg", "params",
                                        required=False, default=75.0),
                                   "params.max_hitch_angle_deg"),
        )
    except ValueError as exc:
        raise ScenarioError(f"params: {exc}") from exc


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
    root = _expect_mapping(raw, "scenario")

    params = _load_params(_get(root, "params", "scenario"))

    m = _expect_mapping(_get(root, "map", "scenario"), "map")
    bounds_raw = _get(m, "bounds", "map")
    if not isinstance(bounds_raw, (list, tuple)) or len(bounds_raw) != 4:
        raise ScenarioError("map.bounds: expected [xmin, ymin, xmax, ymax]")
    bounds = tuple(_number(v, f"map.bounds[{i}]") for i, v in enumerate(bounds_raw))
    if not (bounds[2] > bounds[0] and bounds[3] > bounds[1]):
        raise ScenarioError("map.bounds: xmax/ymax must exceed xmin/ymin")
    resolution = _number(_get(m, "resolution", "map", required=False, default=0.1),
                         "map.resolution", strict_min=0)
    obstacles = _rectangles(m.get("obstacles", []), "map.obstacles")
    extra = _rectangles(m.get("extra_occupied", []), "map.extra_occupied")
    pgm = m.get("pgm")
    if pgm is not None and not isinstance(pgm, str):
        raise ScenarioError("map.pgm: expected a file name")

    s = _expect_mapping(_get(root, "start", "scenario"), "start")
    start = SystemState(
        x=_number(_get(s, "x", "start"), "start.x"),
        y=_number(_get(s, "y", "start"), "start.y"),
        yaw=_angle(_get(s, "yaw_deg", "start"), "start.yaw_deg"),
        trailer_yaw=_angle(_get(s, "trailer_yaw_deg", "start"), "start.trailer_yaw_deg"))

    g = _expect_mapping(_get(root, "goal", "scenario"), "goal")
    try:
        goal = GoalSpec(
            x=_number(_get(g, "x", "goal"), "goal.x"),
            y=_number(_get(g, "y", "goal"), "goal.y"),
            yaw=_angle(_get(g, "yaw_deg", "goal"), "goal.yaw_deg"),
            pos_tol=_number(_get(g, "pos_tol", "goal", required=False, default=0.5),
                            "goal.pos_tol", strict_min=0),
            yaw_tol=_angle(_get(g, "yaw_tol_deg", "goal", required=False, default=10.0),
                           "goal.yaw_tol_deg"))
    except ValueError as exc:
        raise ScenarioError(f"goal: {exc}") from exc

    pr = _expect_mapping(root.get("primitives", {}), "primitives")
    try:
        primitives = PrimitiveConfig(
            branch_count=_integer(pr.get("branch_count", 3), "primitives.branch_count", minimum=2),
            duration=_number(pr.get("duration", 1.0), "primitives.duration", strict_min=0),
            trailer_speed=_number(pr.get("trailer_speed", -1.0), "primitives.trailer_speed"),
            dt=_number(pr.get("dt", 0.05), "primitives.dt", strict_min=0))
    except ValueError as exc:
        raise ScenarioError(f"primitives: {exc}") from exc

    c = _expect_mapping(root.get("cost", {}), "cost")
    q_raw = c.get("q", [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]])
    if (not isinstance(q_raw, list) or len(q_raw) != 3
            or any(not isinstance(row, list) or len(row) != 3 for row in q_raw)):
        raise ScenarioError("cost.q: expected a 3x3 matrix")
    q = [[_number(v, f"cost.q[{i}][{j}]") for j, v in enumerate(row)]
         for i, row in enumerate(q_raw)]
    try:
        weights = CostWeights(q=q, action_weight=_number(
            c.get("action_weight", 0.1), "cost.action_weight", strict_min=0))
    except ValueError as exc:
        raise ScenarioError(f"cost: {exc}") from exc

    pl = _expect_mapping(root.get("planner", {}), "planner")
    max_expansions = _integer(pl.get("max_expansions", DEFAULT_MAX_EXPANSIONS),
                              "planner.max_expansions", minimum=1)
    prune = pl.get("prune", True)
    if not isinstance(prune, bool):
        raise ScenarioError("planner.prune: expected true or false")

    return Scenario(params=params, bounds=bounds, resolution=resolution,
                    obstacles=obstacles, extra_occupied=extra, pgm=pgm,
                    start=start, goal=goal, primitives=primitives,
                    weights=weights, max_expansions=max_expansions, prune=prune)


def scenario_to_dict(sc: Scenario) -> dict:
    """Serialize back to the file schema (angles in degrees)."""
    deg = math.degrees

    def rect_dict(r: ObstacleSpec) -> dict:
        return {"center": [r.center_x, r.center_y],
                "half_extents": [r.half_length, r.half_width],
                "heading_deg": deg(r.heading)}

    p = sc.params
    out = {
        "params": {
            "wheelbase": p.wheelbase,
            "rear_axle_to_hitch": p.rear_axle_to_hitch,
            "hitch_to_trailer_axle": p.hitch_to_trailer_axle,
            "vehicle_width": p.vehicle_width,
            "trailer_width": p.trailer_width,
            "vehicle_front_overhang": p.vehicle_front_overhang,
            "trailer_rear_overhang": p.trailer_rear_overhang,
            "steer_range_deg": [deg(p.steer_min), deg(p.steer_max)],
            "virtual_steer_range_deg": [deg(p.virtual_steer_min),
                                        deg(p.virtual_steer_max)],
            "max_hitch_angle_deg": deg(p.max_hitch_angle),
        },
        "map": {
            "bounds": list(sc.bounds),
            "resolution": sc.resolution,
            "obstacles": [rect_dict(r) for r in sc.obstacles],
            "extra_occupied": [rect_dict(r) for r in sc.extra_occupied],
        },
        "start": {"x": sc.start.x, "y": sc.start.y,
                  "yaw_deg": deg(sc.start.yaw),
                  "trailer_yaw_deg": deg(sc.start.trailer_yaw)},
        "goal": {"x": sc.goal.x, "y": sc.goal.y, "yaw_deg": deg(sc.goal.yaw),
                 "pos_tol": sc.goal.pos_tol, "yaw_tol_deg": deg(sc.goal.yaw_tol)},
        "primitives": {"branch_count": sc.primitives.branch_count,
                       "duration": sc.primitives.duration,
                       "trailer_speed": sc.primitives.trailer_speed,
                       "dt": sc.primitives.dt},
        "cost": {"q": [list(row) for row in sc.weights.q],
                 "action_weight": sc.weights.action_weight},
        "planner": {"max_expansions": sc.max_expansions, "prune": sc.prune},
    }
    if sc.pgm is not None:
        out["map"]["pgm"] = sc.pgm
    return out


def save_scenario(sc: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(sc), indent=2,
                                     sort_keys=True) + "\n", encoding="utf-8")


def build_maps(sc: Scenario, base_dir=None):
    """Construct (raw, inflated) grids for a scenario.

    ``extra_occupied`` rectangles are stamped onto the inflated map only,
    mirroring hand-authored keep-out regions.
    """
    if sc.pgm is not None:
        base = Path(base_dir) if base_dir is not None else Path(".")
        raw = read_pgm(base / sc.pgm, sc.bounds[0], sc.bounds[1], sc.resolution)
    else:
        raw = build_grid(sc.bounds, sc.resolution, sc.obstacles)
    inflated = inflate(raw, sc.params)
    inflated = stamp_rectangles(inflated, sc.extra_occupied)
    return raw, inflated
