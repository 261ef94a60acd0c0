"""Best-first search over constant-input reverse branches.

Each queue entry is a complete partial path: the action ids taken, the
terminal pose, the most recent branch motion, the overall motion history
and the frozen inputs, so any entry can be replayed or rendered without
touching the rest of the tree.  The entry with the lowest cost is popped
and expanded; admissible children replace it on the queue.  Cost is a
quadratic distance of the trailer pose from the goal plus a small
per-action penalty that breaks ties between paths reaching the same
pose, keeping the search from favoring pointless loops.
"""

import heapq
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .angles import wrap_angle
from .errors import InvalidStart
from .kinematics import ActualControl, SystemState, Trajectory, trailer_pose
from .occupancy import OccupancyGrid, branch_collides, state_collides
from .params import VehicleTrailerParams
from .primitives import PrimitiveConfig, expand_node

DEFAULT_MAX_EXPANSIONS = 10000

# closed-set bin sizes for duplicate pruning
_POSITION_BIN = 0.5  # m
_ANGLE_BIN = math.radians(10.0)


@dataclass(frozen=True)
class GoalSpec:
    """Target trailer pose with per-component tolerances."""

    x: float
    y: float
    yaw: float
    pos_tol: float = 0.5
    yaw_tol: float = math.radians(10.0)

    def __post_init__(self):
        if not (self.pos_tol > 0 and self.yaw_tol > 0):
            raise ValueError("tolerances must be > 0")


def _default_q() -> np.ndarray:
    return np.diag([2.0, 2.0, 3.0])


@dataclass(frozen=True)
class CostWeights:
    """Quadratic pose weight and per-action penalty.

    ``q`` weighs the trailer pose error (x, y, yaw order) and must be
    symmetric positive definite.  ``action_weight`` should be small
    against typical pose costs; a warning is emitted when it exceeds one
    percent of the smallest diagonal weight.
    """

    q: np.ndarray = field(default_factory=_default_q)
    action_weight: float = 0.1

    def __post_init__(self):
        q = np.ascontiguousarray(self.q, dtype=float)
        if q.shape != (3, 3):
            raise ValueError("q must be 3x3")
        if not np.array_equal(q, q.T):
            raise ValueError("q must be symmetric")
        for k in (1, 2, 3):
            if np.linalg.det(q[:k, :k]) <= 0:
                raise ValueError("q must be positive definite")
        if not self.action_weight > 0:
            raise ValueError("action_weight must be > 0")
        if self.action_weight > 1e-2 * float(np.min(np.diag(q))):
            warnings.warn("action_weight is large relative to the pose weights; "
                          "it may distort the pose cost ordering", stacklevel=2)
        q.setflags(write=False)
        object.__setattr__(self, "q", q)


def heuristic_cost(trailer_pose_xyyaw, goal: GoalSpec, w: CostWeights) -> float:
    """Quadratic distance of a trailer pose (x, y, yaw) from the goal."""
    e = np.array([trailer_pose_xyyaw[0] - goal.x,
                  trailer_pose_xyyaw[1] - goal.y,
                  wrap_angle(trailer_pose_xyyaw[2] - goal.yaw)])
    return float(e @ w.q @ e)


def action_cost(n_actions: int, w: CostWeights) -> float:
    """Accumulated per-action penalty."""
    return w.action_weight * n_actions


def total_cost(heuristic: float, action: float) -> float:
    return heuristic + action


def goal_reached(state: SystemState, goal: GoalSpec,
                 p: VehicleTrailerParams) -> bool:
    """Component-wise tolerance test on the trailer pose."""
    x_t, y_t, yaw_t = trailer_pose(state, p)
    return (abs(x_t - goal.x) <= goal.pos_tol
            and abs(y_t - goal.y) <= goal.pos_tol
            and abs(wrap_angle(yaw_t - goal.yaw)) <= goal.yaw_tol)


class QueueEntry:
    """One partial path held by the priority queue.

    The overall trajectory is stored as shared per-branch segments and
    materialized on access, so deep queues stay cheap while every entry
    remains self-contained.
    """

    __slots__ = ("action_sequence", "cost", "terminal_state",
                 "expanded_branch_trajectory", "input_history",
                 "insertion_serial", "action_cost_total", "_segments", "_dt")

    def __init__(self, action_sequence, cost, terminal_state,
                 expanded_branch_trajectory, input_history,
                 insertion_serial, action_cost_total, segments, dt):
        self.action_sequence = tuple(action_sequence)
        self.cost = cost
        self.terminal_state = terminal_state
        self.expanded_branch_trajectory = expanded_branch_trajectory
        self.input_history = tuple(input_history)
        self.insertion_serial = insertion_serial
        self.action_cost_total = action_cost_total
        self._segments = tuple(segments)
        self._dt = dt
        assert len(self.input_history) == len(self.action_sequence)

    @property
    def n_actions(self) -> int:
        return len(self.action_sequence)

    @property
    def overall_path_trajectory(self):
        """Full motion history from the start state, or None at the root."""
        if not self._segments:
            return None
        first = self._segments[0]
        states = [first.states]
        controls = [first.controls]
        for seg in self._segments[1:]:
            states.append(seg.states[1:])
            controls.append(seg.controls[1:])
        return Trajectory(dt=self._dt,
                          states=np.concatenate(states),
                          controls=np.concatenate(controls))


@dataclass(frozen=True)
class PlannedPath:
    """Search outcome: status, best entry, effort and explored branches."""

    status: str  # "solved" | "exhausted" | "iteration-cap"
    solution: QueueEntry
    expansions: int
    explored_branches: list

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def _bin_key(state: SystemState, p: VehicleTrailerParams):
    x_t, y_t, yaw_t = trailer_pose(state, p)
    return (math.floor(x_t / _POSITION_BIN),
            math.floor(y_t / _POSITION_BIN),
            math.floor(wrap_angle(yaw_t) / _ANGLE_BIN),
            math.floor(state.hitch_angle / _ANGLE_BIN))


def plan(start: SystemState, goal: GoalSpec, inflated: OccupancyGrid,
         p: VehicleTrailerParams, cfg: PrimitiveConfig, w: CostWeights,
         max_expansions: int = DEFAULT_MAX_EXPANSIONS, prune: bool = True,
         on_expand=None) -> PlannedPath:
    """Search for a collision-free reverse path to the goal trailer pose.

    ``inflated`` must already carry the body-half-width inflation.  Pops
    the cheapest entry (ties broken by insertion order), expands it into
    collision-checked branches and pushes the children; returns as soon
    as a child satisfies the goal test.  With ``prune`` enabled a child
    whose discretized trailer-pose/articulation bin was already expanded
    is discarded; disabling it restores plain exhaustive behavior.  When
    the queue empties or the expansion cap is reached, the lowest-cost
    entry seen is returned with the matching status.

    ``on_expand(entry, queue_snapshot)`` is called at every pop with the
    remaining (cost, serial) pairs; intended for diagnostics.
    """
    if abs(start.hitch_angle) > p.max_hitch_angle:
        raise InvalidStart("start pose exceeds the hitch-angle cap")
    if state_collides(start, inflated, p):
        raise InvalidStart("start pose collides with the inflated map")

    root_cost = total_cost(heuristic_cost(trailer_pose(start, p), goal, w), 0.0)
    root = QueueEntry(action_sequence=(), cost=root_cost, terminal_state=start,
                      expanded_branch_trajectory=None, input_history=(),
                      insertion_serial=0, action_cost_total=0.0,
                      segments=(), dt=cfg.dt)
    if goal_reached(start, goal, p):
        return PlannedPath("solved", root, 0, [])

    best = root
    heap = [(root.cost, root.insertion_serial, root)]
    closed = set()
    serial = 1
    expansions = 0
    explored = []

    while heap and expansions < max_expansions:
        _, _, entry = heapq.heappop(heap)
        if on_expand is not None:
            on_expand(entry, tuple((c, s) for c, s, _ in heap))
        expansions += 1
        if prune:
            closed.add(_bin_key(entry.terminal_state, p))
        for branch in expand_node(entry.terminal_state, p, cfg):
            if branch_collides(branch.trajectory, inflated, p):
                continue
            explored.append(branch.trajectory)
            child_action_cost = entry.action_cost_total + w.action_weight
            child_cost = total_cost(
                heuristic_cost(trailer_pose(branch.terminal, p), goal, w),
                child_action_cost)
            child = QueueEntry(
                action_sequence=entry.action_sequence + (branch.index,),
                cost=child_cost,
                terminal_state=branch.terminal,
                expanded_branch_trajectory=branch.trajectory,
                input_history=entry.input_history + (branch.actual,),
                insertion_serial=serial,
                action_cost_total=child_action_cost,
                segments=entry._segments + (branch.trajectory,),
                dt=cfg.dt)
            serial += 1
            if goal_reached(child.terminal_state, goal, p):
                return PlannedPath("solved", child, expansions, explored)
            if (child.cost, child.insertion_serial) < (best.cost, best.insertion_serial):
                best = child
            if prune and _bin_key(child.terminal_state, p) in closed:
                continue
            heapq.heappush(heap, (child.cost, child.insertion_serial, child))

    status = "iteration-cap" if heap else "exhausted"
    return PlannedPath(status, best, expansions, explored)
