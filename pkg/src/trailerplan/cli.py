"""Command line interface: plan, validate-ik, replay, render.

Exit codes: 0 success/solved, 1 usage or input error, 2 planning failed
(or replay mismatch).  All outputs are deterministic: rerunning a
command on the same inputs reproduces every file byte for byte.
"""

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .errors import InvalidStart, ScenarioError, SingularConfiguration, TrailerPlanError
from .ik_study import SteerProfile, run_study
from .kinematics import ActualControl, follow, trailer_pose
from .occupancy import write_pgm
from .params import default_params
from .planner import plan
from .scenario import build_maps, load_scenario
from .svg_render import (render_map_svg, render_profile_svg,
                         render_solution_svg, render_tree_svg)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_SOLVED = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; remap to 1
    def error(self, message):
        raise _UsageError(message)


def _add_common(sub):
    sub.add_argument("--out", default="out", help="output directory")
    sub.add_argument("--dt", type=float, default=None,
                     help="override the integrator step [s]")
    sub.add_argument("--no-prune", action="store_true",
                     help="disable duplicate-state pruning")
    sub.add_argument("--branches", type=int, default=None,
                     help="override the branch count per expansion")


def build_parser() -> _Parser:
    parser = _Parser(prog="trailerplan",
                     description="Reverse-parking planner for a car with a trailer")
    subs = parser.add_subparsers(dest="command", required=True)

    p_plan = subs.add_parser("plan", help="plan a scenario and write outputs")
    p_plan.add_argument("scenario", help="scenario JSON file")
    _add_common(p_plan)

    p_ik = subs.add_parser("validate-ik",
                           help="run the virtual-steer tracking study")
    p_ik.add_argument("--amplitude-deg", type=float, default=15.0)
    p_ik.add_argument("--period", type=float, default=10.0)
    p_ik.add_argument("--duration", type=float, default=20.0)
    p_ik.add_argument("--rear-speed", type=float, default=-1.0)
    _add_common(p_ik)

    p_replay = subs.add_parser("replay",
                               help="re-simulate a result's input history")
    p_replay.add_argument("scenario", help="scenario JSON file")
    p_replay.add_argument("result", help="result.json produced by plan")
    _add_common(p_replay)

    p_render = subs.add_parser("render", help="render the map without planning")
    p_render.add_argument("scenario", help="scenario JSON file")
    _add_common(p_render)

    return parser


def _apply_overrides(sc, args):
    primitives = sc.primitives
    if args.dt is not None:
        primitives = replace(primitives, dt=args.dt)
    if args.branches is not None:
        primitives = replace(primitives, branch_count=args.branches)
    sc = replace(sc, primitives=primitives)
    if args.no_prune:
        sc = replace(sc, prune=False)
    return sc


def _csv_rows(states, controls, dt, params):
    lines = ["t,X_R,Y_R,psi1,X_T,Y_T,psi2,delta_f,V_R"]
    from .kinematics import SystemState
    for i in range(states.shape[0]):
        state = SystemState(states[i, 0], states[i, 1], states[i, 2], states[i, 3])
        x_t, y_t, yaw_t = trailer_pose(state, params)
        t = i * dt
        lines.append(",".join(f"{v:.6f}" for v in (
            t, state.x, state.y, state.yaw, x_t, y_t, yaw_t,
            controls[i][1], controls[i][0])))
    return "\n".join(lines) + "\n"


def _solution_csv(sc, result) -> str:
    traj = result.solution.overall_path_trajectory
    if traj is None:
        import numpy as np
        states = sc.start.as_array().reshape(1, 4)
        controls = np.zeros((1, 2))
        return _csv_rows(states, controls, sc.primitives.dt, sc.params)
    return _csv_rows(traj.states, traj.controls, traj.dt, sc.params)


def _result_payload(result) -> dict:
    entry = result.solution
    return {
        "status": result.status,
        "cost": entry.cost,
        "expansions": result.expansions,
        "action_sequence": list(entry.action_sequence),
        "input_history": [{"speed": u.speed, "steer": u.steer}
                          for u in entry.input_history],
    }


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def cmd_plan(args) -> int:
    sc = _apply_overrides(load_scenario(args.scenario), args)
    raw, inflated = build_maps(sc, Path(args.scenario).parent)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        result = plan(sc.start, sc.goal, inflated, sc.params, sc.primitives,
                      sc.weights, max_expansions=sc.max_expansions,
                      prune=sc.prune)
    except InvalidStart as exc:
        _write(out / "result.json", json.dumps(
            {"status": "invalid-start", "cost": None, "expansions": 0,
             "action_sequence": [], "input_history": []},
            indent=2, sort_keys=True) + "\n")
        print(f"not solved: {exc}", file=sys.stderr)
        return EXIT_NOT_SOLVED

    _write(out / "path.csv", _solution_csv(sc, result))
    _write(out / "result.json",
           json.dumps(_result_payload(result), indent=2, sort_keys=True) + "\n")
    _write(out / "map.svg", render_map_svg(raw, inflated))
    _write(out / "tree.svg", render_tree_svg(raw, inflated,
                                             result.explored_branches,
                                             sc.params, sc.start, sc.goal))
    _write(out / "solution.svg", render_solution_svg(
        raw, inflated, result.solution.overall_path_trajectory,
        sc.params, sc.start, sc.goal))
    write_pgm(raw, out / "map.pgm")

    print(f"{result.status}: cost={result.solution.cost:.6f} "
          f"expansions={result.expansions} "
          f"actions={len(result.solution.action_sequence)}")
    return EXIT_OK if result.solved else EXIT_NOT_SOLVED


def cmd_validate_ik(args) -> int:
    params = default_params()
    amplitude = math.radians(args.amplitude_deg)
    if abs(amplitude) > params.virtual_steer_max:
        raise _UsageError("amplitude exceeds the virtual-steer comfort bound")
    if args.period < 5.0:
        raise _UsageError("period must be at least 5 s")
    if args.duration < 20.0:
        raise _UsageError("duration must be at least 20 s")
    dt = args.dt if args.dt is not None else 1e-3
    result = run_study(params, SteerProfile(amplitude, args.period),
                       args.duration, dt, rear_speed=args.rear_speed)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["t,desired_deg,actual_deg,delta_f_deg"]
    for i in range(len(result.times)):
        lines.append(",".join(f"{v:.6f}" for v in (
            result.times[i], math.degrees(result.desired[i]),
            math.degrees(result.actual[i]), math.degrees(result.steer[i]))))
    _write(out / "ik.csv", "\n".join(lines) + "\n")
    _write(out / "ik.svg", render_profile_svg(
        result.times, [math.degrees(v) for v in result.desired],
        [math.degrees(v) for v in result.actual]))

    max_err_deg = math.degrees(result.max_error)
    print(f"max |actual - desired| = {max_err_deg:.9f} deg")
    return EXIT_OK if max_err_deg <= 0.1 else EXIT_NOT_SOLVED


def cmd_replay(args) -> int:
    sc = _apply_overrides(load_scenario(args.scenario), args)
    result_path = Path(args.result)
    try:
        payload = json.loads(result_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read {result_path}: {exc}") from exc
    history = payload.get("input_history", [])
    csv_path = result_path.parent / "path.csv"
    try:
        recorded = csv_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {csv_path}: {exc}") from exc

    if history:
        inputs = [ActualControl(speed=item["speed"], steer=item["steer"])
                  for item in history]
        traj = follow(sc.start, inputs, sc.params,
                      sc.primitives.duration, sc.primitives.dt)
        replayed = _csv_rows(traj.states, traj.controls, traj.dt, sc.params)
    else:
        import numpy as np
        states = sc.start.as_array().reshape(1, 4)
        replayed = _csv_rows(states, np.zeros((1, 2)), sc.primitives.dt, sc.params)

    if replayed == recorded:
        print("replay matches path.csv exactly")
        return EXIT_OK
    print("replay DIVERGES from path.csv", file=sys.stderr)
    return EXIT_NOT_SOLVED


def cmd_render(args) -> int:
    sc = _apply_overrides(load_scenario(args.scenario), args)
    raw, inflated = build_maps(sc, Path(args.scenario).parent)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "map.svg", render_map_svg(raw, inflated))
    write_pgm(raw, out / "map.pgm")
    print(f"rendered map: {raw.n_cols}x{raw.n_rows} cells")
    return EXIT_OK


_COMMANDS = {
    "plan": cmd_plan,
    "validate-ik": cmd_validate_ik,
    "replay": cmd_replay,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SingularConfiguration as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TrailerPlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
