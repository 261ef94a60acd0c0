"""Hot numeric kernels: branch rollout, collision probing, grid dilation.

Two interchangeable backends are provided.  The default compiles the
sequential loops with numba; setting the environment variable
``TRAILERPLAN_NUMBA=0`` (or running without numba installed) selects a
pure python/numpy path instead.  Both backends perform the same
arithmetic in the same order; results agree bitwise except for rare
last-ulp differences in sin/cos between libm and the compiled intrinsics.
Outputs of a given backend are fully deterministic.

Kernels are written as flat module-level functions with everything
inlined so the compiled variants stay cacheable across processes.
"""

import math
import os

import numpy as np

NUMBA_ENABLED = os.environ.get("TRAILERPLAN_NUMBA", "1") != "0"
if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

PI = math.pi
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# pose rollout under constant inputs


def rollout_py(init_x, init_y, init_yaw1, init_yaw2, speed, steer,
               wheelbase, hitch_dist, trailer_dist, dt, n_steps, hitch_cap):
    """Integrate the pose ODE for ``n_steps`` fixed RK4 steps.

    Returns ``(states, abort_step)`` where ``states`` has ``n_steps + 1``
    rows of (x, y, yaw, trailer_yaw) with yaw columns wrapped per step.
    ``abort_step`` is the first step index whose end state violates the
    hitch cap (rows past ``abort_step + 1`` are unfilled), or -1.
    """
    out = np.empty((n_steps + 1, 4))
    x = init_x
    y = init_y
    yaw1 = init_yaw1
    yaw2 = init_yaw2
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = yaw1
    out[0, 3] = yaw2
    tan_steer = math.tan(steer)
    yaw1_rate = speed / wheelbase * tan_steer  # state independent
    coupling = hitch_dist / wheelbase * tan_steer
    half_dt = 0.5 * dt
    sixth_dt = dt / 6.0
    for k in range(n_steps):
        h1 = PI - (PI - (yaw1 - yaw2)) % TWO_PI
        a1x = speed * math.cos(yaw1)
        a1y = speed * math.sin(yaw1)
        a1w = speed / trailer_dist * (math.sin(h1) - coupling * math.cos(h1))

        y1b = yaw1 + half_dt * yaw1_rate
        y2b = yaw2 + half_dt * a1w
        h2 = PI - (PI - (y1b - y2b)) % TWO_PI
        a2x = speed * math.cos(y1b)
        a2y = speed * math.sin(y1b)
        a2w = speed / trailer_dist * (math.sin(h2) - coupling * math.cos(h2))

        y2c = yaw2 + half_dt * a2w
        h3 = PI - (PI - (y1b - y2c)) % TWO_PI
        a3x = speed * math.cos(y1b)
        a3y = speed * math.sin(y1b)
        a3w = speed / trailer_dist * (math.sin(h3) - coupling * math.cos(h3))

        y1d = yaw1 + dt * yaw1_rate
        y2d = yaw2 + dt * a3w
        h4 = PI - (PI - (y1d - y2d)) % TWO_PI
        a4x = speed * math.cos(y1d)
        a4y = speed * math.sin(y1d)
        a4w = speed / trailer_dist * (math.sin(h4) - coupling * math.cos(h4))

        x = x + sixth_dt * (a1x + 2.0 * a2x + 2.0 * a3x + a4x)
        y = y + sixth_dt * (a1y + 2.0 * a2y + 2.0 * a3y + a4y)
        yaw1 = PI - (PI - (yaw1 + dt * yaw1_rate)) % TWO_PI
        yaw2 = PI - (PI - (yaw2 + sixth_dt * (a1w + 2.0 * a2w + 2.0 * a3w + a4w))) % TWO_PI

        out[k + 1, 0] = x
        out[k + 1, 1] = y
        out[k + 1, 2] = yaw1
        out[k + 1, 3] = yaw2

        hitch = PI - (PI - (yaw1 - yaw2)) % TWO_PI
        if abs(hitch) > hitch_cap:
            return out, k
    return out, -1


# ---------------------------------------------------------------------------
# collision probing of a state sequence against an occupancy grid
#
# Body centerlines are sampled with precomputed arc-length offsets:
# ``veh_off`` runs along the car heading from the rear axle (negative
# values reach back to the hitch), ``trl_off`` runs backwards from the
# hitch along the trailer heading.  A point outside the grid counts as a
# collision.


def collides_loop(states, veh_off, trl_off, hitch_dist,
                  origin_x, origin_y, resolution, occ):
    n_rows, n_cols = occ.shape
    for i in range(states.shape[0]):
        x = states[i, 0]
        y = states[i, 1]
        c1 = math.cos(states[i, 2])
        s1 = math.sin(states[i, 2])
        c2 = math.cos(states[i, 3])
        s2 = math.sin(states[i, 3])
        for j in range(veh_off.shape[0]):
            px = x + veh_off[j] * c1
            py = y + veh_off[j] * s1
            ix = int(math.floor((px - origin_x) / resolution))
            iy = int(math.floor((py - origin_y) / resolution))
            if ix < 0 or iy < 0 or ix >= n_cols or iy >= n_rows or occ[iy, ix]:
                return True
        hx = x - hitch_dist * c1
        hy = y - hitch_dist * s1
        for j in range(trl_off.shape[0]):
            px = hx - trl_off[j] * c2
            py = hy - trl_off[j] * s2
            ix = int(math.floor((px - origin_x) / resolution))
            iy = int(math.floor((py - origin_y) / resolution))
            if ix < 0 or iy < 0 or ix >= n_cols or iy >= n_rows or occ[iy, ix]:
                return True
    return False


def collides_py(states, veh_off, trl_off, hitch_dist,
                origin_x, origin_y, resolution, occ):
    """Vectorized twin of :func:`collides_loop`; same verdicts."""
    n_rows, n_cols = occ.shape
    c1 = np.cos(states[:, 2:3])
    s1 = np.sin(states[:, 2:3])
    c2 = np.cos(states[:, 3:4])
    s2 = np.sin(states[:, 3:4])
    x = states[:, 0:1]
    y = states[:, 1:2]
    off_v = veh_off[None, :]
    off_t = trl_off[None, :]
    for px, py in (
        (x + off_v * c1, y + off_v * s1),
        ((x - hitch_dist * c1) - off_t * c2, (y - hitch_dist * s1) - off_t * s2),
    ):
        ix = np.floor((px - origin_x) / resolution).astype(np.int64)
        iy = np.floor((py - origin_y) / resolution).astype(np.int64)
        outside = (ix < 0) | (iy < 0) | (ix >= n_cols) | (iy >= n_rows)
        if outside.any():
            return True
        inside = ~outside
        if occ[iy[inside], ix[inside]].any():
            return True
    return False


# ---------------------------------------------------------------------------
# morphological dilation with a precomputed disc offset set


def dilate_loop(occ, offsets):
    n_rows, n_cols = occ.shape
    out = np.zeros_like(occ)
    for i in range(n_rows):
        for j in range(n_cols):
            if occ[i, j]:
                for k in range(offsets.shape[0]):
                    ii = i + offsets[k, 0]
                    jj = j + offsets[k, 1]
                    if 0 <= ii < n_rows and 0 <= jj < n_cols:
                        out[ii, jj] = True
    return out


def dilate_py(occ, offsets):
    """Shift-and-or twin of :func:`dilate_loop`; identical occupied set."""
    n_rows, n_cols = occ.shape
    out = np.zeros_like(occ)
    for k in range(offsets.shape[0]):
        di = int(offsets[k, 0])
        dj = int(offsets[k, 1])
        si0, si1 = max(0, -di), n_rows - max(0, di)
        ti0, ti1 = max(0, di), n_rows - max(0, -di)
        sj0, sj1 = max(0, -dj), n_cols - max(0, dj)
        tj0, tj1 = max(0, dj), n_cols - max(0, -dj)
        if si1 <= si0 or sj1 <= sj0:
            continue
        np.logical_or(out[ti0:ti1, tj0:tj1], occ[si0:si1, sj0:sj1],
                      out=out[ti0:ti1, tj0:tj1])
    return out


# ---------------------------------------------------------------------------
# inverse-kinematics validation study
#
# Reference pass: the trailer-frame model driven by a sinusoidal virtual
# steer command is integrated on a grid ``refine`` times finer than the
# forward step, recording the mapped front-steer command at every node.
# Forward pass: the full pose model consumes that command profile, with
# RK4 stages reading the command at the exact stage times.


def ik_reference_py(n_nodes, dt_ref, amplitude, period, rear_speed,
                    wheelbase, hitch_dist, trailer_dist):
    """Integrate the trailer-frame model; returns (steer_profile, bad_node).

    ``steer_profile`` holds the mapped front-steer command at each of the
    ``n_nodes + 1`` grid nodes.  ``bad_node`` is the first node where a
    mapping denominator fell below tolerance, or -1.
    """
    steer_out = np.empty(n_nodes + 1)
    omega = TWO_PI / period
    ratio = wheelbase / hitch_dist
    yaw1 = 0.0
    yaw2 = 0.0
    half = 0.5 * dt_ref
    sixth = dt_ref / 6.0
    for j in range(n_nodes + 1):
        t = j * dt_ref
        tan_cmd = math.tan(amplitude * math.sin(omega * t))
        h = PI - (PI - (yaw1 - yaw2)) % TWO_PI
        den = math.cos(h) + math.sin(h) * tan_cmd
        if abs(den) < 1e-9:
            return steer_out, j
        steer_out[j] = math.atan(ratio * (math.sin(h) - math.cos(h) * tan_cmd) / den)
        if j == n_nodes:
            break

        # RK4 step of (yaw1, yaw2); the command is an analytic time profile
        ta = tan_cmd
        tb = math.tan(amplitude * math.sin(omega * (t + half)))
        tc = math.tan(amplitude * math.sin(omega * (t + dt_ref)))

        den_a = math.cos(h) + math.sin(h) * ta
        if abs(den_a) < 1e-9:
            return steer_out, j
        vt_a = rear_speed / den_a
        w1a = vt_a / hitch_dist * (math.sin(h) - math.cos(h) * ta)
        w2a = vt_a / trailer_dist * ta

        hb = PI - (PI - ((yaw1 + half * w1a) - (yaw2 + half * w2a))) % TWO_PI
        den_b = math.cos(hb) + math.sin(hb) * tb
        if abs(den_b) < 1e-9:
            return steer_out, j
        vt_b = rear_speed / den_b
        w1b = vt_b / hitch_dist * (math.sin(hb) - math.cos(hb) * tb)
        w2b = vt_b / trailer_dist * tb

        hc = PI - (PI - ((yaw1 + half * w1b) - (yaw2 + half * w2b))) % TWO_PI
        den_c = math.cos(hc) + math.sin(hc) * tb
        if abs(den_c) < 1e-9:
            return steer_out, j
        vt_c = rear_speed / den_c
        w1c = vt_c / hitch_dist * (math.sin(hc) - math.cos(hc) * tb)
        w2c = vt_c / trailer_dist * tb

        hd = PI - (PI - ((yaw1 + dt_ref * w1c) - (yaw2 + dt_ref * w2c))) % TWO_PI
        den_d = math.cos(hd) + math.sin(hd) * tc
        if abs(den_d) < 1e-9:
            return steer_out, j
        vt_d = rear_speed / den_d
        w1d = vt_d / hitch_dist * (math.sin(hd) - math.cos(hd) * tc)
        w2d = vt_d / trailer_dist * tc

        yaw1 = PI - (PI - (yaw1 + sixth * (w1a + 2.0 * w1b + 2.0 * w1c + w1d))) % TWO_PI
        yaw2 = PI - (PI - (yaw2 + sixth * (w2a + 2.0 * w2b + 2.0 * w2c + w2d))) % TWO_PI
    return steer_out, -1


def ik_forward_py(steer_profile, refine, speed, wheelbase, hitch_dist,
                  trailer_dist, dt, n_steps, hitch_cap):
    """Drive the full pose model from rest pose with a steer profile.

    ``steer_profile`` is sampled on a grid ``refine`` times finer than
    ``dt`` (``refine`` even) so every RK4 stage time is a grid node.
    Returns ``(states, abort_step)`` as in :func:`rollout_py`.
    """
    out = np.empty((n_steps + 1, 4))
    x = 0.0
    y = 0.0
    yaw1 = 0.0
    yaw2 = 0.0
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = yaw1
    out[0, 3] = yaw2
    half_dt = 0.5 * dt
    sixth_dt = dt / 6.0
    half_refine = refine // 2
    for k in range(n_steps):
        ta = math.tan(steer_profile[k * refine])
        tb = math.tan(steer_profile[k * refine + half_refine])
        tc = math.tan(steer_profile[(k + 1) * refine])

        h1 = PI - (PI - (yaw1 - yaw2)) % TWO_PI
        a1x = speed * math.cos(yaw1)
        a1y = speed * math.sin(yaw1)
        a1u = speed / wheelbase * ta
        a1w = speed / trailer_dist * (math.sin(h1) - hitch_dist / wheelbase * math.cos(h1) * ta)

        y1b = yaw1 + half_dt * a1u
        y2b = yaw2 + half_dt * a1w
        h2 = PI - (PI - (y1b - y2b)) % TWO_PI
        a2x = speed * math.cos(y1b)
        a2y = speed * math.sin(y1b)
        a2u = speed / wheelbase * tb
        a2w = speed / trailer_dist * (math.sin(h2) - hitch_dist / wheelbase * math.cos(h2) * tb)

        y1c = yaw1 + half_dt * a2u
        y2c = yaw2 + half_dt * a2w
        h3 = PI - (PI - (y1c - y2c)) % TWO_PI
        a3x = speed * math.cos(y1c)
        a3y = speed * math.sin(y1c)
        a3u = speed / wheelbase * tb
        a3w = speed / trailer_dist * (math.sin(h3) - hitch_dist / wheelbase * math.cos(h3) * tb)

        y1d = yaw1 + dt * a3u
        y2d = yaw2 + dt * a3w
        h4 = PI - (PI - (y1d - y2d)) % TWO_PI
        a4x = speed * math.cos(y1d)
        a4y = speed * math.sin(y1d)
        a4u = speed / wheelbase * tc
        a4w = speed / trailer_dist * (math.sin(h4) - hitch_dist / wheelbase * math.cos(h4) * tc)

        x = x + sixth_dt * (a1x + 2.0 * a2x + 2.0 * a3x + a4x)
        y = y + sixth_dt * (a1y + 2.0 * a2y + 2.0 * a3y + a4y)
        yaw1 = PI - (PI - (yaw1 + sixth_dt * (a1u + 2.0 * a2u + 2.0 * a3u + a4u))) % TWO_PI
        yaw2 = PI - (PI - (yaw2 + sixth_dt * (a1w + 2.0 * a2w + 2.0 * a3w + a4w))) % TWO_PI

        out[k + 1, 0] = x
        out[k + 1, 1] = y
        out[k + 1, 2] = yaw1
        out[k + 1, 3] = yaw2

        hitch = PI - (PI - (yaw1 - yaw2)) % TWO_PI
        if abs(hitch) > hitch_cap:
            return out, k
    return out, -1


# ---------------------------------------------------------------------------
# backend selection

if NUMBA_ENABLED:
    _jit = njit(cache=True)
    rollout = _jit(rollout_py)
    collides = _jit(collides_loop)
    dilate = _jit(dilate_loop)
    ik_reference = _jit(ik_reference_py)
    ik_forward = _jit(ik_forward_py)
else:
    rollout = rollout_py
    collides = collides_py
    dilate = dilate_py
    ik_reference = ik_reference_py
    ik_forward = ik_forward_py
