"""Coordinate / compass / star pattern search with adaptive step control.

Polling is opportunistic: the most recently successful direction is probed
first and, when it keeps paying off, the remaining directions are skipped.
All evaluations go through the handle's cache so re-polled trial points cost
nothing. Step lengths expand by 3 or 5 on success (depending on the streak)
and contract by 0.6 / 0.3 / 0.1 as failures accumulate; accepted moves are
followed by up to three acceleration steps along the displacement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Domain, ObjectiveHandle, clip_to_bounds, finish_result

PATTERN_KINDS = ("coordinate", "compass", "star")

GAMMA_SINGLE = 3.0
GAMMA_STREAK = 5.0
BETA_SCHEDULE = (0.6, 0.3, 0.1)

ACCEL_INIT = 3.0
ACCEL_GROW = 1.8
ACCEL_SHRINK = 0.7
ACCEL_BOUNDS = (2.5, 12.0)
ACCEL_MAX_STEPS = 3

MAX_FAILED_POLLS = 4
MAX_IDLE_ITERS = 10
PROGRESS_WINDOW = 25
PROGRESS_MIN_RELATIVE = 1e-12
RESTART_STEP_FRACTION = 0.2


@dataclass(frozen=True)
class Pattern:
    kind: str
    directions: np.ndarray


def make_pattern(kind: str, dim: int) -> Pattern:
    """Build the direction set; star diagonals are unit-normalized.

    Compass and star are positive spanning sets, so a descent direction
    always exists for smooth objectives; coordinate polling alone is not
    (it only probes the positive axis directions) and can stall where the
    others would progress.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if kind not in PATTERN_KINDS:
        raise ValueError(f"unknown pattern kind {kind!r}")
    eye = np.eye(dim)
    if kind == "coordinate":
        dirs = [eye[i] for i in range(dim)]
    else:
        dirs = []
        for i in range(dim):
            dirs += [eye[i], -eye[i]]
        if kind == "star":
            for i in range(dim):
                for j in range(i):
                    for sign in (1.0, -1.0):
                        d = eye[i] + sign * eye[j]
                        dirs.append(d / np.linalg.norm(d))
    return Pattern(kind, np.array(dirs))


@dataclass
class PSState:
    current_x: np.ndarray
    current_f: float
    step: float
    consecutive_successes: int = 0
    consecutive_failures: int = 0
    last_success_direction: np.ndarray | None = None
    accel_factor: float = ACCEL_INIT
    restart_used: bool = False
    step_history: list[float] = field(default_factory=list)


def poll(
    state: PSState, pattern: Pattern, handle: ObjectiveHandle, dom: Domain
) -> tuple[bool, tuple[np.ndarray, float]]:
    """Probe the trial set around the incumbent; return the best improvement.

    The previously successful direction short-circuits the poll when it
    improves again; otherwise every direction is evaluated and the best
    strictly improving trial wins (first index on ties).
    """
    x, fx = state.current_x, state.current_f
    if state.last_success_direction is not None:
        y = clip_to_bounds(x + state.step * state.last_success_direction, dom)
        fy = handle.evaluate(y)
        if fy < fx:
            return True, (y, fy)
    best_y, best_f, best_dir = None, fx, None
    for d in pattern.directions:
        y = clip_to_bounds(x + state.step * d, dom)
        fy = handle.evaluate(y)
        if fy < best_f:
            best_y, best_f, best_dir = y, fy, d
    if best_y is None:
        return False, (x, fx)
    state.last_success_direction = best_dir
    return True, (best_y, best_f)


def _accelerate(state: PSState, d_accel: np.ndarray, handle, dom) -> None:
    """Chase the displacement direction while it keeps improving."""
    lo, hi = ACCEL_BOUNDS
    for _ in range(ACCEL_MAX_STEPS):
        cand = clip_to_bounds(state.current_x + state.accel_factor * d_accel, dom)
        fc = handle.evaluate(cand)
        if fc < state.current_f:
            state.current_x, state.current_f = cand, fc
            state.accel_factor = min(hi, state.accel_factor * ACCEL_GROW)
        else:
            state.accel_factor = max(lo, state.accel_factor * ACCEL_SHRINK)
            break


def ps_minimize(
    handle: ObjectiveHandle,
    dom: Domain,
    x0: np.ndarray,
    step0: float | None = None,
    eps: float = 1e-12,
    eps_min: float = 1e-10,
    max_iters: int = 2000,
    pattern: str = "compass",
) -> "OptResult":
    """Pattern-search loop with progress-based stopping and a single restart.

    Enables caching on the handle (hash of coordinates rounded at the cache
    resolution) so numerically identical trial points are evaluated once.
    """
    if eps <= 0.0 or eps_min <= 0.0:
        raise ValueError("tolerances must be positive")
    x0 = np.asarray(x0, dtype=float)
    if not dom.contains(x0):
        raise ValueError("start point must lie inside the domain")
    if step0 is None:
        step0 = 0.25 * float(dom.width.min())
    if step0 <= 0.0:
        raise ValueError("step0 must be positive")
    handle.cache_enabled = True

    # Steps beyond the widest box edge only generate clipped corner trials
    # that the cache already holds, so expansion is capped at the box scale.
    step_cap = float(dom.width.max())

    pat = make_pattern(pattern, dom.dimension)
    start_count = handle.eval_count
    f0 = handle.evaluate(x0)
    state = PSState(current_x=x0.copy(), current_f=f0, step=min(step0, step_cap))
    state.step_history.append(state.step)

    improvements: list[float] = []
    idle_iters = 0
    window_best = f0
    termination = "budget"
    iters = 0
    for iters in range(1, max_iters + 1):
        f_before = state.current_f
        improved, (y, fy) = poll(state, pat, handle, dom)
        if improved:
            state.consecutive_successes += 1
            state.consecutive_failures = 0
            gamma = GAMMA_STREAK if state.consecutive_successes >= 2 else GAMMA_SINGLE
            state.step = min(state.step * gamma, step_cap)
            d_accel = y - state.current_x
            state.current_x, state.current_f = y, fy
            if np.any(d_accel != 0.0):
                _accelerate(state, d_accel, handle, dom)
            idle_iters = 0
        else:
            state.consecutive_failures += 1
            state.consecutive_successes = 0
            beta = BETA_SCHEDULE[min(state.consecutive_failures, 3) - 1]
            state.step *= beta
            idle_iters += 1
        state.step_history.append(state.step)
        improvements.append(f_before - state.current_f)

        if state.step < eps_min:
            termination = "step-floor"
            break
        if improved and improvements[-1] < 50.0 * eps:
            termination = "tolerance-met"
            break
        last3 = improvements[-3:]
        if len(last3) == 3 and max(last3) > 0.0 and np.mean(last3) < 200.0 * eps:
            termination = "tolerance-met"
            break
        if state.consecutive_failures >= MAX_FAILED_POLLS:
            termination = "stagnation"
            break
        if idle_iters >= MAX_IDLE_ITERS:
            termination = "stagnation"
            break
        if iters % PROGRESS_WINDOW == 0:
            progress = (window_best - state.current_f) / max(1.0, abs(window_best))
            if progress < PROGRESS_MIN_RELATIVE:
                if state.restart_used:
                    termination = "restart-exhausted"
                    break
                state.restart_used = True
                state.step = RESTART_STEP_FRACTION * min(step0, step_cap)
                state.consecutive_failures = 0
                state.consecutive_successes = 0
                state.last_success_direction = None
                idle_iters = 0
            window_best = state.current_f

    return finish_result(
        handle,
        start_count,
        iters,
        termination,
        extras={"step_history": state.step_history, "restart_used": state.restart_used},
    )
