"""Powell's conjugate-direction minimizer with direction rotation."""

from __future__ import annotations

import numpy as np

from .core import Domain, ObjectiveHandle, clip_to_bounds, finish_result
from .linesearch import LINE_SEARCH_ENGINES, LineProblem, bracket_lambda_bounds

# Below this norm a new direction would collapse the set's rank.
DEGENERATE_DIRECTION_NORM = 1e-14

# Cycles with improvement below eps tolerated before declaring stagnation.
STAGNATION_CYCLES = 3


def _line_minimize(handle, dom, x, d, f_x, eps_ls, engine) -> tuple[np.ndarray, float]:
    """One bounded line search; returns the clipped new point and its value."""
    lmin, lmax = bracket_lambda_bounds(x, d, dom)
    if not lmin < lmax:
        return x, f_x
    problem = LineProblem(x, d, lmin, lmax, handle, f_base=f_x)
    lam, f = engine(problem, eps_ls)
    if f > f_x:
        return x, f_x
    return clip_to_bounds(x + lam * d, dom), f


def powell_cd_minimize(
    handle: ObjectiveHandle,
    dom: Domain,
    x0: np.ndarray,
    eps: float = 1e-12,
    max_cycles: int = 200,
    line_search: str = "brent",
) -> "OptResult":
    """Minimize by cyclic line searches with conjugate-direction rotation.

    Each cycle line-searches along all D directions, builds the displacement
    direction from the cycle's net move, rotates it into the set in place of
    the oldest direction, and line-searches along it once more. Terminates on
    the absolute objective change between consecutive cycle ends, on a
    stagnation counter, or at the cycle budget.
    """
    if eps <= 0.0 or max_cycles < 1:
        raise ValueError("eps must be positive and max_cycles at least 1")
    x0 = np.asarray(x0, dtype=float)
    if not dom.contains(x0):
        raise ValueError("start point must lie inside the domain")
    engine = LINE_SEARCH_ENGINES[line_search]
    eps_ls = max(eps / 10.0, 1e-14)
    dim = dom.dimension

    start_count = handle.eval_count
    directions = list(np.eye(dim))
    direction_history = [np.array(directions)]
    cycle_values: list[float] = []

    x = x0.copy()
    f_prev = handle.evaluate(x)
    termination = "budget"
    stagnant = 0
    cycles = 0
    for cycles in range(1, max_cycles + 1):
        cycle_start = x.copy()
        f_cur = f_prev
        for d in directions:
            x, f_cur = _line_minimize(handle, dom, x, d, f_cur, eps_ls, engine)
        d_new = x - cycle_start
        norm = float(np.linalg.norm(d_new))
        if norm >= DEGENERATE_DIRECTION_NORM:
            directions = directions[1:] + [d_new]
            x, f_cur = _line_minimize(handle, dom, x, d_new, f_cur, eps_ls, engine)
        else:
            # Rank collapse guard: restart from the identity basis.
            directions = list(np.eye(dim))
        direction_history.append(np.array(directions))
        cycle_values.append(f_cur)

        improvement = abs(f_prev - f_cur)
        f_prev = f_cur
        if improvement <= eps:
            termination = "tolerance-met"
            break
        stagnant = stagnant + 1 if improvement < eps else 0
        if stagnant >= STAGNATION_CYCLES:
            termination = "stagnation"
            break

    return finish_result(
        handle,
        start_count,
        cycles,
        termination,
        extras={
            "direction_history": direction_history,
            "cycle_values": cycle_values,
        },
    )
