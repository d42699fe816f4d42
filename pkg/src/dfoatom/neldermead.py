"""Nelder-Mead simplex minimizer with bound reflection and restarts.

Coefficients: reflection 1.0, expansion 2.0, contraction 0.5, shrink 0.25.
Every candidate is folded into the box by the triangle-wave reflection before
evaluation. Convergence combines a geometric test (simplex diameter) with a
functional one (value spread); stagnation triggers an anisotropic rebuild of
the simplex around the incumbent best.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Domain, ObjectiveHandle, finish_result, reflect_into_bounds

ALPHA_REFLECT = 1.0
GAMMA_EXPAND = 2.0
RHO_CONTRACT = 0.5
SIGMA_SHRINK = 0.25

DIAMETER_TOL = 1e-8
DEFAULT_STEP_FRACTION = 0.1

# Restart policy: trigger window, improvement threshold factor, cap.
RESTART_WINDOW = 30
RESTART_EPS_FACTOR = 10.0
MAX_RESTARTS = 3
RESTART_PERTURBATION = 1e-6


@dataclass
class Simplex:
    """D+1 vertices with their values; kept sorted best-first."""

    vertices: np.ndarray
    values: np.ndarray
    sorted: bool = False

    def rank(self) -> None:
        order = np.argsort(self.values, kind="stable")
        self.vertices = self.vertices[order]
        self.values = self.values[order]
        self.sorted = True

    def diameter(self) -> float:
        diff = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((diff**2).sum(axis=-1)).max())

    def spread(self) -> float:
        return float(np.max(np.abs(self.values[1:] - self.values[0])))


def init_simplex(
    x0: np.ndarray,
    dom: Domain,
    step_fraction: float = DEFAULT_STEP_FRACTION,
    handle: ObjectiveHandle | None = None,
) -> Simplex:
    """Axis-aligned simplex around x0 with steps proportional to the box width.

    Offsets that would leave the box fold back inside, so vertices stay
    affinely independent even when x0 sits on a bound.
    """
    if not 0.0 < step_fraction <= 0.5:
        raise ValueError("step_fraction must lie in (0, 0.5]")
    x0 = np.asarray(x0, dtype=float)
    dim = dom.dimension
    vertices = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        v = x0.copy()
        v[i] += step_fraction * dom.width[i]
        vertices[i + 1] = reflect_into_bounds(v, dom)
    values = np.array([handle.evaluate(v) for v in vertices]) if handle else np.full(dim + 1, np.nan)
    return Simplex(vertices, values)


def nm_step(s: Simplex, handle: ObjectiveHandle, dom: Domain) -> Simplex:
    """One reflect / expand / contract / shrink update of the worst vertex."""
    if not s.sorted:
        s.rank()
    dim = dom.dimension
    centroid = s.vertices[:dim].mean(axis=0)
    worst = s.vertices[dim]
    f_worst = s.values[dim]

    x_r = reflect_into_bounds(centroid + ALPHA_REFLECT * (centroid - worst), dom)
    f_r = handle.evaluate(x_r)

    if f_r < s.values[0]:
        x_e = reflect_into_bounds(centroid + GAMMA_EXPAND * (x_r - centroid), dom)
        f_e = handle.evaluate(x_e)
        if f_e < f_r:
            s.vertices[dim], s.values[dim] = x_e, f_e
        else:
            s.vertices[dim], s.values[dim] = x_r, f_r
    elif f_r < s.values[dim - 1]:
        s.vertices[dim], s.values[dim] = x_r, f_r
    else:
        if f_r < f_worst:
            x_c = reflect_into_bounds(centroid + RHO_CONTRACT * (x_r - centroid), dom)
            f_c = handle.evaluate(x_c)
            accepted = f_c <= f_r
        else:
            x_c = reflect_into_bounds(centroid - RHO_CONTRACT * (x_r - centroid), dom)
            f_c = handle.evaluate(x_c)
            accepted = f_c < f_worst
        if accepted:
            s.vertices[dim], s.values[dim] = x_c, f_c
        else:
            best = s.vertices[0]
            for i in range(1, dim + 1):
                s.vertices[i] = reflect_into_bounds(
                    best + SIGMA_SHRINK * (s.vertices[i] - best), dom
                )
                s.values[i] = handle.evaluate(s.vertices[i])
    s.sorted = False
    s.rank()
    return s


def _restart_simplex(s: Simplex, dom: Domain, handle, rng) -> Simplex:
    """Rebuild around the best vertex with halved edge-based steps."""
    best = s.vertices[0].copy()
    extent = np.abs(s.vertices - best).max(axis=0)
    steps = np.maximum(0.5 * extent, 1e-8 * dom.width)
    vertices = np.tile(best, (dom.dimension + 1, 1))
    values = np.empty(dom.dimension + 1)
    values[0] = s.values[0]
    for i in range(dom.dimension):
        v = best.copy()
        v[i] += steps[i]
        v += rng.uniform(-1.0, 1.0, size=dom.dimension) * RESTART_PERTURBATION * dom.width
        vertices[i + 1] = reflect_into_bounds(v, dom)
        values[i + 1] = handle.evaluate(vertices[i + 1])
    return Simplex(vertices, values)


def nm_minimize(
    handle: ObjectiveHandle,
    dom: Domain,
    x0: np.ndarray,
    eps: float = 1e-12,
    max_iters: int = 10000,
    step_fraction: float = DEFAULT_STEP_FRACTION,
    rng: np.random.Generator | int | None = None,
) -> "OptResult":
    """Run the simplex loop until diameter, spread, or budget terminates it.

    A run that stops improving by more than 10*eps over 30 consecutive
    iterations is restarted (at most three times) from the incumbent best
    with edge-scaled steps and tiny seeded perturbations.
    """
    if eps <= 0.0 or max_iters < 1:
        raise ValueError("eps must be positive and max_iters at least 1")
    x0 = np.asarray(x0, dtype=float)
    if not dom.contains(x0):
        raise ValueError("start point must lie inside the domain")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)

    start_count = handle.eval_count
    simplex = init_simplex(x0, dom, step_fraction, handle)
    simplex.rank()

    termination = "budget"
    restarts = 0
    window_best = simplex.values[0]
    window_len = 0
    iters = 0
    for iters in range(1, max_iters + 1):
        simplex = nm_step(simplex, handle, dom)
        if simplex.diameter() < DIAMETER_TOL:
            termination = "step-floor"
            break
        if simplex.spread() < eps:
            termination = "tolerance-met"
            break
        window_len += 1
        if window_len >= RESTART_WINDOW:
            if window_best - simplex.values[0] < RESTART_EPS_FACTOR * eps:
                if restarts >= MAX_RESTARTS:
                    termination = "restart-exhausted"
                    break
                simplex = _restart_simplex(simplex, dom, handle, rng)
                simplex.rank()
                restarts += 1
            window_best = simplex.values[0]
            window_len = 0

    return finish_result(
        handle, start_count, iters, termination, extras={"restarts": restarts}
    )
