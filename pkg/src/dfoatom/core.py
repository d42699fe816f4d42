"""Shared optimization substrate: box domains, objective wrapping, results.

Every minimizer in this package works on an :class:`ObjectiveHandle` bound to
a :class:`Domain`. The handle counts true evaluations, optionally caches them
on a quantized coordinate key, maps evaluator failures to a large finite
penalty so comparisons stay total, and records a per-evaluation trace from
which results and CSV outputs are derived.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# Large but finite stand-in for failed evaluations; keeps orderings total.
PENALTY_VALUE = 1.0e10

# Quantization step for evaluation cache keys.
CACHE_RESOLUTION = 1e-10

TERMINATION_REASONS = (
    "tolerance-met",
    "step-floor",
    "stagnation",
    "budget",
    "restart-exhausted",
)


@dataclass(frozen=True)
class Domain:
    """Box constraints lower <= x <= upper."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size < 1:
            raise ValueError("bounds must be 1-D vectors of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("bounds must be finite")
        if not np.all(lo < hi):
            raise ValueError("lower bound must be strictly below upper bound")

    @property
    def dimension(self) -> int:
        return int(self.lower.size)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))


def clip_to_bounds(x: np.ndarray, dom: Domain) -> np.ndarray:
    """Per-coordinate clamp of x into the box."""
    x = np.asarray(x, dtype=float)
    if x.shape != dom.lower.shape:
        raise ValueError(f"point has dimension {x.size}, domain has {dom.dimension}")
    return np.minimum(dom.upper, np.maximum(dom.lower, x))


def reflect_into_bounds(x: np.ndarray, dom: Domain) -> np.ndarray:
    """Fold x into the box with a triangle wave of period 2*(upper-lower).

    Identity on interior points; mirrors overshoots back across the violated
    face, however far outside they land.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != dom.lower.shape:
        raise ValueError(f"point has dimension {x.size}, domain has {dom.dimension}")
    w = dom.width
    if np.any(w <= 0.0):
        raise ValueError("zero-width interval cannot be reflected into")
    t = np.mod(x - dom.lower, 2.0 * w)
    folded = np.where(t <= w, t, 2.0 * w - t)
    return dom.lower + folded


def cache_key(x: np.ndarray, resolution: float = CACHE_RESOLUTION) -> tuple[int, ...]:
    """Hashable key identifying x up to coordinate-wise rounding."""
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")
    return tuple(int(round(float(v) / resolution)) for v in np.asarray(x, dtype=float))


@dataclass(frozen=True)
class EvalRecord:
    """One true objective evaluation (cache hits are not recorded)."""

    index: int
    x: np.ndarray
    f: float
    best_f: float
    failed: bool = False


class ObjectiveHandle:
    """Counted, cached, failure-tolerant wrapper around a scalar objective.

    The evaluator must be deterministic within a run. Exceptions and
    non-finite results both count as failures and map to ``penalty_value``.
    Each run owns its handle; there is no shared state across handles.
    """

    def __init__(
        self,
        dimension: int,
        evaluator: Callable[[np.ndarray], float],
        penalty_value: float = PENALTY_VALUE,
        cache: bool = False,
        cache_resolution: float = CACHE_RESOLUTION,
    ):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = int(dimension)
        self.evaluator = evaluator
        self.penalty_value = float(penalty_value)
        self.cache_enabled = bool(cache)
        self.cache_resolution = float(cache_resolution)
        self.cache: dict[tuple[int, ...], float] = {}
        self.eval_count = 0
        self.trace: list[EvalRecord] = []
        self.best_f = np.inf
        self.best_x: np.ndarray | None = None

    def evaluate(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        if x.size != self.dimension:
            raise ValueError(f"point has dimension {x.size}, objective expects {self.dimension}")
        key = None
        if self.cache_enabled:
            key = cache_key(x, self.cache_resolution)
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        failed = False
        try:
            f = float(self.evaluator(x))
            if not np.isfinite(f):
                failed = True
        except Exception:
            failed = True
        if failed:
            f = self.penalty_value
        self.eval_count += 1
        if f < self.best_f:
            self.best_f = f
            self.best_x = x.copy()
        self.trace.append(EvalRecord(self.eval_count, x.copy(), f, self.best_f, failed))
        if key is not None:
            self.cache[key] = f
        return f


@dataclass
class OptResult:
    """Outcome of one minimization run."""

    best_x: np.ndarray
    best_f: float
    n_evals: int
    n_iterations: int
    termination: str
    trace: list[EvalRecord] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.termination not in TERMINATION_REASONS:
            raise ValueError(f"unknown termination reason {self.termination!r}")


def finish_result(
    handle: ObjectiveHandle,
    start_count: int,
    n_iterations: int,
    termination: str,
    extras: dict | None = None,
) -> OptResult:
    """Assemble an OptResult from the handle's trace delta for this run."""
    trace = handle.trace[start_count:]
    best = min(trace, key=lambda r: r.f)
    return OptResult(
        best_x=best.x.copy(),
        best_f=best.f,
        n_evals=handle.eval_count - start_count,
        n_iterations=n_iterations,
        termination=termination,
        trace=trace,
        extras=extras or {},
    )
