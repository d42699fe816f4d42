"""Model-based minimization with a clipped RBF surrogate on the unit cube.

The surrogate interpolates an adaptive best-value subset of the samples in
normalized coordinates. Conditioning of the kernel matrix selects a diagonal
regularization from a fixed ladder, the system is solved by pseudo-inverse
on mean-centered values, and predictions are clipped to empirical bounds so
spurious extrema cannot attract the search. Candidates are drawn from nested
balls inside the trust region; the radius expands after consecutive
true-objective improvements and contracts after consecutive failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CACHE_RESOLUTION, Domain, ObjectiveHandle, cache_key, finish_result

DEFAULT_SHAPE = 1.5
RADIUS_INIT = 0.25
RADIUS_EXPAND = 1.6
RADIUS_SHRINK = 0.5
RADIUS_FLOOR = 1e-6
# Radius moves are debounced: expand after SUCC_TOL consecutive improvements,
# shrink after FAIL_TOL consecutive failures. Per-proposal updates make the
# radius a downward-drifting random walk whenever the improvement rate dips
# below ~0.6, which starves the search of usable step scales.
SUCC_TOL = 2
FAIL_TOL = 2
STALL_PROPOSALS = 20

KERNELS = {
    "gaussian": lambda r: np.exp(-(r**2)),
    "multiquadric": lambda r: np.sqrt(1.0 + r**2),
    "cubic": lambda r: r**3,
}


def normalize(x: np.ndarray, dom: Domain) -> np.ndarray:
    """Map a native point onto the unit cube."""
    return (np.asarray(x, dtype=float) - dom.lower) / dom.width


def denormalize(u: np.ndarray, dom: Domain) -> np.ndarray:
    """Inverse of :func:`normalize`."""
    return dom.lower + np.asarray(u, dtype=float) * dom.width


@dataclass
class SampleSet:
    """Evaluated points with their objective values, duplicates rejected."""

    points: list[np.ndarray] = field(default_factory=list)
    values: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._keys = {cache_key(p, CACHE_RESOLUTION) for p in self.points}

    def __len__(self) -> int:
        return len(self.points)

    @property
    def keys(self) -> set:
        return self._keys

    def key_of(self, point: np.ndarray) -> tuple[int, ...]:
        return cache_key(point, CACHE_RESOLUTION)

    def contains(self, point: np.ndarray) -> bool:
        return self.key_of(point) in self._keys

    def add(self, point: np.ndarray, value: float) -> None:
        key = self.key_of(point)
        if key in self._keys:
            raise ValueError("duplicate sample point at cache resolution")
        self._keys.add(key)
        self.points.append(np.asarray(point, dtype=float).copy())
        self.values.append(float(value))


@dataclass
class TrustRegion:
    center: np.ndarray
    radius: float


@dataclass
class Surrogate:
    centers: np.ndarray
    lam: np.ndarray
    shape: float
    value_bounds: tuple[float, float]
    regularization: float
    kernel: str = "gaussian"
    offset: float = 0.0

    def radial(self, u: np.ndarray) -> np.ndarray:
        """Kernel row phi(eps * |u - c_i|) against all centers."""
        r = np.sqrt(((self.centers - u) ** 2).sum(axis=1))
        return KERNELS[self.kernel](self.shape * r)


def select_active_subset(s: SampleSet, m_active: int) -> SampleSet:
    """The m_active samples with smallest values, insertion order on ties."""
    order = np.argsort(np.asarray(s.values), kind="stable")[: min(m_active, len(s))]
    return SampleSet([s.points[i] for i in order], [s.values[i] for i in order])


def regularization_for_condition(kappa: float) -> float:
    """Ladder mapping the kernel-matrix condition estimate to eta."""
    if kappa > 1e6:
        return 0.1
    if kappa > 1e4:
        return 0.05
    if kappa > 1e3:
        return 0.01
    return 0.005


def _pinv_symmetric(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Pseudo-inverse solve with eigenvalues truncated below 1e-12 * max."""
    w, v = np.linalg.eigh(a)
    cutoff = 1e-12 * np.abs(w).max()
    inv_w = np.where(np.abs(w) > cutoff, 1.0 / w, 0.0)
    return v @ (inv_w * (v.T @ rhs))


def build_surrogate(
    s_active: SampleSet,
    shape: float = DEFAULT_SHAPE,
    kernel: str = "gaussian",
    regularization: float | None = None,
) -> Surrogate:
    """Fit RBF weights on the active subset; no polynomial tail.

    With ``regularization=None``, eta comes from the condition-number ladder;
    passing an explicit value (e.g. 0.0) overrides it.
    """
    if len(s_active) < 1:
        raise ValueError("at least one sample point is required")
    if shape <= 0.0:
        raise ValueError("shape parameter must be positive")
    centers = np.array(s_active.points, dtype=float)
    f = np.asarray(s_active.values, dtype=float)
    diff = centers[:, None, :] - centers[None, :, :]
    phi = KERNELS[kernel](shape * np.sqrt((diff**2).sum(axis=-1)))
    # Phi and Phi + eta*I share eigenvectors, so one decomposition serves
    # both the condition estimate and the pseudo-inverse solve.
    w, v = np.linalg.eigh(phi)
    if regularization is None:
        sigma = np.abs(w)
        kappa = sigma.max() / (sigma.min() + 1e-20)
        regularization = regularization_for_condition(kappa)
    # Weights are fit on mean-centered values so the far-field prediction is
    # the sample mean, not zero; a zero far field turns unexplored space into
    # a fake optimum whenever the objective is sign-definite.
    offset = float(f.mean())
    w_reg = w + regularization
    cutoff = 1e-12 * np.abs(w_reg).max()
    inv_w = np.where(np.abs(w_reg) > cutoff, 1.0 / w_reg, 0.0)
    lam = v @ (inv_w * (v.T @ (f - offset)))
    fmin, fmax = float(f.min()), float(f.max())
    bounds = (fmin - 2.0 * (fmax - fmin), fmax)
    return Surrogate(centers, lam, shape, bounds, regularization, kernel, offset)


def surrogate_eval(m: Surrogate, u: np.ndarray, clipped: bool = True) -> float:
    g = m.offset + float(m.lam @ m.radial(np.asarray(u, dtype=float)))
    if clipped:
        lo, hi = m.value_bounds
        g = min(hi, max(lo, g))
    return g


def _surrogate_eval_batch(m: Surrogate, u: np.ndarray) -> np.ndarray:
    """Clipped surrogate values for a (n, D) batch of points."""
    dist = np.sqrt(((u[:, None, :] - m.centers[None, :, :]) ** 2).sum(axis=-1))
    g = m.offset + KERNELS[m.kernel](m.shape * dist) @ m.lam
    lo, hi = m.value_bounds
    return np.clip(g, lo, hi)


def _ball_draws(tr: TrustRegion, n: int, rng: np.random.Generator) -> np.ndarray:
    """n uniform draws from the ball, rejection-sampled into the unit cube."""
    dim = tr.center.size
    direction = rng.standard_normal((n, dim))
    norms = np.linalg.norm(direction, axis=1)
    norms[norms == 0.0] = 1.0
    radius = tr.radius * rng.random(n) ** (1.0 / dim)
    u = tr.center + direction / norms[:, None] * radius[:, None]
    for _ in range(10):
        outside = np.any((u < 0.0) | (u > 1.0), axis=1)
        if not outside.any():
            break
        k = int(outside.sum())
        direction = rng.standard_normal((k, dim))
        norms = np.linalg.norm(direction, axis=1)
        norms[norms == 0.0] = 1.0
        radius = tr.radius * rng.random(k) ** (1.0 / dim)
        u[outside] = tr.center + direction / norms[:, None] * radius[:, None]
    return np.clip(u, 0.0, 1.0)


# Candidate draws cover the trust ball at three nested scales; single-scale
# shell sampling leaves no usable step once the radius outruns the local
# improvement scale.
CANDIDATE_SCALES = (1.0, 0.1, 0.01)


def propose_candidate(
    m: Surrogate,
    tr: TrustRegion,
    n_cand: int,
    rng: np.random.Generator,
    exclude_keys: set | None = None,
) -> np.ndarray:
    """Best clipped-surrogate point among random draws inside the trust ball.

    Draws are split across nested balls of radius, radius/10, and radius/100
    around the center (uniform within each, rejection-sampled into the unit
    cube with clipping as the fallback). Candidates colliding with
    ``exclude_keys`` at the cache resolution are discarded before the argmin;
    ties keep the first draw.
    """
    if n_cand < 1:
        raise ValueError("n_cand must be at least 1")
    n_per = max(1, n_cand // len(CANDIDATE_SCALES))
    chunks = []
    for i, scale in enumerate(CANDIDATE_SCALES):
        n = n_cand - n_per * (len(CANDIDATE_SCALES) - 1) if i == 0 else n_per
        chunks.append(_ball_draws(TrustRegion(tr.center, tr.radius * scale), n, rng))
    u = np.vstack(chunks)
    if exclude_keys:
        fresh = [not (cache_key(row, CACHE_RESOLUTION) in exclude_keys) for row in u]
        u = u[np.array(fresh, dtype=bool)]
    if len(u) == 0:
        dim = tr.center.size
        while True:
            row = rng.random(dim)
            if not exclude_keys or cache_key(row, CACHE_RESOLUTION) not in exclude_keys:
                return row
    scores = _surrogate_eval_batch(m, u)
    return u[int(np.argmin(scores))].copy()


def _latin_hypercube(n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    u = np.empty((n, dim))
    for j in range(dim):
        u[:, j] = (rng.permutation(n) + rng.random(n)) / n
    return u


def rbf_minimize(
    handle: ObjectiveHandle,
    dom: Domain,
    x0: np.ndarray,
    budget: int,
    eps: float = 1e-12,
    seed: int | np.random.Generator | None = None,
    kernel: str = "gaussian",
    shape: float = DEFAULT_SHAPE,
    m_active: int | None = None,
    n_cand: int | None = None,
) -> "OptResult":
    """Surrogate-driven minimization under a strict evaluation budget.

    Starts from x0 plus a seeded Latin-hypercube design of 2D+1 points, then
    alternates surrogate fits and single true evaluations until the budget,
    the trust-radius floor, or 20 stalled proposals stop it.
    """
    x0 = np.asarray(x0, dtype=float)
    if not dom.contains(x0):
        raise ValueError("start point must lie inside the domain")
    dim = dom.dimension
    if budget < 2 * (dim + 1):
        raise ValueError("budget must be at least 2*(D+1)")
    if not isinstance(seed, np.random.Generator):
        seed = np.random.default_rng(seed)
    rng = seed
    if m_active is None:
        m_active = 5 * dim + 10
    if n_cand is None:
        n_cand = 50 * dim

    start_count = handle.eval_count
    samples = SampleSet()
    samples.add(normalize(x0, dom), handle.evaluate(x0))
    for u in _latin_hypercube(2 * dim + 1, dim, rng):
        f = handle.evaluate(denormalize(u, dom))
        if not samples.contains(u):
            samples.add(u, f)

    def best_index() -> int:
        return int(np.argmin(samples.values))

    best = best_index()
    center = samples.points[best].copy()
    best_f = samples.values[best]
    radius = RADIUS_INIT
    best_history = [best_f]
    termination = "budget"
    proposals = 0
    improved_once = False
    successes = failures = 0
    while handle.eval_count - start_count < budget:
        subset = select_active_subset(samples, m_active)
        model = build_surrogate(subset, shape=shape, kernel=kernel)
        cand = propose_candidate(
            model, TrustRegion(center, radius), n_cand, rng, exclude_keys=samples.keys
        )
        f = handle.evaluate(denormalize(cand, dom))
        samples.add(cand, f)
        proposals += 1
        if f < best_f:
            best_f = f
            center = cand.copy()
            improved_once = True
            successes += 1
            failures = 0
            if successes >= SUCC_TOL:
                radius = min(1.0, RADIUS_EXPAND * radius)
                successes = 0
        else:
            failures += 1
            successes = 0
            if failures >= FAIL_TOL:
                radius = max(RADIUS_FLOOR, RADIUS_SHRINK * radius)
                failures = 0
        best_history.append(best_f)
        # The floor is a clamp the radius recovers from through improvement
        # streaks; the stall window stops runs once they have improved at
        # least once (before that the search is still exploring).
        if (
            improved_once
            and len(best_history) > STALL_PROPOSALS
            and best_history[-1 - STALL_PROPOSALS] - best_f < eps
        ):
            termination = "step-floor" if radius <= RADIUS_FLOOR else "stagnation"
            break

    return finish_result(
        handle, start_count, proposals, termination, extras={"radius": radius}
    )
