"""One-dimensional minimization along a direction inside box-induced step bounds.

Searches never evaluate outside [lambda_min, lambda_max]. Both engines open
with a three-point sweep (the endpoints plus 0 when it is interior, the
midpoint otherwise); the sweep seeds Brent's triple and guarantees the
returned value is no worse than the endpoints or the no-move point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ObjectiveHandle

GOLDEN_RATIO = (np.sqrt(5.0) - 1.0) / 2.0
MAX_LINE_ITERS = 200


@dataclass
class LineProblem:
    """A 1-D slice f(base_point + lam * direction) with a feasible lam range.

    ``f_base``, when given, is the already-known value at lam = 0 and saves
    one evaluation in the opening sweep.
    """

    base_point: np.ndarray
    direction: np.ndarray
    lambda_min: float
    lambda_max: float
    objective: ObjectiveHandle
    f_base: float | None = None

    def __post_init__(self) -> None:
        self.base_point = np.asarray(self.base_point, dtype=float)
        self.direction = np.asarray(self.direction, dtype=float)
        if not np.any(self.direction != 0.0):
            raise ValueError("direction must be nonzero")
        if not self.lambda_min < self.lambda_max:
            raise ValueError("lambda_min must be below lambda_max")

    def value(self, lam: float) -> float:
        lam = min(self.lambda_max, max(self.lambda_min, lam))
        return self.objective.evaluate(self.base_point + lam * self.direction)


def bracket_lambda_bounds(
    x: np.ndarray, d: np.ndarray, dom
) -> tuple[float, float]:
    """Largest [lmin, lmax] with x + lam*d inside the box for all lam in it.

    x must be feasible, so 0 is always contained. Coordinates with d[i] = 0
    impose no constraint.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    if x.shape != d.shape or x.shape != dom.lower.shape:
        raise ValueError("dimension mismatch between point, direction, and domain")
    if not np.any(d != 0.0):
        raise ValueError("direction must be nonzero")
    lmin, lmax = -np.inf, np.inf
    for i in range(x.size):
        if d[i] == 0.0:
            continue
        a = (dom.lower[i] - x[i]) / d[i]
        b = (dom.upper[i] - x[i]) / d[i]
        if d[i] < 0.0:
            a, b = b, a
        lmin = max(lmin, a)
        lmax = min(lmax, b)
    return float(lmin), float(lmax)


def _sweep(p: LineProblem) -> list[tuple[float, float]]:
    """Evaluate lmin, lmax, and 0 (or the midpoint); best-seen seed points."""
    if p.lambda_min <= 0.0 <= p.lambda_max:
        mid = 0.0
    else:
        mid = 0.5 * (p.lambda_min + p.lambda_max)
    out = []
    for lam in (p.lambda_min, mid, p.lambda_max):
        if lam == 0.0 and p.f_base is not None:
            out.append((0.0, p.f_base))
        else:
            out.append((lam, p.value(lam)))
    return out


def golden_section(p: LineProblem, eps: float) -> tuple[float, float]:
    """Golden-section search on [lambda_min, lambda_max].

    Stops when the two interior values differ by less than eps, when the
    bracket width falls below eps*max(1, |a|+|b|), or at the iteration cap.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    seen = _sweep(p)
    a, b = p.lambda_min, p.lambda_max
    r = GOLDEN_RATIO
    x1 = a + (1.0 - r) * (b - a)
    x2 = a + r * (b - a)
    f1 = p.value(x1)
    f2 = p.value(x2)
    seen += [(x1, f1), (x2, f2)]
    for _ in range(MAX_LINE_ITERS):
        if abs(f1 - f2) < eps or (b - a) < eps * max(1.0, abs(a) + abs(b)):
            break
        if f2 > f1:
            b, x2, f2 = x2, x1, f1
            x1 = a + (1.0 - r) * (b - a)
            f1 = p.value(x1)
            seen.append((x1, f1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + r * (b - a)
            f2 = p.value(x2)
            seen.append((x2, f2))
    return min(seen, key=lambda t: t[1])


def brent(p: LineProblem, eps: float) -> tuple[float, float]:
    """Safeguarded parabolic-interpolation / golden-section hybrid search.

    Parabolic steps through the three best points are taken whenever they are
    well-behaved; otherwise the method falls back to a golden-section step,
    so nonsmooth slices degrade gracefully. Failed evaluations surface as
    penalty values and the best point seen is always returned.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    seen = _sweep(p)
    a, b = p.lambda_min, p.lambda_max
    # Seed the working triple from the sweep so parabolic steps start at once.
    by_value = sorted(seen, key=lambda t: t[1])
    (x, fx), (w, fw), (v, fv) = by_value[0], by_value[1], by_value[2]
    d = e = b - a
    for _ in range(MAX_LINE_ITERS):
        m = 0.5 * (a + b)
        tol1 = eps * max(1.0, abs(x))
        tol2 = 2.0 * tol1
        if abs(x - m) <= tol2 - 0.5 * (b - a):
            break
        use_golden = True
        if abs(e) > tol1:
            # Fit a parabola through (x, w, v).
            rr = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            pnum = (x - v) * q - (x - w) * rr
            q = 2.0 * (q - rr)
            if q > 0.0:
                pnum = -pnum
            q = abs(q)
            e_prev = e
            e = d
            if abs(pnum) < abs(0.5 * q * e_prev) and q * (a - x) < pnum < q * (b - x):
                d = pnum / q
                u = x + d
                if (u - a) < tol2 or (b - u) < tol2:
                    d = tol1 if x < m else -tol1
                use_golden = False
        if use_golden:
            e = (b if x < m else a) - x
            d = (1.0 - GOLDEN_RATIO) * e
        u = x + (d if abs(d) >= tol1 else (tol1 if d > 0.0 else -tol1))
        fu = p.value(u)
        seen.append((u, fu))
        # Same value-resolution stop as the golden engine.
        if abs(fu - fx) < eps:
            break
        if fu <= fx:
            if u < x:
                b = x
            else:
                a = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv = w, fw
                w, fw = u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return min(seen, key=lambda t: t[1])


LINE_SEARCH_ENGINES = {"brent": brent, "golden": golden_section}
