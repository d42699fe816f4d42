"""Noninteger Slater-type s orbitals and their one- and two-electron integrals.

Radial form N * r**(n-1) * exp(-zeta*r) with real principal number n > 0.5
(the floor keeps kinetic self-integrals convergent). All integrals reduce to
closed forms: gamma functions for the one-electron cases and gamma functions
combined with regularized incomplete beta functions for the electron-repulsion
integral, whose k = 0 multipole term is exact for s orbitals.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma, sqrt

import numpy as np
from scipy import special

MIN_PRINCIPAL = 0.5
DISTINCT_TOL = 1e-12
OVERLAP_MIN_EIG = 1e-10


class DivergentIntegralError(ValueError):
    """Raised when an integral's exponent constraints are violated."""


class DegenerateBasisError(ValueError):
    """Raised when the overlap matrix loses positive definiteness."""


def lower_incomplete_gamma(s: float, x: float) -> float:
    """gamma(s, x) = integral of t**(s-1) exp(-t) over [0, x]."""
    if s <= 0.0 or x < 0.0:
        raise ValueError("requires s > 0 and x >= 0")
    return float(special.gammainc(s, x) * gamma(s))


@dataclass(frozen=True)
class StoFunction:
    """One s-type radial basis function with real principal number."""

    n_star: float
    zeta: float
    l: int = 0
    m: int = 0

    def __post_init__(self) -> None:
        if self.zeta <= 0.0:
            raise ValueError("orbital exponent must be positive")
        if self.n_star <= MIN_PRINCIPAL:
            raise DivergentIntegralError(
                "principal number must exceed 0.5 for convergent kinetic integrals"
            )
        if self.l != 0 or self.m != 0:
            raise ValueError("only s-type functions (l = m = 0) are supported")


def normalization(f: StoFunction) -> float:
    """N with unit self-overlap: (2 zeta)**(n + 1/2) / sqrt(Gamma(2n + 1))."""
    return (2.0 * f.zeta) ** (f.n_star + 0.5) / sqrt(gamma(2.0 * f.n_star + 1.0))


def overlap(p: StoFunction, q: StoFunction) -> float:
    nu = p.n_star + q.n_star
    s = p.zeta + q.zeta
    return normalization(p) * normalization(q) * gamma(nu + 1.0) / s ** (nu + 1.0)


def kinetic(p: StoFunction, q: StoFunction) -> float:
    """Radial-Laplacian matrix element, symmetrized over the operand side."""
    nu = p.n_star + q.n_star
    if nu <= 1.0:
        raise DivergentIntegralError("kinetic integral requires n_p + n_q > 1")
    s = p.zeta + q.zeta
    w = normalization(p) * normalization(q)

    def applied_to(n: float, z: float) -> float:
        return -0.5 * w * (
            n * (n - 1.0) * gamma(nu - 1.0) / s ** (nu - 1.0)
            - 2.0 * z * n * gamma(nu) / s**nu
            + z * z * gamma(nu + 1.0) / s ** (nu + 1.0)
        )

    return 0.5 * (applied_to(q.n_star, q.zeta) + applied_to(p.n_star, p.zeta))


def nuclear_attraction(p: StoFunction, q: StoFunction, Z: int) -> float:
    if Z <= 0:
        raise ValueError("nuclear charge must be positive")
    nu = p.n_star + q.n_star
    s = p.zeta + q.zeta
    return -Z * normalization(p) * normalization(q) * gamma(nu) / s**nu


def _repulsion_radial(a, alpha, b, beta):
    """Closed form of the k = 0 double radial integral with 1/r_> coupling.

    Splitting at r_2 = t * r_1 turns each wedge into an incomplete beta
    integral; works elementwise on arrays.
    """
    z = beta / (alpha + beta)
    t1 = (
        special.gamma(a)
        * special.gamma(b + 1.0)
        * alpha ** (-a)
        * beta ** (-(b + 1.0))
        * special.betainc(b + 1.0, a, z)
    )
    t2 = (
        special.gamma(b)
        * special.gamma(a + 1.0)
        * beta ** (-b)
        * alpha ** (-(a + 1.0))
        * special.betainc(a + 1.0, b, 1.0 - z)
    )
    return t1 + t2


def coulomb_repulsion(
    p: StoFunction, q: StoFunction, r: StoFunction, s: StoFunction
) -> float:
    """Electron-repulsion integral (pq|rs) over s orbitals."""
    a = p.n_star + q.n_star
    b = r.n_star + s.n_star
    if a <= 0.0 or b <= 0.0:
        raise DivergentIntegralError("charge-distribution exponents must be positive")
    w = normalization(p) * normalization(q) * normalization(r) * normalization(s)
    return float(
        w * _repulsion_radial(a, p.zeta + q.zeta, b, r.zeta + s.zeta)
    )


@dataclass(frozen=True)
class BasisSet:
    """Ordered functions with validated distinctness and overlap definiteness."""

    functions: tuple[StoFunction, ...]
    label: str = ""

    def __post_init__(self) -> None:
        funcs = tuple(self.functions)
        object.__setattr__(self, "functions", funcs)
        for i, f in enumerate(funcs):
            for g in funcs[:i]:
                if abs(f.n_star - g.n_star) < DISTINCT_TOL and abs(f.zeta - g.zeta) < DISTINCT_TOL:
                    raise DegenerateBasisError(
                        f"duplicate basis function (n*={f.n_star}, zeta={f.zeta})"
                    )
        s = _overlap_matrix(funcs)
        if np.linalg.eigvalsh(s).min() <= OVERLAP_MIN_EIG:
            raise DegenerateBasisError("overlap matrix is numerically singular")

    @property
    def size(self) -> int:
        return len(self.functions)


@dataclass(frozen=True)
class IntegralTables:
    """Overlap, core Hamiltonian, and the (pq|rs) tensor of a basis."""

    overlap: np.ndarray
    core: np.ndarray
    eri: np.ndarray


def _arrays(funcs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = np.array([f.n_star for f in funcs])
    z = np.array([f.zeta for f in funcs])
    norms = np.array([normalization(f) for f in funcs])
    return n, z, norms


def _overlap_matrix(funcs) -> np.ndarray:
    n, z, norms = _arrays(funcs)
    nu = n[:, None] + n[None, :]
    s = z[:, None] + z[None, :]
    return norms[:, None] * norms[None, :] * special.gamma(nu + 1.0) / s ** (nu + 1.0)


def build_integral_tables(basis: BasisSet, Z: int) -> IntegralTables:
    """Fill S, h = T + V, and the repulsion tensor using 8-fold symmetry."""
    if Z <= 0:
        raise ValueError("nuclear charge must be positive")
    funcs = basis.functions
    m = len(funcs)
    n, z, norms = _arrays(funcs)

    s_mat = _overlap_matrix(funcs)
    if np.linalg.eigvalsh(s_mat).min() <= OVERLAP_MIN_EIG:
        raise DegenerateBasisError("overlap matrix is numerically singular")

    nu = n[:, None] + n[None, :]
    ssum = z[:, None] + z[None, :]
    w = norms[:, None] * norms[None, :]
    # Laplacian applied to the column function, then symmetrized.
    nq = n[None, :]
    zq = z[None, :]
    t_raw = -0.5 * w * (
        nq * (nq - 1.0) * special.gamma(nu - 1.0) / ssum ** (nu - 1.0)
        - 2.0 * zq * nq * special.gamma(nu) / ssum**nu
        + zq * zq * special.gamma(nu + 1.0) / ssum ** (nu + 1.0)
    )
    t_mat = 0.5 * (t_raw + t_raw.T)
    v_mat = -Z * w * special.gamma(nu) / ssum**nu

    # Canonical pairs p <= q, then canonical pair-of-pairs, vectorized.
    pairs = [(p, q) for p in range(m) for q in range(p, m)]
    pair_a = np.array([n[p] + n[q] for p, q in pairs])
    pair_alpha = np.array([z[p] + z[q] for p, q in pairs])
    pair_w = np.array([norms[p] * norms[q] for p, q in pairs])
    np_pairs = len(pairs)
    ii, jj = np.triu_indices(np_pairs)
    radial = _repulsion_radial(pair_a[ii], pair_alpha[ii], pair_a[jj], pair_alpha[jj])
    values = pair_w[ii] * pair_w[jj] * radial

    eri = np.zeros((m, m, m, m))
    for (i, j), val in zip(zip(ii, jj), values):
        p, q = pairs[i]
        r, s = pairs[j]
        for a, b in ((p, q), (q, p)):
            for c, d in ((r, s), (s, r)):
                eri[a, b, c, d] = val
                eri[c, d, a, b] = val

    if not (np.all(np.isfinite(s_mat)) and np.all(np.isfinite(t_mat)) and np.all(np.isfinite(eri))):
        raise DivergentIntegralError("non-finite integral encountered")
    return IntegralTables(overlap=s_mat, core=t_mat + v_mat, eri=eri)
