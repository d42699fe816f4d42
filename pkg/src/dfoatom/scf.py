"""Closed-shell Hartree-Fock-Roothaan SCF and the orbital-parameter objective.

The fixed-point loop diagonalizes the Loewdin-transformed Fock matrix, builds
the occupancy-2 density from the lowest orbitals, and stops when both the
energy change and the density change fall below tolerance. The energy is
computed from the explicit double-sum quadratic form and from the trace form
every iteration; their gap is kept in the state as an internal consistency
signal. The nonlinear objective instantiates a basis from a template and a
parameter vector, runs SCF, and maps every failure mode to the penalty value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PENALTY_VALUE
from .sto import (
    BasisSet,
    DegenerateBasisError,
    IntegralTables,
    StoFunction,
    build_integral_tables,
)

LOWDIN_MIN_EIG = 1e-10
OSCILLATION_DAMPING = 0.3
OSCILLATION_FLIPS = 3


def eigh_symmetric(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a symmetric matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    return np.linalg.eigh(a)


def lowdin_orthogonalization(s: np.ndarray) -> np.ndarray:
    """X = S**(-1/2) via eigendecomposition; X.T @ S @ X = I."""
    w, v = eigh_symmetric(s)
    if w.min() <= LOWDIN_MIN_EIG:
        raise DegenerateBasisError("overlap matrix is numerically singular")
    return v @ np.diag(w**-0.5) @ v.T


@dataclass(frozen=True)
class AtomSpec:
    """Closed-shell atom: nuclear charge and (even) electron count."""

    Z: int
    n_electrons: int

    def __post_init__(self) -> None:
        if self.Z < 1 or self.n_electrons < 2:
            raise ValueError("need a positive charge and at least two electrons")
        if self.n_electrons % 2 != 0:
            raise ValueError("closed shells require an even electron count")

    @property
    def n_occupied(self) -> int:
        return self.n_electrons // 2


@dataclass(frozen=True)
class SCFConfig:
    max_iterations: int = 200
    energy_tol: float = 1e-12
    density_tol: float = 1e-10
    damping: float = 0.0

    def __post_init__(self) -> None:
        if self.energy_tol <= 0.0 or self.density_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must lie in [0, 1)")


@dataclass
class SCFState:
    coefficients: np.ndarray
    density: np.ndarray
    energy: float
    iteration: int
    converged: bool
    # largest disagreement, over all iterations, between the double-sum and
    # trace forms of the energy
    energy_form_gap: float = 0.0


def _coulomb_exchange(eri: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    j = np.einsum("pqrs,rs->pq", eri, d)
    k = np.einsum("psrq,rs->pq", eri, d)
    return j, k


def scf_energy(atom: AtomSpec, tables: IntegralTables, cfg: SCFConfig = SCFConfig()) -> SCFState:
    """Run the fixed-point SCF loop from the core-Hamiltonian guess.

    Damping starts at cfg.damping and is raised to 0.3 if the energy change
    alternates sign three times, which breaks charge-sloshing oscillations.
    """
    h = tables.core
    m = h.shape[0]
    nocc = atom.n_occupied
    if nocc > m:
        raise ValueError("more occupied orbitals than basis functions")
    x = lowdin_orthogonalization(tables.overlap)

    damping = cfg.damping
    fock = h.copy()
    c = np.zeros((m, m))
    d = np.zeros((m, m))
    d_old = None
    e_old = None
    de_prev_sign = 0
    flips = 0
    energy = 0.0
    gap = 0.0
    converged = False
    iteration = 0
    for iteration in range(1, cfg.max_iterations + 1):
        _, cp = eigh_symmetric(x.T @ fock @ x)
        c = x @ cp
        occ = c[:, :nocc]
        d_new = 2.0 * occ @ occ.T
        d = d_new if d_old is None or damping == 0.0 else (1.0 - damping) * d_new + damping * d_old

        j, k = _coulomb_exchange(tables.eri, d)
        fock = h + j - 0.5 * k
        energy = float(np.sum(d * h) + 0.5 * np.sum(d * (j - 0.5 * k)))
        quadratic = float(
            np.sum(d * h)
            + 0.5 * np.einsum("pq,rs,pqrs->", d, d, tables.eri)
            - 0.25 * np.einsum("pq,rs,psrq->", d, d, tables.eri)
        )
        gap = max(gap, abs(energy - quadratic))

        if e_old is not None:
            de = energy - e_old
            dd = float(np.abs(d - d_old).max())
            if abs(de) < cfg.energy_tol and dd < cfg.density_tol:
                converged = True
            sign = 1 if de > 0 else (-1 if de < 0 else 0)
            if sign != 0 and sign == -de_prev_sign:
                flips += 1
                if flips >= OSCILLATION_FLIPS and damping == 0.0:
                    damping = OSCILLATION_DAMPING
            de_prev_sign = sign
        e_old = energy
        d_old = d
        if converged:
            break

    return SCFState(
        coefficients=c,
        density=d,
        energy=energy,
        iteration=iteration,
        converged=converged,
        energy_form_gap=gap,
    )


@dataclass(frozen=True)
class BasisTemplate:
    """Rule expanding a parameter vector into a basis.

    Either ``principal_offsets`` is set and the vector is (n*, zeta_1, ...,
    zeta_K) with shell k using principal number n* + offset_k, or ``fixed_n``
    is set and the vector holds one exponent per fixed principal number.
    """

    principal_offsets: tuple[int, ...] | None = None
    fixed_n: tuple[float, ...] | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if (self.principal_offsets is None) == (self.fixed_n is None):
            raise ValueError("set exactly one of principal_offsets and fixed_n")

    @property
    def dimension(self) -> int:
        if self.principal_offsets is not None:
            return 1 + len(self.principal_offsets)
        return len(self.fixed_n)

    def instantiate(self, x: np.ndarray) -> BasisSet:
        x = np.asarray(x, dtype=float)
        if x.size != self.dimension:
            raise ValueError(f"expected {self.dimension} parameters, got {x.size}")
        if self.principal_offsets is not None:
            lead = x[0]
            funcs = [
                StoFunction(lead + off, zeta)
                for off, zeta in zip(self.principal_offsets, x[1:])
            ]
        else:
            funcs = [StoFunction(n, zeta) for n, zeta in zip(self.fixed_n, x)]
        return BasisSet(tuple(funcs), label=self.label)


def hfr_objective(
    atom: AtomSpec,
    template: BasisTemplate,
    x: np.ndarray,
    cfg: SCFConfig = SCFConfig(),
    penalty: float = PENALTY_VALUE,
) -> float:
    """SCF ground-state energy as a function of the nonlinear parameters.

    Divergent integrals, degenerate bases, invalid parameters, and SCF
    non-convergence all return the penalty value instead of raising.
    """
    try:
        basis = template.instantiate(np.asarray(x, dtype=float))
        tables = build_integral_tables(basis, atom.Z)
        state = scf_energy(atom, tables, cfg)
    except ValueError:
        return penalty
    if not state.converged or not np.isfinite(state.energy):
        return penalty
    return state.energy
