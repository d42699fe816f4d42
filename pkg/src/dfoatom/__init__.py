"""Derivative-free optimizers bound to Powell-singular and atomic SCF objectives."""

from .core import (
    CACHE_RESOLUTION,
    PENALTY_VALUE,
    Domain,
    EvalRecord,
    ObjectiveHandle,
    OptResult,
    cache_key,
    clip_to_bounds,
    reflect_into_bounds,
)
from .linesearch import LineProblem, bracket_lambda_bounds, brent, golden_section
from .neldermead import Simplex, init_simplex, nm_minimize, nm_step
from .patternsearch import PSState, Pattern, make_pattern, poll, ps_minimize
from .powell import powell_cd_minimize
from .rbf import (
    SampleSet,
    Surrogate,
    TrustRegion,
    build_surrogate,
    denormalize,
    normalize,
    propose_candidate,
    rbf_minimize,
    select_active_subset,
    surrogate_eval,
)
from .scf import (
    AtomSpec,
    BasisTemplate,
    SCFConfig,
    SCFState,
    eigh_symmetric,
    hfr_objective,
    lowdin_orthogonalization,
    scf_energy,
)
from .sto import (
    BasisSet,
    DegenerateBasisError,
    DivergentIntegralError,
    IntegralTables,
    StoFunction,
    build_integral_tables,
    coulomb_repulsion,
    kinetic,
    lower_incomplete_gamma,
    normalization,
    nuclear_attraction,
    overlap,
)
from .testfunctions import powell_singular, psf_domain, psf_standard_start

__version__ = "0.1.0"

__all__ = [
    "AtomSpec",
    "BasisSet",
    "BasisTemplate",
    "CACHE_RESOLUTION",
    "DegenerateBasisError",
    "DivergentIntegralError",
    "Domain",
    "EvalRecord",
    "IntegralTables",
    "LineProblem",
    "ObjectiveHandle",
    "OptResult",
    "PENALTY_VALUE",
    "PSState",
    "Pattern",
    "SCFConfig",
    "SCFState",
    "SampleSet",
    "Simplex",
    "StoFunction",
    "Surrogate",
    "TrustRegion",
    "bracket_lambda_bounds",
    "brent",
    "build_integral_tables",
    "build_surrogate",
    "cache_key",
    "clip_to_bounds",
    "coulomb_repulsion",
    "denormalize",
    "eigh_symmetric",
    "golden_section",
    "hfr_objective",
    "init_simplex",
    "kinetic",
    "lowdin_orthogonalization",
    "lower_incomplete_gamma",
    "make_pattern",
    "nm_minimize",
    "nm_step",
    "normalization",
    "normalize",
    "nuclear_attraction",
    "overlap",
    "poll",
    "powell_cd_minimize",
    "powell_singular",
    "propose_candidate",
    "ps_minimize",
    "psf_domain",
    "psf_standard_start",
    "rbf_minimize",
    "reflect_into_bounds",
    "scf_energy",
    "select_active_subset",
    "surrogate_eval",
]
