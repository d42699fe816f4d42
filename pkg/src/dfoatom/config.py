"""Flat key-value run configuration: parsing, validation, and assembly.

The format is plain text, one ``section.key = value`` per line, ``#`` for
comments. Vectors are comma lists. A run needs a method, an objective, a
box (explicit bounds, the reference rule lower = ref/2 and upper = 3*ref/2,
or the benchmark default), and a start point (explicit or "lower").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import Domain, ObjectiveHandle
from .neldermead import nm_minimize
from .patternsearch import PATTERN_KINDS, ps_minimize
from .powell import powell_cd_minimize
from .rbf import KERNELS, rbf_minimize
from .scf import AtomSpec, BasisTemplate, SCFConfig, hfr_objective
from .testfunctions import powell_singular, psf_domain, psf_standard_start

METHOD_NAMES = ("powell-cd", "nelder-mead", "pattern-search", "rbf")
OBJECTIVE_NAMES = ("psf", "atom")


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration; names the offending key."""


class ObjectiveBuildError(ValueError):
    """The objective named by a valid config cannot be constructed."""


def parse_flat_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into an ordered flat mapping."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in out:
            raise ConfigError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _get_float(cfg: dict[str, str], key: str, default: float | None = None) -> float:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not a number: {cfg[key]!r}") from exc


def _get_int(cfg: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return int(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not an integer: {cfg[key]!r}") from exc


def _get_vector(cfg: dict[str, str], key: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in cfg[key].split(",")], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not a comma list of numbers: {cfg[key]!r}") from exc


def _get_choice(cfg: dict[str, str], key: str, choices, default: str | None = None) -> str:
    value = cfg.get(key, default)
    if value is None:
        raise ConfigError(f"missing required key {key!r}")
    if value not in choices:
        raise ConfigError(f"key {key!r}: {value!r} not one of {sorted(choices)}")
    return value


@dataclass
class RunSetup:
    """Everything needed to execute one optimization run."""

    label: str
    method: str
    domain: Domain
    x0: np.ndarray
    evaluator: Callable[[np.ndarray], float]
    dimension: int
    eps: float
    seed: int
    method_kwargs: dict = field(default_factory=dict)
    config_echo: dict[str, str] = field(default_factory=dict)

    def make_handle(self) -> ObjectiveHandle:
        return ObjectiveHandle(self.dimension, self.evaluator)

    def execute(self, handle: ObjectiveHandle):
        if self.method == "powell-cd":
            return powell_cd_minimize(
                handle, self.domain, self.x0, eps=self.eps, **self.method_kwargs
            )
        if self.method == "nelder-mead":
            return nm_minimize(
                handle, self.domain, self.x0, eps=self.eps,
                rng=np.random.default_rng(self.seed), **self.method_kwargs,
            )
        if self.method == "pattern-search":
            return ps_minimize(
                handle, self.domain, self.x0, eps=self.eps, **self.method_kwargs
            )
        if self.method == "rbf":
            return rbf_minimize(
                handle, self.domain, self.x0, eps=self.eps,
                seed=np.random.default_rng(self.seed), **self.method_kwargs,
            )
        raise ConfigError(f"unknown method {self.method!r}")


def _build_objective(cfg: dict[str, str]):
    """Returns (evaluator, dimension, default_domain, default_x0)."""
    kind = _get_choice(cfg, "objective.kind", OBJECTIVE_NAMES)
    if kind == "psf":
        dim = _get_int(cfg, "psf.dimension")
        try:
            dom = psf_domain(dim)
            x0 = psf_standard_start(dim)
        except ValueError as exc:
            raise ObjectiveBuildError(str(exc)) from exc
        return powell_singular, dim, dom, x0

    z = _get_int(cfg, "atom.Z")
    electrons = _get_int(cfg, "atom.electrons")
    basis_kind = _get_choice(cfg, "basis.kind", ("nstar", "integer"))
    try:
        if basis_kind == "nstar":
            offsets = tuple(int(v) for v in cfg.get("basis.offsets", "0").split(","))
            template = BasisTemplate(principal_offsets=offsets)
        else:
            if "basis.n" not in cfg:
                raise ConfigError("missing required key 'basis.n'")
            template = BasisTemplate(
                fixed_n=tuple(float(v) for v in cfg["basis.n"].split(","))
            )
        atom = AtomSpec(z, electrons)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ObjectiveBuildError(str(exc)) from exc
    scf_cfg = SCFConfig(
        max_iterations=_get_int(cfg, "scf.max_iterations", 200),
        energy_tol=_get_float(cfg, "scf.energy_tol", 1e-12),
        density_tol=_get_float(cfg, "scf.density_tol", 1e-10),
        damping=_get_float(cfg, "scf.damping", 0.0),
    )

    def evaluator(x: np.ndarray) -> float:
        return hfr_objective(atom, template, x, scf_cfg)

    return evaluator, template.dimension, None, None


def _build_domain(cfg: dict[str, str], dim: int, default: Domain | None) -> Domain:
    if "bounds.reference" in cfg:
        ref = _get_vector(cfg, "bounds.reference")
        if ref.size != dim:
            raise ConfigError(f"key 'bounds.reference': expected {dim} entries")
        return Domain(ref / 2.0, 1.5 * ref)
    if "bounds.lower" in cfg or "bounds.upper" in cfg:
        lo = _get_vector(cfg, "bounds.lower")
        hi = _get_vector(cfg, "bounds.upper")
        if lo.size != dim or hi.size != dim:
            raise ConfigError("keys 'bounds.lower'/'bounds.upper': dimension mismatch")
        try:
            return Domain(lo, hi)
        except ValueError as exc:
            raise ConfigError(f"key 'bounds.lower': {exc}") from exc
    if default is None:
        raise ConfigError("missing required key 'bounds.lower' or 'bounds.reference'")
    return default


def _method_kwargs(cfg: dict[str, str], method: str, dim: int) -> dict:
    if method == "powell-cd":
        return {
            "max_cycles": _get_int(cfg, "run.max_cycles", 200),
            "line_search": _get_choice(cfg, "powell.line_search", ("brent", "golden"), "brent"),
        }
    if method == "nelder-mead":
        return {
            "max_iters": _get_int(cfg, "run.max_iters", 10000),
            "step_fraction": _get_float(cfg, "nm.step_fraction", 0.1),
        }
    if method == "pattern-search":
        kwargs = {
            "eps_min": _get_float(cfg, "ps.eps_min", 1e-10),
            "max_iters": _get_int(cfg, "run.max_iters", 2000),
            "pattern": _get_choice(cfg, "ps.pattern", PATTERN_KINDS, "compass"),
        }
        if "ps.step0" in cfg:
            kwargs["step0"] = _get_float(cfg, "ps.step0")
        return kwargs
    return {
        "budget": _get_int(cfg, "run.budget", 600),
        "kernel": _get_choice(cfg, "rbf.kernel", tuple(KERNELS), "gaussian"),
        "shape": _get_float(cfg, "rbf.shape", 1.5),
    }


def build_run(cfg: dict[str, str], label: str, seed_override: int | None = None) -> RunSetup:
    """Validate a parsed config and assemble the executable run."""
    method = _get_choice(cfg, "method.name", METHOD_NAMES)
    evaluator, dim, default_dom, default_x0 = _build_objective(cfg)
    domain = _build_domain(cfg, dim, default_dom)

    start = cfg.get("start", "lower" if default_x0 is None else "default")
    if start == "lower":
        x0 = domain.lower.copy()
    elif start == "default" and default_x0 is not None:
        x0 = default_x0
    else:
        x0 = _get_vector(cfg, "start")
        if x0.size != dim:
            raise ConfigError(f"key 'start': expected {dim} entries")
        if not domain.contains(x0):
            raise ConfigError("key 'start': point lies outside the bounds")

    seed = seed_override if seed_override is not None else _get_int(cfg, "run.seed", 0)
    return RunSetup(
        label=cfg.get("run.label", label),
        method=method,
        domain=domain,
        x0=x0,
        evaluator=evaluator,
        dimension=dim,
        eps=_get_float(cfg, "run.eps", 1e-12),
        seed=seed,
        method_kwargs=_method_kwargs(cfg, method, dim),
        config_echo=dict(cfg),
    )
