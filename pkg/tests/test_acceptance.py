"""Acceptance suite: one test per criterion, printing a PASS/FAIL line each.

Criteria 6 and 7 are long-running table reproductions and are marked slow;
run them with ``pytest -m slow``. Wall-clock limits are asserted as stated.
CPU-time table columns and exact evaluation counts for the pattern-search and
surrogate methods are out of scope by design (under-specified internals);
value bands substitute for them.
"""

import time

import numpy as np
import pytest

from dfoatom import (
    AtomSpec,
    BasisTemplate,
    Domain,
    ObjectiveHandle,
    SampleSet,
    StoFunction,
    build_surrogate,
    coulomb_repulsion,
    hfr_objective,
    init_simplex,
    kinetic,
    nm_minimize,
    nm_step,
    nuclear_attraction,
    overlap,
    powell_cd_minimize,
    powell_singular,
    ps_minimize,
    psf_domain,
    psf_standard_start,
    rbf_minimize,
    surrogate_eval,
)
from dfoatom.cli import main
from dfoatom.rbf import regularization_for_condition
from dfoatom.suites import BE8_BOUNDS, BE8_REFERENCE, BE_SERIES, HE_SERIES
from oracles import eri_quad, kinetic_quad, nuclear_quad, overlap_quad


def _report(criterion: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {criterion:>2}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def _psf_handle(dim: int) -> ObjectiveHandle:
    return ObjectiveHandle(dim, powell_singular)


def test_criterion_1_psf4_bands():
    start = time.perf_counter()
    dom = psf_domain(4)
    x0 = psf_standard_start(4)

    r_pow = powell_cd_minimize(_psf_handle(4), dom, x0, eps=1e-12)
    r_nm = nm_minimize(_psf_handle(4), dom, x0, eps=1e-12, rng=0)
    r_ps = ps_minimize(
        _psf_handle(4), dom, x0, step0=1.0, eps=1e-12, eps_min=1e-10, max_iters=550
    )
    rbf_vals = [
        rbf_minimize(_psf_handle(4), dom, x0, budget=600, eps=1e-15, seed=s).best_f
        for s in range(5)
    ]
    elapsed = time.perf_counter() - start

    ok = (
        r_pow.best_f <= 1e-5
        and r_pow.n_evals <= 5000
        and r_nm.best_f <= 1e-5
        and r_nm.n_evals <= 5000
        and r_ps.best_f <= 5e-3
        and float(np.median(rbf_vals)) <= 1e-3
        and elapsed < 10.0
    )
    _report(
        1,
        ok,
        f"PSF-4D powell {r_pow.best_f:.2e}@{r_pow.n_evals}, "
        f"nm {r_nm.best_f:.2e}@{r_nm.n_evals}, ps {r_ps.best_f:.2e}@{r_ps.n_evals}, "
        f"rbf median {np.median(rbf_vals):.2e}, {elapsed:.1f}s",
    )


def test_criterion_2_psf8_bands():
    start = time.perf_counter()
    dom = psf_domain(8)
    x0 = psf_standard_start(8)
    r_nm = nm_minimize(_psf_handle(8), dom, x0, eps=1e-12, rng=7)
    r_pow = powell_cd_minimize(_psf_handle(8), dom, x0, eps=1e-15, max_cycles=400)
    elapsed = time.perf_counter() - start
    ok = (
        r_nm.best_f <= 1e-7
        and r_nm.n_evals <= 5200
        and r_pow.best_f <= 1e-8
        and r_pow.n_evals <= 20000
        and elapsed < 30.0
    )
    _report(
        2,
        ok,
        f"PSF-8D nm {r_nm.best_f:.2e}@{r_nm.n_evals}, "
        f"powell {r_pow.best_f:.2e}@{r_pow.n_evals}, {elapsed:.1f}s",
    )


def test_criterion_3_he_like_series():
    start = time.perf_counter()
    worst_de, worst_n = 0.0, 0
    for name, (z, n_star, zeta, e_ref) in HE_SERIES.items():
        atom = AtomSpec(z, 2)
        tmpl = BasisTemplate(principal_offsets=(0,))
        ref = np.array([n_star, zeta])
        dom = Domain(ref / 2.0, 1.5 * ref)
        h = ObjectiveHandle(2, lambda x: hfr_objective(atom, tmpl, x))
        r = nm_minimize(h, dom, dom.lower, eps=1e-10, rng=0)
        worst_de = max(worst_de, abs(r.best_f - e_ref))
        worst_n = max(worst_n, r.n_evals)
    elapsed = time.perf_counter() - start
    ok = worst_de <= 1e-8 and worst_n <= 600 and elapsed < 60.0
    _report(
        3,
        ok,
        f"He-like NM worst |dE| {worst_de:.2e}, worst N_f {worst_n}, {elapsed:.1f}s",
    )


def test_criterion_4_integer_sto_analytic():
    start = time.perf_counter()
    atom = AtomSpec(2, 2)
    tmpl = BasisTemplate(fixed_n=(1.0,))
    z_star = 27.0 / 16.0
    e_star = -2.84765625
    dom = Domain([z_star / 2.0], [1.5 * z_star])
    x0 = dom.lower.copy()

    def handle():
        return ObjectiveHandle(1, lambda x: hfr_objective(atom, tmpl, x))

    results = {
        "powell-cd": powell_cd_minimize(handle(), dom, x0, eps=1e-13),
        "nelder-mead": nm_minimize(handle(), dom, x0, eps=1e-13, rng=0),
        "pattern-search": ps_minimize(
            handle(), dom, x0, step0=0.2, eps=1e-15, eps_min=1e-13, max_iters=1000
        ),
        "rbf": rbf_minimize(handle(), dom, x0, budget=600, eps=1e-15, seed=0),
    }
    elapsed = time.perf_counter() - start
    details = []
    ok = elapsed < 5.0
    for name, r in results.items():
        dz = abs(r.best_x[0] - z_star)
        de = abs(r.best_f - e_star)
        ok = ok and dz <= 1e-6 and de <= 1e-10
        details.append(f"{name} dz={dz:.1e} dE={de:.1e}")
    _report(4, ok, "; ".join(details) + f", {elapsed:.1f}s")


def test_criterion_5_be_like_minimal():
    start = time.perf_counter()
    worst = 0.0
    for name, (z, n_star, z1, z2, e_ref) in BE_SERIES.items():
        atom = AtomSpec(z, 4)
        tmpl = BasisTemplate(principal_offsets=(0, 1))
        ref = np.array([n_star, z1, z2])
        dom = Domain(ref / 2.0, 1.5 * ref)
        h = ObjectiveHandle(3, lambda x: hfr_objective(atom, tmpl, x))
        r = nm_minimize(h, dom, dom.lower, eps=1e-10, rng=0)
        worst = max(worst, abs(r.best_f - e_ref))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 120.0
    _report(5, ok, f"Be-like NM worst |dE| {worst:.2e} (shell rule n*, n*+1), {elapsed:.1f}s")


@pytest.mark.slow
def test_criterion_6_extended_basis_table():
    start = time.perf_counter()
    zetas = np.array([3.4778022946, 6.3867400706, 1.3606507114, 2.8047191207, 0.8645023072])
    atom = AtomSpec(4, 4)
    tmpl = BasisTemplate(fixed_n=(1.0, 1.0, 2.0, 2.0, 2.0))
    dom = Domain(zetas / 2.0, 1.5 * zetas)
    h = ObjectiveHandle(5, lambda x: hfr_objective(atom, tmpl, x))
    r = nm_minimize(h, dom, dom.lower, eps=1e-10, max_iters=8000, rng=0)
    elapsed = time.perf_counter() - start
    ok = r.best_f <= -14.5730175 and abs(r.best_f - (-14.5730203)) <= 5e-6 and elapsed < 900.0
    _report(6, ok, f"extended-basis Be NM E={r.best_f:.9f} @{r.n_evals}, {elapsed:.1f}s")


@pytest.mark.slow
def test_criterion_7_eight_parameter_be():
    start = time.perf_counter()
    lo = np.array([b[0] for b in BE8_BOUNDS])
    hi = np.array([b[1] for b in BE8_BOUNDS])
    atom = AtomSpec(4, 4)
    tmpl = BasisTemplate(fixed_n=(1.0,) * 7 + (2.0,))
    dom = Domain(lo, hi)
    h = ObjectiveHandle(8, lambda x: hfr_objective(atom, tmpl, x))
    r = nm_minimize(h, dom, lo, eps=1e-12, max_iters=8000, rng=0)
    elapsed = time.perf_counter() - start
    de = abs(r.best_f - BE8_REFERENCE)
    ok = de <= 1e-6 and elapsed < 1800.0
    _report(7, ok, f"Be 8-parameter NM E={r.best_f:.9f}, |dE|={de:.2e} @{r.n_evals}, {elapsed:.1f}s")


def test_criterion_8_integral_oracle_sweep():
    start = time.perf_counter()
    rng = np.random.default_rng(123)

    def draw():
        return StoFunction(rng.uniform(0.6, 3.0), rng.uniform(0.3, 12.0))

    worst = {"overlap": 0.0, "kinetic": 0.0, "nuclear": 0.0, "eri": 0.0}
    for _ in range(500):
        p, q = draw(), draw()
        z = int(rng.integers(1, 11))
        worst["overlap"] = max(
            worst["overlap"],
            abs(overlap(p, q) - overlap_quad(p, q)) / max(1e-30, abs(overlap_quad(p, q))),
        )
        tq = kinetic_quad(p, q)
        worst["kinetic"] = max(worst["kinetic"], abs(kinetic(p, q) - tq) / max(1e-30, abs(tq)))
        vq = nuclear_quad(p, q, z)
        worst["nuclear"] = max(
            worst["nuclear"], abs(nuclear_attraction(p, q, z) - vq) / max(1e-30, abs(vq))
        )
        r, s = draw(), draw()
        eq = eri_quad(p, q, r, s)
        worst["eri"] = max(
            worst["eri"], abs(coulomb_repulsion(p, q, r, s) - eq) / max(1e-30, abs(eq))
        )
    elapsed = time.perf_counter() - start
    ok = all(v <= 1e-10 for v in worst.values()) and elapsed < 120.0
    _report(
        8,
        ok,
        "500 draws, worst rel err "
        + ", ".join(f"{k}={v:.1e}" for k, v in worst.items())
        + f", {elapsed:.1f}s",
    )


def test_criterion_9_optimizer_property_suite():
    start = time.perf_counter()
    problems = []

    dom4 = psf_domain(4)
    x0 = psf_standard_start(4)
    problems.append(("powell", powell_cd_minimize(_psf_handle(4), dom4, x0, eps=1e-10), dom4))
    problems.append(("nm", nm_minimize(_psf_handle(4), dom4, x0, eps=1e-10, rng=0), dom4))
    r_ps = ps_minimize(_psf_handle(4), dom4, x0, step0=1.0, eps=1e-10, max_iters=150)
    problems.append(("ps", r_ps, dom4))
    problems.append(
        ("rbf", rbf_minimize(_psf_handle(4), dom4, x0, budget=120, eps=1e-12, seed=0), dom4)
    )

    # monotone running best and feasibility of every evaluated point
    for name, r, dom in problems:
        bests = [rec.best_f for rec in r.trace]
        assert all(b2 <= b1 for b1, b2 in zip(bests, bests[1:])), name
        assert all(dom.contains(rec.x, tol=1e-9) for rec in r.trace), name
        assert r.best_f == min(rec.f for rec in r.trace), name

    # Powell solves random 4-D SPD quadratics within 4 cycles
    rng = np.random.default_rng(5)
    dom_q = Domain([-10.0] * 4, [10.0] * 4)
    for _ in range(3):
        a = rng.normal(size=(4, 4))
        spd = a @ a.T + 4.0 * np.eye(4)
        target = rng.uniform(-1.0, 1.0, size=4)
        h = ObjectiveHandle(4, lambda x, s=spd, t=target: float((x - t) @ s @ (x - t)))
        r = powell_cd_minimize(h, dom_q, np.zeros(4), eps=1e-14)
        assert r.extras["cycle_values"][3] < 1e-8

    # NM ranking invariant after every step
    h = _psf_handle(4)
    s = init_simplex(x0, dom4, 0.1, handle=h)
    s.rank()
    for _ in range(30):
        s = nm_step(s, h, dom4)
        assert np.all(np.diff(s.values) >= 0.0)

    # PS step multipliers stay on the schedule (capped at the box scale,
    # reset to 20% of the initial step by the single restart)
    steps = r_ps.extras["step_history"]
    cap = float(dom4.width.max())
    assert all(
        round(b / a, 10) in {5.0, 3.0, 0.6, 0.3, 0.1} or b == cap or b == 0.2
        for a, b in zip(steps, steps[1:])
    )

    # RBF interpolation exactness with eta forced to zero
    rng2 = np.random.default_rng(8)
    pts = list(rng2.uniform(0.05, 0.95, size=(10, 2)))
    vals = [float(np.cos(2 * p[0]) + p[1]) for p in pts]
    model = build_surrogate(SampleSet(pts, vals), regularization=0.0)
    for p, v in zip(pts, vals):
        assert abs(surrogate_eval(model, p, clipped=False) - v) / (1 + abs(v)) < 1e-8

    # eta ladder on synthetic condition numbers
    assert regularization_for_condition(1e7) == 0.1
    assert regularization_for_condition(2e4) == 0.05
    assert regularization_for_condition(5e3) == 0.01
    assert regularization_for_condition(5e2) == 0.005

    elapsed = time.perf_counter() - start
    ok = elapsed < 60.0
    _report(9, ok, f"optimizer property suite, {elapsed:.1f}s")


def test_criterion_10_determinism(tmp_path):
    start = time.perf_counter()
    configs = {
        "nm": (
            "method.name = nelder-mead\nobjective.kind = psf\npsf.dimension = 4\n"
            "run.eps = 1e-12\nrun.seed = 3\n"
        ),
        "rbf": (
            "method.name = rbf\nobjective.kind = psf\npsf.dimension = 4\n"
            "run.budget = 100\nrun.seed = 3\n"
        ),
        "atom-nm": (
            "method.name = nelder-mead\nobjective.kind = atom\natom.Z = 2\n"
            "atom.electrons = 2\nbasis.kind = nstar\nbasis.offsets = 0\n"
            "bounds.reference = 0.955057350,1.6117248872\nstart = lower\n"
            "run.eps = 1e-10\nrun.seed = 3\n"
        ),
    }
    ok = True
    for name, text in configs.items():
        cfg = tmp_path / f"{name}.cfg"
        cfg.write_text(text)
        outs = []
        for sub in ("a", "b"):
            out = tmp_path / name / sub
            assert main(["run", str(cfg), "--out", str(out), "--no-plot"]) == 0
            outs.append((out / f"{name}_trace.csv").read_bytes())
        ok = ok and outs[0] == outs[1]
    elapsed = time.perf_counter() - start
    _report(10, ok, f"bit-identical traces for repeated seeded runs, {elapsed:.1f}s")
