import numpy as np
import pytest
from scipy.optimize import linprog

from dfoatom import (
    Domain,
    ObjectiveHandle,
    make_pattern,
    poll,
    powell_singular,
    ps_minimize,
)
from dfoatom.patternsearch import PSState
from dfoatom.testfunctions import psf_domain, psf_standard_start

STEP_MULTIPLIERS = {5.0, 3.0, 0.6, 0.3, 0.1}


def test_pattern_coordinate_2d():
    p = make_pattern("coordinate", 2)
    assert np.allclose(p.directions, [[1, 0], [0, 1]])


def test_pattern_compass_2d():
    p = make_pattern("compass", 2)
    assert len(p.directions) == 4
    as_set = {tuple(d) for d in p.directions}
    assert as_set == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_pattern_star_2d():
    p = make_pattern("star", 2)
    assert len(p.directions) == 6
    for d in p.directions:
        assert np.linalg.norm(d) == pytest.approx(1.0)
    # diagonals are (e2 + e1)/sqrt2 and (e2 - e1)/sqrt2
    diag = round(1.0 / np.sqrt(2.0), 12)
    as_set = {tuple(np.round(d, 12)) for d in p.directions}
    assert (diag, diag) in as_set
    assert (-diag, diag) in as_set


def test_pattern_counts_higher_dim():
    assert len(make_pattern("coordinate", 5).directions) == 5
    assert len(make_pattern("compass", 5).directions) == 10
    # 2D + 2*C(D,2)
    assert len(make_pattern("star", 5).directions) == 10 + 2 * 10
    with pytest.raises(ValueError):
        make_pattern("hooke", 2)


def _positively_spans(directions: np.ndarray, vectors: np.ndarray) -> bool:
    # v is a nonnegative combination of the directions iff the LP is feasible.
    for v in vectors:
        res = linprog(
            c=np.zeros(len(directions)),
            A_eq=directions.T,
            b_eq=v,
            bounds=[(0.0, None)] * len(directions),
            method="highs",
        )
        if not res.success:
            return False
    return True


@pytest.mark.parametrize("kind", ["compass", "star"])
@pytest.mark.parametrize("dim", [2, 3])
def test_compass_and_star_positively_span(kind, dim):
    rng = np.random.default_rng(4)
    dirs = make_pattern(kind, dim).directions
    vectors = rng.normal(size=(20, dim))
    assert _positively_spans(dirs, vectors)


def test_poll_accepts_improvement():
    dom = Domain([-2.0, -2.0], [2.0, 2.0])
    h = ObjectiveHandle(2, lambda x: float(x @ x), cache=True)
    state = PSState(np.array([1.0, 0.0]), 1.0, step=1.0)
    improved, (y, fy) = poll(state, make_pattern("compass", 2), h, dom)
    assert improved
    assert np.allclose(y, [0.0, 0.0])
    assert fy == 0.0


def test_poll_cache_makes_repolls_free():
    dom = Domain([-2.0, -2.0], [2.0, 2.0])
    h = ObjectiveHandle(2, lambda x: float(x @ x), cache=True)
    state = PSState(np.array([1.0, 0.0]), 1.0, step=1.0)
    pat = make_pattern("compass", 2)
    poll(state, pat, h, dom)
    count = h.eval_count
    state2 = PSState(np.array([1.0, 0.0]), 1.0, step=1.0)
    poll(state2, pat, h, dom)
    assert h.eval_count == count  # every trial was already cached


def test_poll_no_improvement_leaves_point():
    dom = Domain([-2.0, -2.0], [2.0, 2.0])
    h = ObjectiveHandle(2, lambda x: float(x @ x), cache=True)
    state = PSState(np.zeros(2), 0.0, step=0.5)
    improved, (y, fy) = poll(state, make_pattern("compass", 2), h, dom)
    assert not improved
    assert np.allclose(y, 0.0)


def test_step_contraction_after_single_failure():
    dom = Domain([-2.0, -2.0], [2.0, 2.0])
    h = ObjectiveHandle(2, lambda x: float(x @ x))
    r = ps_minimize(h, dom, np.zeros(2), step0=1.0, eps=1e-12, max_iters=3)
    steps = r.extras["step_history"]
    assert steps[1] == pytest.approx(0.6 * steps[0])


def test_step_multiplier_ledger():
    dom = psf_domain(4)
    h = ObjectiveHandle(4, powell_singular)
    r = ps_minimize(h, dom, psf_standard_start(4), step0=1.0, eps=1e-12, max_iters=200)
    steps = r.extras["step_history"]
    cap = float(dom.width.max())
    restart_step = 0.2 * 1.0
    for a, b in zip(steps, steps[1:]):
        # schedule multipliers, the box-scale cap, or the single restart reset
        assert round(b / a, 10) in STEP_MULTIPLIERS or b == cap or b == restart_step


def test_failed_iterations_keep_incumbent():
    dom = Domain([-2.0, -2.0], [2.0, 2.0])
    h = ObjectiveHandle(2, lambda x: float(x @ x))
    r = ps_minimize(h, dom, np.zeros(2), step0=0.5, eps=1e-12, max_iters=50)
    assert np.allclose(r.best_x, 0.0)
    bests = [rec.best_f for rec in r.trace]
    assert all(b2 <= b1 for b1, b2 in zip(bests, bests[1:]))


def test_convex_and_cache_bound():
    dom = Domain([-2.0, -2.0], [2.0, 2.0])
    h = ObjectiveHandle(2, lambda x: float(x @ x), cache=True)
    r = ps_minimize(h, dom, np.array([1.0, 1.0]), step0=0.5, eps=1e-12, max_iters=500)
    assert r.best_f < 1e-6
    assert all(dom.contains(rec.x, tol=1e-12) for rec in r.trace)


def test_psf4_loose_band():
    h = ObjectiveHandle(4, powell_singular)
    r = ps_minimize(
        h, psf_domain(4), psf_standard_start(4), step0=1.0, eps=1e-12, max_iters=550
    )
    assert r.best_f <= 5e-3
    assert r.n_evals <= 5000


def test_step_cap_keeps_narrow_box_searches_alive():
    # Without the box-scale cap the expanded step only produces cached corner
    # trials and the run dies of consecutive cache-hit failures.
    from dfoatom import AtomSpec, BasisTemplate, hfr_objective

    ref = np.array([0.9803063847, 3.6087056957, 0.9473972495])
    atom = AtomSpec(4, 4)
    tmpl = BasisTemplate(principal_offsets=(0, 1))
    dom = Domain(ref / 2.0, 1.5 * ref)
    h = ObjectiveHandle(3, lambda x: hfr_objective(atom, tmpl, x))
    r = ps_minimize(h, dom, dom.lower, step0=1.0, eps=1e-15, eps_min=1e-10,
                    max_iters=800)
    assert r.best_f == pytest.approx(-14.562399517417, abs=1e-9)
    assert max(r.extras["step_history"]) <= dom.width.max()


def test_single_restart_resets_step():
    # A flat objective stalls immediately; the one restart fires, then the
    # run terminates without a second one.
    dom = Domain([-1.0, -1.0], [1.0, 1.0])
    h = ObjectiveHandle(2, lambda x: 1.0)
    r = ps_minimize(h, dom, np.zeros(2), step0=1.0, eps=1e-20, eps_min=1e-30,
                    max_iters=500)
    assert r.termination in ("stagnation", "restart-exhausted", "tolerance-met")
