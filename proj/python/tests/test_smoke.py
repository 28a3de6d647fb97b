import math

import numpy as np
import pytest

import sasvi


@pytest.fixture(scope="module")
def problem():
    X, y, beta = sasvi.generate_synthetic(30, 100, 10, seed=3)
    return sasvi.Problem(X, y)


def test_generator_is_deterministic():
    a = sasvi.generate_synthetic(10, 20, 3, seed=5)
    b = sasvi.generate_synthetic(10, 20, 3, seed=5)
    for u, v in zip(a, b):
        np.testing.assert_array_equal(u, v)
    assert np.count_nonzero(a[2]) == 3


def test_zero_response_is_rejected():
    X, y, _ = sasvi.generate_synthetic(10, 20, 0, sigma=0.0)
    with pytest.raises(ValueError, match="identically zero"):
        sasvi.Problem(X, y)


def test_solve_certifies(problem):
    sol = sasvi.solve(problem, 0.3 * problem.lambda_max())
    assert sol.certified
    assert sol.gap <= 1e-10
    assert sol.primal >= sol.dual - 1e-12 * max(1.0, sol.primal)
    assert np.max(np.abs(problem.X.T @ sol.theta)) <= 1.0 + 1e-12


def test_screening_is_safe(problem):
    lmax = problem.lambda_max()
    anc = sasvi.anchor(problem, sasvi.solve(problem, 0.6 * lmax))
    ref = sasvi.solve(problem, 0.5 * lmax)
    for rule in ("sasvi", "safe", "dpp"):
        discarded, bounds = sasvi.screen(rule, anc, 0.5 * lmax)
        assert bounds.shape == (problem.p,)
        assert np.all(np.abs(ref.beta[discarded]) <= 1e-9)
    sasvi_set = set(sasvi.screen("sasvi", anc, 0.5 * lmax)[0])
    assert set(sasvi.screen("dpp", anc, 0.5 * lmax)[0]) <= sasvi_set
    assert len(sasvi_set) > 0


def test_anchor_at_lambda_max(problem):
    anc = sasvi.anchor_at_lambda_max(problem)
    assert anc.lambda1 == pytest.approx(problem.lambda_max())
    assert np.allclose(anc.a, 0.0)
    up, um = sasvi.sasvi_bounds(anc, 0, 0.5 * anc.lambda1)
    assert math.isfinite(up) and math.isfinite(um)


def test_sure_removal_matches_screening(problem):
    anc = sasvi.anchor(problem, sasvi.solve(problem, 0.7 * problem.lambda_max()))
    ls = sasvi.sure_removal(anc)
    assert ls.shape == (problem.p,)
    finite = ~np.isnan(ls)
    assert finite.any()
    lam2 = 0.9 * anc.lambda1
    discarded = set(sasvi.screen("sasvi", anc, lam2)[0])
    for j in np.flatnonzero(finite & (ls * (1 + 1e-9) < lam2)):
        assert j in discarded


def test_path_matches_baseline(problem):
    res = sasvi.path(problem, rules="sasvi,strong", grid=20, baseline=True)
    assert res["ok"]
    assert len(res["rejection"]) == 40
    for lane in res["lanes"]:
        assert lane["max_baseline_diff"] <= 10 * res["gap_tol"]


def test_bad_rule_raises(problem):
    with pytest.raises(ValueError):
        sasvi.path(problem, rules="lars")
