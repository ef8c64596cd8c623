import math

import numpy as np
import pytest

from multigame_ne import (
    DGPDParams,
    InvalidGameError,
    SolverError,
    TabulatedCDFTypeSpace,
    UniformTypeSpace,
    lambda_mu,
    solve_dgpd_general_prior,
    solve_dgpd_uniform,
    threshold_function_dgpd,
)
from multigame_ne.continuous import (
    asymmetric_quadratic,
    def_coefficients,
    discriminant,
    quadratic_roots,
    sampled_regret,
    solve_game,
    symmetric_quadratic,
)
from multigame_ne.experiments import random_dgpd_params

from conftest import load

SADP = DGPDParams(9, 5, 4, 2, 0)
P33 = DGPDParams(20, 16, 15, 6, 3)
SKEWED = TabulatedCDFTypeSpace([0, 0.5, 1], [0, 0.8, 1])
UNIFORM_TABLE = TabulatedCDFTypeSpace([0, 1], [0, 1])


def test_sadp_closed_form():
    assert def_coefficients(SADP) == (2, 2, 4)
    sol = solve_dgpd_uniform(SADP)
    assert sol.theta1 == sol.theta2
    assert abs(sol.theta1 - (5 - math.sqrt(17)) / 2) < 1e-12
    assert sol.symmetric


def test_linear_case():
    params = DGPDParams(10, 7, 6, 4, 1)  # d == 0
    d, e, f = def_coefficients(params)
    assert d == 0
    sol = solve_dgpd_uniform(params)
    lam, mu = lambda_mu(params)
    assert sol.theta1 == pytest.approx(e / (e + f)) == pytest.approx(float(lam)) == pytest.approx(float(mu))


def test_invalid_params_rejected():
    with pytest.raises(InvalidGameError, match="p > s fails"):
        solve_dgpd_uniform(DGPDParams(9, 5, 4, 2, 3))


def test_uniform_fixed_point_identity():
    rng = np.random.default_rng(11)
    for _ in range(50):
        params = random_dgpd_params(rng, high=60)
        x = solve_dgpd_uniform(params).theta1
        assert abs(x - float(threshold_function_dgpd(1 - x, params.as_float()))) < 1e-12


def test_root_split_and_discriminant():
    rng = np.random.default_rng(12)
    for _ in range(200):
        params = random_dgpd_params(rng, high=80)
        assert discriminant(params) > 0
        x_plus, x_minus = quadratic_roots(params)
        lam, mu = (float(v) for v in lambda_mu(params))
        lo, hi = min(lam, mu), max(lam, mu)
        assert lo - 1e-12 <= x_plus <= hi + 1e-12
        if x_minus is not None:
            assert not lo <= x_minus <= hi


def test_asymmetric_quadratic_is_scaled_symmetric_one():
    sympy = pytest.importorskip("sympy")
    d, e, f = sympy.symbols("d e f")
    # (t, r, y, p, s) chosen so that the coefficients come out as the free symbols d, e, f
    generic = DGPDParams(d + 2 * e, e, f, e, 0)
    assert tuple(sympy.expand(v) for v in def_coefficients(generic)) == (d, e, f)
    sym = symmetric_quadratic(generic)
    asym = asymmetric_quadratic(generic)
    for a, b in zip(asym, sym):
        assert sympy.expand(a - (e + f) * b) == 0
    rng = np.random.default_rng(13)
    for _ in range(50):
        params = random_dgpd_params(rng)
        _, e_, f_ = def_coefficients(params)
        assert all(a == (e_ + f_) * b for a, b in zip(asymmetric_quadratic(params), symmetric_quadratic(params)))


def test_general_prior_matches_closed_form():
    for params in (SADP, P33):
        closed = solve_dgpd_uniform(params).theta1
        sol = solve_dgpd_general_prior(params, UNIFORM_TABLE, UNIFORM_TABLE, tol=1e-10)
        assert abs(sol.theta1 - closed) < 1e-9
        assert abs(sol.theta2 - closed) < 1e-9


def test_general_prior_uniform_sixtieths_bounds():
    sol = solve_dgpd_general_prior(P33, UNIFORM_TABLE, UNIFORM_TABLE)
    assert sol.residual <= 1e-10
    assert 0.2 <= sol.theta1 <= 0.25 and 0.2 <= sol.theta2 <= 0.25


def _residuals(params, sol, s1, s2):
    r1 = abs(sol.theta1 - float(threshold_function_dgpd(1 - s2.cdf(sol.theta2), params.as_float())))
    r2 = abs(sol.theta2 - float(threshold_function_dgpd(1 - s1.cdf(sol.theta1), params.as_float())))
    return r1, r2


def test_general_prior_skewed_cdf():
    sol = solve_dgpd_general_prior(SADP, SKEWED, SKEWED, tol=1e-10)
    assert max(_residuals(SADP, sol, SKEWED, SKEWED)) <= 1e-10
    lam, mu = lambda_mu(SADP)
    assert float(mu) <= sol.theta1 <= float(lam)


def test_general_prior_asymmetric_priors():
    sol = solve_dgpd_general_prior(SADP, SKEWED, UniformTypeSpace())
    assert max(_residuals(SADP, sol, SKEWED, UniformTypeSpace())) <= 1e-10
    assert not sol.symmetric


def test_general_prior_random_cdfs():
    rng = np.random.default_rng(14)
    for _ in range(30):
        params = random_dgpd_params(rng)
        spaces = []
        for _ in range(2):
            knots = [0.0] + sorted(rng.uniform(0, 1, size=3).tolist()) + [1.0]
            vals = [0.0] + sorted(rng.uniform(0, 1, size=3).tolist()) + [1.0]
            spaces.append(TabulatedCDFTypeSpace(knots, vals))
        sol = solve_dgpd_general_prior(params, *spaces)
        assert max(_residuals(params, sol, *spaces)) <= 1e-10


def test_solver_reports_failure():
    with pytest.raises(SolverError) as info:
        solve_dgpd_general_prior(SADP, SKEWED, SKEWED, max_iter=0)
    assert info.value.best is not None and info.value.residual > 0
    with pytest.raises(ValueError):
        solve_dgpd_general_prior(SADP, SKEWED, SKEWED, tol=0)


def test_sampled_regret_small():
    sol = solve_dgpd_uniform(SADP)
    assert sampled_regret(SADP, sol) <= 1e-6
    sol = solve_dgpd_general_prior(SADP, SKEWED, SKEWED)
    assert sampled_regret(SADP, sol, (SKEWED, SKEWED)) <= 1e-6


def test_sampled_regret_detects_bad_pair():
    sol = solve_dgpd_uniform(SADP)
    off = type(sol)(sol.theta1 + 0.05, sol.theta2, 0.0, False)
    assert sampled_regret(SADP, off) > 1e-3


def test_solve_game_dispatch():
    sol = solve_game(load("sadp.json"))
    assert sol.method == "closed-form"
    with pytest.raises(InvalidGameError):
        solve_game(load("chicken.json"))
    with pytest.raises(InvalidGameError):
        solve_game(load("dgpd_sixtieths.json"))
