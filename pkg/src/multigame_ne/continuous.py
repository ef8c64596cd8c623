"""Pure equilibria of the DGPD under continuous, atom-free priors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    Action,
    DGPDParams,
    InvalidGameError,
    Multigame,
    UniformTypeSpace,
    dgpd_game,
    expected_utility,
    validate_dgpd,
)
from .strategies import ThresholdStrategy, lambda_mu, threshold_function_dgpd

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


class SolverError(RuntimeError):
    """Root search failed; ``best`` carries the best point seen."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


@dataclass(frozen=True)
class ContinuousSolution:
    theta1: float
    theta2: float
    residual: float
    symmetric: bool
    iterations: int = 0
    method: str = field(default="closed-form")

    @property
    def thresholds(self) -> tuple:
        return (self.theta1, self.theta2)

    def strategies(self) -> tuple:
        return ThresholdStrategy(self.theta1), ThresholdStrategy(self.theta2)


def _checked(params: DGPDParams) -> DGPDParams:
    report = validate_dgpd(params)
    if not report:
        raise InvalidGameError("invalid DGPD parameters: " + ", ".join(report.violations))
    return params


def def_coefficients(params: DGPDParams) -> tuple:
    """(d, e, f) = (t - r + s - p, p - s, y - s)."""
    t, r, y, p, s = params.as_tuple()
    return t - r + s - p, p - s, y - s


def symmetric_quadratic(params: DGPDParams) -> tuple:
    """Coefficients (a, b, c) of a x^2 + b x + c = 0 for the symmetric fixed point."""
    d, e, f = def_coefficients(params)
    return -d, 2 * d + e + f, -(d + e)


def asymmetric_quadratic(params: DGPDParams) -> tuple:
    d, e, f = def_coefficients(params)
    return -d * (e + f), (d + e + f) ** 2 - d**2, -(e * (d + e + f) + d * f)


def discriminant(params: DGPDParams):
    d, e, f = def_coefficients(params)
    return (e + f) ** 2 + 4 * d * f


def quadratic_roots(params: DGPDParams) -> tuple:
    """(x_plus, x_minus) of the symmetric quadratic; x_minus is None when d == 0.

    x_plus uses the cancellation-free form 2(d+e) / ((2d+e+f) + sqrt(disc)),
    algebraically equal to ((2d+e+f) - sqrt(disc)) / (2d).
    """
    d, e, f = (float(v) for v in def_coefficients(params))
    disc = (e + f) ** 2 + 4 * d * f
    if not disc > 0:
        raise SolverError(f"discriminant {disc} is not positive")
    root = math.sqrt(disc)
    b = 2 * d + e + f
    x_plus = 2 * (d + e) / (b + root)
    x_minus = (b + root) / (2 * d) if d != 0 else None
    return x_plus, x_minus


def uniform_fixed_point_map(params: DGPDParams, theta_other: float) -> float:
    """Best-response threshold to an opponent threshold under the uniform prior."""
    return float(threshold_function_dgpd(1 - theta_other, params.as_float()))


def solve_dgpd_uniform(params: DGPDParams) -> ContinuousSolution:
    _checked(params)
    d, e, f = (float(v) for v in def_coefficients(params))
    if d == 0:
        x = e / (e + f)
    else:
        x, _ = quadratic_roots(params)
    residual = abs(x - uniform_fixed_point_map(params, x))
    return ContinuousSolution(x, x, residual, True)


def _rhs(params: DGPDParams, opp_space, theta_other: float) -> float:
    # opponent plays DC at theta_other, so it cooperates with prob 1 - F(theta_other)
    zc = 1.0 - opp_space.cdf(theta_other)
    return float(threshold_function_dgpd(zc, params))


def solve_dgpd_general_prior(
    params: DGPDParams,
    space1,
    space2,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    damping: float = 0.5,
) -> ContinuousSolution:
    """Solve the two-equation threshold system for arbitrary atom-free priors.

    ``space1`` and ``space2`` are the type distributions of agent 1 and agent 2
    (anything with a ``cdf`` method).  Agent 1's threshold solves
    ``theta1 = T(1 - F2(theta2))`` and symmetrically for agent 2, where ``T``
    is the DGPD threshold function.

    The composed map ``theta1 -> T(1 - F2(T(1 - F1(theta1))))`` is
    nondecreasing and maps ``[min(lam, mu), max(lam, mu)]`` into itself.
    Damped iteration is tried first; if it stops contracting, bisection on
    the composed defect takes over.
    """
    _checked(params)
    if not tol > 0:
        raise ValueError("tol must be positive")
    fparams = params.as_float()
    lam, mu = (float(v) for v in lambda_mu(fparams))
    lo, hi = min(lam, mu), max(lam, mu)

    def rhs2(theta1):
        return _rhs(fparams, space1, theta1)

    def rhs1(theta2):
        return _rhs(fparams, space2, theta2)

    def defect(theta1):
        return rhs1(rhs2(theta1)) - theta1

    x = (lam + mu) / 2
    best_x, best_res = x, abs(defect(x))
    iterations = 0
    method = "fixed-point"
    prev_step = math.inf
    while iterations < max_iter and best_res > tol:
        iterations += 1
        g = defect(x)
        step = damping * g
        if abs(step) >= prev_step:
            break
        prev_step = abs(step)
        x = min(hi, max(lo, x + step))
        res = abs(defect(x))
        if res < best_res:
            best_x, best_res = x, res
    if best_res > tol:
        method = "bisection"
        a, b = lo, hi
        ga = defect(a)
        if abs(ga) <= tol:
            best_x, best_res = a, abs(ga)
        while iterations < max_iter and best_res > tol and b - a > 0:
            iterations += 1
            mid = 0.5 * (a + b)
            if mid in (a, b):
                break
            gm = defect(mid)
            if abs(gm) < best_res:
                best_x, best_res = mid, abs(gm)
            if (gm > 0) == (ga > 0):
                a, ga = mid, gm
            else:
                b = mid
    if best_res > tol:
        raise SolverError(
            f"no fixed point within tol={tol} on [{lo}, {hi}]; best residual {best_res:.3e}",
            best=best_x,
            residual=best_res,
        )
    theta1 = best_x
    theta2 = rhs2(theta1)
    residual = max(abs(theta1 - rhs1(theta2)), abs(theta2 - rhs2(theta1)))
    return ContinuousSolution(theta1, theta2, residual, math.isclose(theta1, theta2, abs_tol=tol), iterations, method)


def sampled_regret(
    params: DGPDParams,
    solution: ContinuousSolution,
    spaces=(UniformTypeSpace(), UniformTypeSpace()),
    n_samples: int = 1000,
    seed: int = 0,
) -> float:
    """Largest gain any sampled type could get by deviating from the solution.

    Types are drawn by inverse-transform sampling from each agent's prior;
    opponent cooperation rates come from the exact CDFs.
    """
    game = dgpd_game(params.as_float(), spaces)
    rng = np.random.default_rng(seed)
    strategies = solution.strategies()
    worst = 0.0
    for agent in (0, 1):
        opp = strategies[1 - agent]
        own = strategies[agent]
        types = spaces[agent].inverse_cdf(rng.random(n_samples))
        for theta in types:
            theta = float(theta)
            uc = expected_utility(game, agent, Action.C, theta, opp)
            ud = expected_utility(game, agent, Action.D, theta, opp)
            pc = own.prob_c(theta)
            worst = max(worst, max(uc, ud) - (pc * uc + (1 - pc) * ud))
    return worst


def solve_game(game: Multigame, tol: float = DEFAULT_TOL) -> ContinuousSolution:
    """Dispatch on the priors of a continuous DGPD game."""
    if game.dgpd is None:
        raise InvalidGameError("continuous solver needs DGPD payoffs")
    if not game.continuous:
        raise InvalidGameError("continuous solver needs continuous type spaces")
    s1, s2 = game.type_spaces
    if isinstance(s1, UniformTypeSpace) and isinstance(s2, UniformTypeSpace):
        return solve_dgpd_uniform(game.dgpd)
    return solve_dgpd_general_prior(game.dgpd, s1, s2, tol=tol)
