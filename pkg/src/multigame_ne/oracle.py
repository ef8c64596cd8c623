"""Brute-force equilibrium enumeration and regret verification.

Nothing here uses the threshold functions or the interval bookkeeping of the
solvers: expected utilities are evaluated from the payoff tables and
cooperation probabilities are summed type by type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .model import (
    Action,
    DiscreteTypeSpace,
    Multigame,
    Orientation,
    local_expected_payoffs,
    type_vector,
    zeta,
)
from .strategies import ThresholdStrategy, to_float_strategy

DEFAULT_CAP = 10**6
FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class RegretReport:
    per_agent: tuple
    worst_type: tuple
    worst_action: tuple
    exact: bool = True

    @property
    def regret(self):
        return max(self.per_agent)

    @property
    def is_equilibrium(self) -> bool:
        return self.regret <= 0 if self.exact else self.regret <= FLOAT_TOL


def _float_game(game: Multigame) -> Multigame:
    payoffs = tuple(tuple(t.as_float() for t in row) for row in game.payoffs)
    return _FloatGame(payoffs, game.type_spaces)


class _FloatGame:
    """Duck-typed stand-in for Multigame with binary64 payoffs and priors."""

    def __init__(self, payoffs, spaces):
        self.payoffs = payoffs
        self.type_spaces = tuple(_FloatSpace(s) for s in spaces)
        self.m_games = len(payoffs[0])


class _FloatSpace:
    continuous = False

    def __init__(self, space: DiscreteTypeSpace):
        self.points = tuple(float(p) for p in space.points)
        self.probs = tuple(float(p) for p in space.probs)


def _require_discrete(game):
    if any(s.continuous for s in game.type_spaces):
        raise ValueError("the oracle needs finite type spaces")


def _utilities(game, agent: int, zeta_c, points) -> list:
    """(U(C), U(D)) at every own type against cooperation rate ``zeta_c``."""
    payoffs_c = local_expected_payoffs(game, agent, Action.C, zeta_c)
    payoffs_d = local_expected_payoffs(game, agent, Action.D, zeta_c)
    table = []
    for theta in points:
        w = type_vector(game, theta)
        table.append((sum(a * b for a, b in zip(w, payoffs_c)), sum(a * b for a, b in zip(w, payoffs_d))))
    return table


def _regret_from_table(own: ThresholdStrategy, points, table):
    worst, worst_theta, worst_action = None, None, None
    for theta, (uc, ud) in zip(points, table):
        pc = own.prob_c(theta)
        played = pc * uc + (1 - pc) * ud
        for action, u in ((Action.C, uc), (Action.D, ud)):
            gain = u - played
            if worst is None or gain > worst:
                worst, worst_theta, worst_action = gain, theta, action
    return worst, worst_theta, worst_action


def verify_equilibrium(game: Multigame, strategies: Sequence[ThresholdStrategy], exact: bool = True) -> RegretReport:
    """Largest gain from a unilateral deviation, over agents, types and actions."""
    _require_discrete(game)
    if not exact:
        game = _float_game(game)
        strategies = [to_float_strategy(s) for s in strategies]
    regrets, types, actions = [], [], []
    for agent in (0, 1):
        zc = zeta(game, agent, Action.C, strategies[1 - agent])
        points = game.type_spaces[agent].points
        r, theta, action = _regret_from_table(strategies[agent], points, _utilities(game, agent, zc, points))
        regrets.append(r)
        types.append(theta)
        actions.append(action)
    return RegretReport(tuple(regrets), tuple(types), tuple(actions), exact)


def agent_candidates(points: Sequence, orientations=(Orientation.DC, Orientation.CD)) -> list:
    """One threshold strictly inside each interval, for each orientation."""
    n = len(points)
    half = (points[1] - points[0]) / 2 if n > 1 else Fraction(1, 2)
    reps = [points[0] - half]
    reps += [(a + b) / 2 for a, b in zip(points, points[1:])]
    reps.append(points[-1] + half)
    return [ThresholdStrategy(x, o) for o in orientations for x in reps]


def enumerate_candidates(game: Multigame, orientations=(Orientation.DC, Orientation.CD)) -> list:
    _require_discrete(game)
    c1 = agent_candidates(game.type_spaces[0].points, orientations)
    c2 = agent_candidates(game.type_spaces[1].points, orientations)
    return list(product(c1, c2))


def action_profile(strategy: ThresholdStrategy, points: Sequence) -> tuple:
    return tuple(strategy.prob_c(x) for x in points)


def brute_force_ne(game: Multigame, cap: int = DEFAULT_CAP, orientations=(Orientation.DC, Orientation.CD)) -> list:
    """All pure threshold equilibria, one representative pair per equivalence class.

    Order follows candidate enumeration: DC before CD, intervals ascending.
    """
    _require_discrete(game)
    spaces = game.type_spaces
    per_agent = [agent_candidates(s.points, orientations) for s in spaces]
    total = len(per_agent[0]) * len(per_agent[1])
    if total > cap:
        raise ValueError(f"{total} candidate pairs exceed the cap of {cap}")
    uniq = []
    for agent in (0, 1):
        seen, kept = set(), []
        for s in per_agent[agent]:
            prof = action_profile(s, spaces[agent].points)
            if prof not in seen:
                seen.add(prof)
                kept.append(s)
        uniq.append(kept)
    # Candidates are pure, so the regret of a profile is the largest gap
    # U(C) - U(D) at a type playing D, or its negative at a type playing C.
    # regret[agent][own][opp], reusing zeta per opponent candidate
    regret = []
    for agent in (0, 1):
        points = spaces[agent].points
        gaps = [
            [uc - ud for uc, ud in _utilities(game, agent, zeta(game, agent, Action.C, opp), points)]
            for opp in uniq[1 - agent]
        ]
        profiles = [action_profile(own, points) for own in uniq[agent]]
        regret.append(
            [[max(0, max(-g if pc else g for pc, g in zip(prof, gap))) for gap in gaps] for prof in profiles]
        )
    found = []
    for i, s1 in enumerate(uniq[0]):
        for j, s2 in enumerate(uniq[1]):
            if regret[0][i][j] <= 0 and regret[1][j][i] <= 0:
                found.append((s1, s2))
    return found
