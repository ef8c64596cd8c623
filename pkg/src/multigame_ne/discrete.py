"""Pure-equilibrium search on finite type spaces.

Type points ``theta^1 < ... < theta^n`` cut the line into intervals
``I^0 = (-inf, theta^1]``, ``I^k = [theta^k, theta^(k+1)]``,
``I^n = [theta^n, +inf)``.  All thresholds strictly inside one interval
induce the same pure strategy, so a pure threshold strategy is identified by
``(orientation, k)``: the ``k`` lowest types play D (orientation DC) or C
(orientation CD).  A threshold sitting on a type point is assigned to the
lower interval, which for a DC strategy means the boundary type plays C.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .model import (
    DGPDParams,
    DiscreteTypeSpace,
    InvalidGameError,
    LocalGamePayoff,
    Multigame,
    Orientation,
    as_fraction,
    sign,
    validate_dgpd,
)
from .oracle import verify_equilibrium
from .strategies import (
    ALWAYS_C,
    ALWAYS_D,
    INDIFFERENT,
    ThresholdStrategy,
    determinant,
    forbidden_value,
    lambda_mu,
    strategy_type,
    threshold_function_dgpd,
    threshold_function_general,
)

ClassKey = tuple  # (Orientation, k)


@dataclass(frozen=True)
class IntervalIndex:
    agent: int
    k: int


@dataclass(frozen=True)
class EquilibriumResult:
    strategies: tuple
    intervals: tuple
    candidates: tuple = ()
    regret: Fraction | None = None
    classes: tuple = field(default=(), compare=False)

    @property
    def thresholds(self) -> tuple:
        return tuple(s.threshold for s in self.strategies)


@dataclass
class SearchStats:
    """Mutable counter filled in by the searches (main-loop iterations)."""

    iterations: int = 0
    candidates: list = field(default_factory=list)


# --------------------------------------------------------------------------
# Interval helpers
# --------------------------------------------------------------------------


def compute_cumul_proba(probs: Sequence) -> list:
    probs = [as_fraction(p) for p in probs]
    if not probs or any(p < 0 for p in probs):
        raise InvalidGameError("probabilities must be a nonempty list of nonnegative numbers")
    out, acc = [], Fraction(0)
    for p in probs:
        acc += p
        out.append(acc)
    if acc != 1:
        raise InvalidGameError(f"probabilities sum to {acc}, not 1")
    return out


def finder(points: Sequence, threshold) -> int:
    """Index k of the interval I^k holding ``threshold`` (type points go to the lower interval)."""
    if threshold == -math.inf:
        return 0
    if threshold == math.inf:
        return len(points)
    return bisect.bisect_left(points, threshold)


def search_space_boundaries(params: DGPDParams, points: Sequence) -> tuple:
    lam, mu = lambda_mu(params)
    return finder(points, min(lam, mu)), finder(points, max(lam, mu))


def canonical_class(orientation: Orientation, k: int, n: int) -> ClassKey:
    """Fold the two constant CD classes onto their DC twins."""
    orientation = Orientation(orientation)
    if orientation is Orientation.CD and k in (0, n):
        return (Orientation.DC, n - k)
    return (orientation, k)


def all_classes(n: int) -> list:
    return [(Orientation.DC, k) for k in range(n + 1)] + [(Orientation.CD, k) for k in range(1, n)]


def class_of(strategy: ThresholdStrategy, points: Sequence) -> ClassKey:
    if not strategy.is_pure_on(points):
        raise ValueError("strategy mixes on a type point")
    k = finder(points, strategy.threshold)
    on_point = k < len(points) and points[k] == strategy.threshold
    if on_point:
        plays_c = strategy.alpha == 1
        # the boundary type joins the low block when it acts like the low side
        if (strategy.orientation is Orientation.DC) != plays_c:
            k += 1
    return canonical_class(strategy.orientation, k, len(points))


def class_representative(key: ClassKey, points: Sequence) -> ThresholdStrategy:
    """A threshold strictly inside the key's interval."""
    orientation, k = key
    n = len(points)
    half = (points[1] - points[0]) / 2 if n > 1 else Fraction(1, 2)
    if k == 0:
        x = points[0] - half
    elif k == n:
        x = points[-1] + half
    else:
        x = (points[k - 1] + points[k]) / 2
    return ThresholdStrategy(x, orientation)


def class_zeta_c(key: ClassKey, space: DiscreteTypeSpace) -> Fraction:
    """Cooperation probability of a player whose strategy class is ``key``."""
    orientation, k = key
    below = space.prob_below(k)
    return 1 - below if orientation is Orientation.DC else below


def best_response_classes(zeta_c, payoffs: Sequence[LocalGamePayoff], points: Sequence) -> list:
    """Every pure threshold class that is a best response, with a strategy realising it."""
    n = len(points)
    br = threshold_function_general(zeta_c, payoffs)
    if br is INDIFFERENT:
        return [(key, class_representative(key, points)) for key in all_classes(n)]
    if br is ALWAYS_C or br is ALWAYS_D or math.isinf(br.threshold):
        return [(class_of(br, points), br)]
    x, o = br.threshold, br.orientation
    k = finder(points, x)
    if k < n and points[k] == x:
        # indifferent at one type: both pure completions are best responses
        low = ThresholdStrategy(x, o, 1 if o is Orientation.DC else 0)
        high = ThresholdStrategy(x, o, 0 if o is Orientation.DC else 1)
        return [(class_of(low, points), low), (class_of(high, points), high)]
    return [(canonical_class(o, k, n), br)]


# --------------------------------------------------------------------------
# DGPD search
# --------------------------------------------------------------------------


def dgpd_params_from_tables(tables: Sequence) -> DGPDParams | None:
    """Recover (t, r, y, p, s) from a DGPD-shaped pair of tables, or None."""
    pd, social = tables
    if social.cc != social.cd or social.dc != social.dd or social.dc != pd.cd:
        return None
    params = DGPDParams(t=pd.dc, r=pd.cc, y=social.cc, p=pd.dd, s=pd.cd)
    return params if validate_dgpd(params) else None


def dgpd_params_of(game: Multigame) -> DGPDParams:
    """The game's DGPD parameters, declared or recognised from its tables."""
    if game.dgpd is not None:
        return game.dgpd
    found = [dgpd_params_from_tables(row) for row in game.payoffs]
    if found[0] is None or found[0] != found[1]:
        raise InvalidGameError("game is not a DGPD")
    return found[0]


def _require_discrete(game: Multigame):
    if not game.discrete:
        raise InvalidGameError("discrete search needs finite type spaces for both agents")
    if game.m_games != 2:
        raise InvalidGameError("discrete search handles two local games only")


def _dgpd_scan(game: Multigame, find_all: bool, verify: bool, stats: SearchStats | None):
    _require_discrete(game)
    params = dgpd_params_of(game)
    stats = stats if stats is not None else SearchStats()
    sp1, sp2 = game.type_spaces
    pts1, pts2 = sp1.points, sp2.points
    n1 = len(pts1)
    start, end = search_space_boundaries(params, pts1)
    results = []
    for i in range(start, end + 1):
        stats.iterations += 1
        theta2 = threshold_function_dgpd(1 - sp1.prob_below(i), params)
        k = finder(pts2, theta2)
        theta1 = threshold_function_dgpd(1 - sp2.prob_below(k), params)
        stats.candidates.append((i, theta2, k, theta1))
        lower = pts1[i - 1] if i > 0 else -math.inf
        upper = pts1[i] if i < n1 else math.inf
        if lower <= theta1 <= upper:
            # on the lower end the boundary type must defect to stay in I^i
            alpha1 = 0 if (i > 0 and theta1 == lower) else 1
            s1 = ThresholdStrategy(theta1, Orientation.DC, alpha1)
            s2 = ThresholdStrategy(theta2, Orientation.DC, 1)
            regret = verify_equilibrium(game, (s1, s2)).regret if verify else None
            results.append(
                EquilibriumResult(
                    strategies=(s1, s2),
                    intervals=(IntervalIndex(0, i), IntervalIndex(1, k)),
                    candidates=tuple(c[1] for c in stats.candidates),
                    regret=regret,
                    classes=((Orientation.DC, i), (Orientation.DC, k)),
                )
            )
            if not find_all:
                break
    return results


def dgpd_search(game: Multigame, verify: bool = True, stats: SearchStats | None = None) -> EquilibriumResult | None:
    """Exhaustive threshold search for a DGPD with finite type spaces.

    Scans agent 1's intervals that can hold a best-response threshold
    (between lambda and mu), chains two best responses and stops at the
    first interval that maps back to itself.  A DGPD always has such an
    interval, so ``None`` signals bad input or a defect.
    """
    found = _dgpd_scan(game, find_all=False, verify=verify, stats=stats)
    return found[0] if found else None


def dgpd_search_all(game: Multigame, verify: bool = True, stats: SearchStats | None = None) -> list:
    return _dgpd_scan(game, find_all=True, verify=verify, stats=stats)


# --------------------------------------------------------------------------
# General double-game search
# --------------------------------------------------------------------------


def general_search(
    game: Multigame,
    find_all: bool = False,
    verify: bool = True,
    stats: SearchStats | None = None,
) -> list:
    """Search pure threshold equilibria for arbitrary 2x2x2 payoffs.

    Every interval of agent 1 is tried with both orientations.  For each
    start, agent 2's best-response classes are computed, then agent 1's
    best responses to each of those; a start that reappears is an
    equilibrium.  Best responses landing on a type point contribute both
    neighbouring classes, and an indifferent agent contributes every class,
    so with ``find_all`` the result is the complete set of pure threshold
    equilibria up to equivalence.
    """
    _require_discrete(game)
    stats = stats if stats is not None else SearchStats()
    sp1, sp2 = game.type_spaces
    pay1, pay2 = game.payoffs
    n1 = sp1.size
    seen = set()
    results = []
    for orientation in (Orientation.DC, Orientation.CD):
        for k in range(n1 + 1):
            stats.iterations += 1
            start = canonical_class(orientation, k, n1)
            for key2, s2 in best_response_classes(class_zeta_c(start, sp1), pay2, sp2.points):
                for key1, s1 in best_response_classes(class_zeta_c(key2, sp2), pay1, sp1.points):
                    stats.candidates.append((start, s2.threshold, s1.threshold))
                    if key1 != start or (key1, key2) in seen:
                        continue
                    seen.add((key1, key2))
                    regret = verify_equilibrium(game, (s1, s2)).regret if verify else None
                    results.append(
                        EquilibriumResult(
                            strategies=(s1, s2),
                            intervals=(IntervalIndex(0, key1[1]), IntervalIndex(1, key2[1])),
                            candidates=(s2.threshold, s1.threshold),
                            regret=regret,
                            classes=(key1, key2),
                        )
                    )
                    if not find_all:
                        return results
    return results


# --------------------------------------------------------------------------
# Fixed point of composed monotone maps
# --------------------------------------------------------------------------


def _monotone_direction(seq: Sequence[int]) -> set:
    dirs = set()
    if all(a <= b for a, b in zip(seq, seq[1:])):
        dirs.add("up")
    if all(a >= b for a, b in zip(seq, seq[1:])):
        dirs.add("down")
    return dirs


def monotone_fixed_point(f: Sequence[int] | Callable, g: Sequence[int] | Callable, M: int | None = None, N: int | None = None) -> int:
    """Return c in [0, N] with f(g(c)) == c.

    ``f`` maps [0, M] into [0, N] and ``g`` maps [0, N] into [0, M]; both
    must be nondecreasing or both nonincreasing.  Maps are given as lists
    (or callables together with ``M`` and ``N``).
    """
    if callable(f):
        if M is None or N is None:
            raise ValueError("callable maps need M and N")
        f = [f(x) for x in range(M + 1)]
    if callable(g):
        if M is None or N is None:
            raise ValueError("callable maps need M and N")
        g = [g(x) for x in range(N + 1)]
    f, g = list(f), list(g)
    M, N = len(f) - 1, len(g) - 1
    if M < 0 or N < 0:
        raise ValueError("maps must be nonempty")
    if any(not 0 <= v <= N for v in f) or any(not 0 <= v <= M for v in g):
        raise ValueError("map values out of range")
    if not (_monotone_direction(f) & _monotone_direction(g)):
        raise ValueError("f and g must be both nondecreasing or both nonincreasing")
    c = 0
    while True:
        nxt = f[g[c]]
        if nxt == c:
            return c
        c = nxt


# --------------------------------------------------------------------------
# Sufficient condition for the full set
# --------------------------------------------------------------------------


def prop10_check(payoffs: Sequence) -> bool:
    """Sufficient condition for a pure equilibrium under every type configuration.

    Both forbidden values must fall outside [0, 1] (so each agent has one
    strategy type), and the determinants must share their sign when the
    strategy types agree and have opposite signs otherwise.
    """
    types, signs = [], []
    for tables in payoffs:
        fv = forbidden_value(tables)
        if fv is not None and 0 <= fv <= 1:
            return False
        kinds = {strategy_type(tables, z) for z in (0, 1)}
        if None in kinds or len(kinds) != 1:
            return False
        types.append(kinds.pop())
        signs.append(sign(determinant(tables)))
    if types[0] is types[1]:
        return signs[0] == signs[1]
    return signs[0] == -signs[1]

