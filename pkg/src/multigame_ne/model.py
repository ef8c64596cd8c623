"""Data model for two-action uniform multigames.

A multigame bundles ``m`` local games played simultaneously; every agent
uses one action in all of them and weighs the local payoffs with its private
type vector.  With two local games the type is written ``(1 - theta, theta)``
for a scalar ``theta`` in [0, 1].

Discrete computations are carried out with :class:`fractions.Fraction` so
that results like 48/61 come out exactly.  Continuous priors use binary64.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import accumulate
from typing import TYPE_CHECKING, Sequence, Union

if TYPE_CHECKING:
    from .strategies import ThresholdStrategy

Real = Union[Fraction, int, float]

# float-mode zero tolerance for sign tests; exact values compare exactly
FLOAT_ZERO_TOL = 1e-12


class InvalidGameError(ValueError):
    """Raised when a game, prior or payoff table violates its invariants."""


class Action(str, Enum):
    C = "C"
    D = "D"

    @property
    def other(self) -> "Action":
        return Action.D if self is Action.C else Action.C


class Orientation(str, Enum):
    """Which side of the threshold cooperates.

    ``DC`` plays D below the threshold and C above it, ``CD`` the reverse.
    """

    DC = "DC"
    CD = "CD"


ACTIONS = (Action.C, Action.D)


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def is_zero(x: Real) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) < FLOAT_ZERO_TOL


def sign(x: Real) -> int:
    if is_zero(x):
        return 0
    return 1 if x > 0 else -1


def divide(a: Real, b: Real) -> Real:
    """a / b, staying rational when both operands are exact."""
    if is_exact(a) and is_exact(b):
        return Fraction(a) / b
    return a / b


def as_fraction(x) -> Fraction:
    """Exact conversion; floats go through their shortest repr (0.3 -> 3/10)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidGameError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


# --------------------------------------------------------------------------
# Local games
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalGamePayoff:
    """One agent's payoff table in one local game.

    ``cc`` is the payoff for playing C against C, ``cd`` for C against D,
    and so on (own action first).
    """

    cc: Real
    cd: Real
    dc: Real
    dd: Real

    def __post_init__(self):
        for name in ("cc", "cd", "dc", "dd"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float, Fraction)):
                raise InvalidGameError(f"payoff entry {name} is not a number: {v!r}")
            if isinstance(v, float) and not math.isfinite(v):
                raise InvalidGameError(f"non-finite payoff in entry {name}")

    @classmethod
    def from_mapping(cls, entries) -> "LocalGamePayoff":
        """Build from ``{(own, opp): value}`` with all four action pairs."""
        keys = {(Action(a), Action(b)): v for (a, b), v in entries.items()}
        missing = [f"{a.value}{b.value}" for a in ACTIONS for b in ACTIONS if (a, b) not in keys]
        if missing or len(keys) != 4:
            raise InvalidGameError(f"payoff table must have exactly 4 entries, missing {missing}")
        return cls(
            keys[Action.C, Action.C],
            keys[Action.C, Action.D],
            keys[Action.D, Action.C],
            keys[Action.D, Action.D],
        )

    def __call__(self, own: Action, opp: Action) -> Real:
        if own is Action.C:
            return self.cc if opp is Action.C else self.cd
        return self.dc if opp is Action.C else self.dd

    def delta(self, opp: Action) -> Real:
        """Gain of C over D against a fixed opponent action."""
        return self(Action.C, opp) - self(Action.D, opp)

    def as_float(self) -> "LocalGamePayoff":
        return LocalGamePayoff(float(self.cc), float(self.cd), float(self.dc), float(self.dd))


class LocalGameClass(str, Enum):
    COOPERATIVE = "cooperative"
    COMPETITIVE = "competitive"
    NEITHER = "neither"


# --------------------------------------------------------------------------
# Type spaces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteTypeSpace:
    """Finite type space with an exact rational prior."""

    points: tuple
    probs: tuple
    cumulative: tuple = field(init=False, repr=False, compare=False)

    def __init__(self, points: Sequence, probs: Sequence):
        pts = tuple(as_fraction(p) for p in points)
        prs = tuple(as_fraction(p) for p in probs)
        if not pts:
            raise InvalidGameError("discrete type space needs at least one point")
        if len(pts) != len(prs):
            raise InvalidGameError(f"{len(pts)} points but {len(prs)} probabilities")
        for a, b in zip(pts, pts[1:]):
            if not a < b:
                raise InvalidGameError(f"type points must be strictly increasing ({a} >= {b})")
        if pts[0] < 0 or pts[-1] > 1:
            raise InvalidGameError("type points must lie in [0, 1]")
        if any(p < 0 for p in prs):
            raise InvalidGameError("probabilities must be nonnegative")
        cum = tuple(accumulate(prs))
        if cum[-1] != 1:
            raise InvalidGameError(f"probabilities sum to {cum[-1]}, not 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", prs)
        object.__setattr__(self, "cumulative", cum)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def continuous(self) -> bool:
        return False

    def prob_below(self, k: int) -> Fraction:
        """Probability mass of the ``k`` lowest points."""
        return self.cumulative[k - 1] if k > 0 else Fraction(0)


@dataclass(frozen=True)
class UniformTypeSpace:
    """Uniform prior on [0, 1]."""

    @property
    def continuous(self) -> bool:
        return True

    def cdf(self, x: float) -> float:
        return min(1.0, max(0.0, float(x)))

    def inverse_cdf(self, u):
        import numpy as np

        return np.clip(np.asarray(u, dtype=float), 0.0, 1.0)


@dataclass(frozen=True)
class TabulatedCDFTypeSpace:
    """Atom-free prior on [0, 1] given by a piecewise-linear CDF."""

    knots: tuple
    values: tuple

    def __init__(self, knots: Sequence, values: Sequence):
        ks = tuple(as_fraction(k) for k in knots)
        vs = tuple(as_fraction(v) for v in values)
        if len(ks) < 2 or len(ks) != len(vs):
            raise InvalidGameError("tabulated CDF needs matching knots/values, at least 2 of each")
        if ks[0] != 0 or ks[-1] != 1:
            raise InvalidGameError("CDF knots must start at 0 and end at 1")
        if any(not a < b for a, b in zip(ks, ks[1:])):
            raise InvalidGameError("CDF knots must be strictly increasing")
        if vs[0] != 0 or vs[-1] != 1:
            raise InvalidGameError("CDF values must start at 0 and end at 1")
        if any(b < a for a, b in zip(vs, vs[1:])):
            raise InvalidGameError("CDF values must be nondecreasing")
        object.__setattr__(self, "knots", ks)
        object.__setattr__(self, "values", vs)

    @property
    def continuous(self) -> bool:
        return True

    def cdf(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 0.0
        if x >= 1.0:
            return 1.0
        ks = [float(k) for k in self.knots]
        j = bisect.bisect_right(ks, x) - 1
        x0, x1 = ks[j], ks[j + 1]
        y0, y1 = float(self.values[j]), float(self.values[j + 1])
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def inverse_cdf(self, u):
        """Vectorised inverse transform; flat CDF pieces map to their left end."""
        import numpy as np

        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        ks = np.array([float(k) for k in self.knots])
        vs = np.array([float(v) for v in self.values])
        j = np.searchsorted(vs, u, side="left")
        j = np.clip(j, 1, len(vs) - 1)
        y0, y1 = vs[j - 1], vs[j]
        x0, x1 = ks[j - 1], ks[j]
        width = np.where(y1 > y0, y1 - y0, 1.0)
        return np.where(y1 > y0, x0 + (u - y0) * (x1 - x0) / width, x0)


TypeSpace = Union[DiscreteTypeSpace, UniformTypeSpace, TabulatedCDFTypeSpace]


# --------------------------------------------------------------------------
# Games
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DGPDParams:
    """Double Game Prisoner Dilemma payoffs; the social game's z equals s."""

    t: Real
    r: Real
    y: Real
    p: Real
    s: Real

    @property
    def z(self) -> Real:
        return self.s

    def as_tuple(self) -> tuple:
        return (self.t, self.r, self.y, self.p, self.s)

    def as_float(self) -> "DGPDParams":
        return DGPDParams(*(float(v) for v in self.as_tuple()))

    def local_games(self) -> tuple[LocalGamePayoff, LocalGamePayoff]:
        pd = LocalGamePayoff(cc=self.r, cd=self.s, dc=self.t, dd=self.p)
        social = LocalGamePayoff(cc=self.y, cd=self.y, dc=self.z, dd=self.z)
        return pd, social


@dataclass(frozen=True)
class ValidityReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_dgpd(params: DGPDParams) -> ValidityReport:
    """Check the DGPD constraints and name every one that fails."""
    for v in params.as_tuple():
        if isinstance(v, bool) or not isinstance(v, (int, float, Fraction)) or (
            isinstance(v, float) and not math.isfinite(v)
        ):
            raise InvalidGameError("non-finite payoff")
    t, r, y, p, s = params.as_tuple()
    checks = [
        ("t > r", t > r),
        ("r > y", r > y),
        ("y > p", y > p),
        ("p > s", p > s),
        ("r > (t+s)/2", 2 * r > t + s),
        ("y > (r+p)/2", 2 * y > r + p),
    ]
    return ValidityReport(tuple(f"{name} fails" for name, ok in checks if not ok))


@dataclass(frozen=True)
class Multigame:
    """Uniform multigame with independent priors.

    ``payoffs[i][j]`` is agent ``i``'s table in local game ``j``;
    ``type_spaces[i]`` is agent ``i``'s type distribution, which is also what
    the other agent believes about ``i``.
    """

    payoffs: tuple
    type_spaces: tuple
    dgpd: DGPDParams | None = None

    def __post_init__(self):
        payoffs = tuple(tuple(row) for row in self.payoffs)
        object.__setattr__(self, "payoffs", payoffs)
        object.__setattr__(self, "type_spaces", tuple(self.type_spaces))
        if len(payoffs) != 2 or len(self.type_spaces) != 2:
            raise InvalidGameError("only 2-agent games are supported")
        m = len(payoffs[0])
        if m < 1 or any(len(row) != m for row in payoffs):
            raise InvalidGameError("every agent needs one table per local game")
        for row in payoffs:
            for table in row:
                if not isinstance(table, LocalGamePayoff):
                    raise InvalidGameError("payoff tables must be LocalGamePayoff")
        if self.dgpd is not None:
            report = validate_dgpd(self.dgpd)
            if not report:
                raise InvalidGameError("invalid DGPD parameters: " + ", ".join(report.violations))
            expected = self.dgpd.local_games()
            if any(tuple(row) != expected for row in payoffs):
                raise InvalidGameError("payoff tables do not match the DGPD construction")

    @property
    def n_agents(self) -> int:
        return len(self.payoffs)

    @property
    def m_games(self) -> int:
        return len(self.payoffs[0])

    @property
    def discrete(self) -> bool:
        return all(not ts.continuous for ts in self.type_spaces)

    @property
    def continuous(self) -> bool:
        return all(ts.continuous for ts in self.type_spaces)


def dgpd_game(params: DGPDParams, type_spaces: Sequence[TypeSpace]) -> Multigame:
    tables = params.local_games()
    return Multigame(payoffs=(tables, tables), type_spaces=tuple(type_spaces), dgpd=params)


def opponent(agent: int) -> int:
    return 1 - agent


# --------------------------------------------------------------------------
# Expected-utility calculus
# --------------------------------------------------------------------------


def zeta(game: Multigame, agent: int, opponent_action: Action, opponent_strategy: "ThresholdStrategy") -> Real:
    """Probability, for ``agent``, that the opponent plays ``opponent_action``."""
    space = game.type_spaces[opponent(agent)]
    if space.continuous:
        zc = _continuous_zeta_c(space, opponent_strategy)
    else:
        zc = sum(p * opponent_strategy.prob_c(theta) for theta, p in zip(space.points, space.probs))
        zc = Fraction(zc) if is_exact(zc) else zc
    return zc if Action(opponent_action) is Action.C else 1 - zc


def _continuous_zeta_c(space, strategy) -> float:
    # atom-free prior: the boundary mix never carries mass
    x = strategy.threshold
    below = space.cdf(x) if math.isfinite(float(x)) else (0.0 if x < 0 else 1.0)
    return 1.0 - below if strategy.orientation is Orientation.DC else below


def type_vector(game: Multigame, theta) -> tuple:
    if isinstance(theta, (int, float, Fraction)):
        if game.m_games != 2:
            raise ValueError("scalar types are only defined for two local games")
        return (1 - theta, theta)
    vec = tuple(theta)
    if len(vec) != game.m_games:
        raise ValueError(f"type vector has {len(vec)} components, game has {game.m_games}")
    return vec


def local_expected_payoffs(game: Multigame, agent: int, action: Action, zeta_c: Real) -> tuple:
    """Expected payoff in every local game against an opponent cooperating w.p. ``zeta_c``."""
    zeta_d = 1 - zeta_c
    return tuple(
        table(action, Action.C) * zeta_c + table(action, Action.D) * zeta_d for table in game.payoffs[agent]
    )


def expected_utility(game: Multigame, agent: int, action: Action, theta, opponent_strategy: "ThresholdStrategy") -> Real:
    weights = type_vector(game, theta)
    zc = zeta(game, agent, Action.C, opponent_strategy)
    return sum(w * u for w, u in zip(weights, local_expected_payoffs(game, agent, Action(action), zc)))


def delta_vector(game: Multigame, agent: int, opponent_strategy: "ThresholdStrategy") -> tuple:
    """Per-local-game expected gain of C over D; its dot with the type decides the action."""
    zc = zeta(game, agent, Action.C, opponent_strategy)
    return delta_vector_from_zeta(game, agent, zc)


def delta_vector_from_zeta(game: Multigame, agent: int, zeta_c: Real) -> tuple:
    zeta_d = 1 - zeta_c
    return tuple(t.delta(Action.C) * zeta_c + t.delta(Action.D) * zeta_d for t in game.payoffs[agent])


def classify_local_game(table: LocalGamePayoff) -> LocalGameClass:
    gains = [table.delta(a) for a in ACTIONS]
    if all(g > 0 for g in gains):
        return LocalGameClass.COOPERATIVE
    if all(g < 0 for g in gains):
        return LocalGameClass.COMPETITIVE
    return LocalGameClass.NEITHER


def is_purely_cooperative(game: Multigame, agent: int, local_game: int) -> LocalGameClass:
    """Classify local game ``local_game`` for ``agent`` by strict dominance of C or D."""
    return classify_local_game(game.payoffs[agent][local_game])


def has_pure_ne_guarantee(game: Multigame) -> bool:
    """Sufficient condition for a pure Bayesian NE under continuous priors.

    True when every agent has at least one local game in which C or D is
    strictly dominant.  False says nothing about nonexistence.
    """
    if not game.continuous:
        raise ValueError("the existence guarantee only covers continuous type spaces")
    return all(
        any(classify_local_game(t) is not LocalGameClass.NEITHER for t in game.payoffs[i])
        for i in range(game.n_agents)
    )
