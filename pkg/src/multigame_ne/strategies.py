"""Threshold strategies and best-response threshold functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .model import (
    Action,
    DGPDParams,
    DiscreteTypeSpace,
    LocalGamePayoff,
    Orientation,
    Real,
    divide,
    is_zero,
    sign,
)

INF = math.inf


@dataclass(frozen=True)
class ThresholdStrategy:
    """Scalar threshold strategy.

    ``threshold`` may be ``-inf`` or ``+inf``.  ``alpha`` is the probability
    of C for a type sitting exactly on the threshold.
    """

    threshold: Real
    orientation: Orientation = Orientation.DC
    alpha: Real = 1

    def __post_init__(self):
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if isinstance(self.threshold, float) and math.isnan(self.threshold):
            raise ValueError("threshold is NaN")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    def prob_c(self, theta: Real) -> Real:
        if theta == self.threshold:
            return self.alpha
        above = theta > self.threshold
        if self.orientation is Orientation.DC:
            return 1 if above else 0
        return 0 if above else 1

    def action(self, theta: Real) -> Action:
        """Pure action at ``theta``; raises if the strategy mixes there."""
        p = self.prob_c(theta)
        if p == 1:
            return Action.C
        if p == 0:
            return Action.D
        raise ValueError(f"strategy mixes at theta={theta}")

    @property
    def pure(self) -> bool:
        return self.alpha in (0, 1)

    def is_pure_on(self, points: Sequence) -> bool:
        return self.pure or all(p != self.threshold for p in points)


ALWAYS_C = ThresholdStrategy(-INF, Orientation.DC)
ALWAYS_D = ThresholdStrategy(INF, Orientation.DC)


def apply_strategy(strategy: ThresholdStrategy, theta: Real) -> dict:
    p = strategy.prob_c(theta)
    return {Action.C: p, Action.D: 1 - p}


def strategies_equivalent(s1: ThresholdStrategy, s2: ThresholdStrategy, space: DiscreteTypeSpace) -> bool:
    if space.continuous:
        raise ValueError("equivalence is only decided on discrete type spaces")
    return all(s1.prob_c(theta) == s2.prob_c(theta) for theta in space.points)


# --------------------------------------------------------------------------
# Vector thresholds
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class VectorThreshold:
    """Threshold vector: C where type . delta > 0, D where it is < 0."""

    delta: tuple

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(self.delta))

    def score(self, type_vec: Sequence) -> Real:
        return sum(a * b for a, b in zip(type_vec, self.delta))

    def prob_c(self, type_vec: Sequence, alpha: Real = 1) -> Real:
        s = self.score(type_vec)
        if s > 0:
            return 1
        if s < 0:
            return 0
        return alpha

    def is_pure_on(self, type_vecs: Sequence) -> bool:
        return all(self.score(v) != 0 for v in type_vecs)

    def scaled(self, factor: Real) -> "VectorThreshold":
        return VectorThreshold(tuple(factor * d for d in self.delta))


def vector_thresholds_equivalent(d1: VectorThreshold, d2: VectorThreshold, type_vecs: Sequence, alpha: Real = 1) -> bool:
    return all(d1.prob_c(v, alpha) == d2.prob_c(v, alpha) for v in type_vecs)


def convex_combination(d1: VectorThreshold, d2: VectorThreshold, weight: Real) -> VectorThreshold:
    return VectorThreshold(tuple(weight * a + (1 - weight) * b for a, b in zip(d1.delta, d2.delta)))


def perturbed_threshold(delta: VectorThreshold, type_vecs: Sequence) -> VectorThreshold:
    """Shift every component by min |type . delta| / (m + 1).

    The result induces the same pure strategy on ``type_vecs`` (whose
    components are assumed to sum to at most 1) and is generally not
    collinear with ``delta``.
    """
    margin = min(abs(delta.score(v)) for v in type_vecs)
    if margin == 0:
        raise ValueError("threshold is not pure on these types")
    eps = divide(margin, len(delta.delta) + 1)
    return VectorThreshold(tuple(d + eps for d in delta.delta))


# --------------------------------------------------------------------------
# DGPD threshold function
# --------------------------------------------------------------------------


def threshold_function_dgpd(zeta_c: Real, params: DGPDParams) -> Real:
    """Best-response threshold against an opponent who cooperates w.p. ``zeta_c``."""
    t, r, y, p, s = params.as_tuple()
    num = zeta_c * (t - r) + (1 - zeta_c) * (p - s)
    return divide(num, num + (y - s))


def lambda_mu(params: DGPDParams) -> tuple:
    """(lambda, mu): the DGPD threshold function at full and at zero cooperation."""
    return threshold_function_dgpd(1, params), threshold_function_dgpd(0, params)


# --------------------------------------------------------------------------
# General double game
# --------------------------------------------------------------------------


class _Indifferent:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INDIFFERENT"


INDIFFERENT = _Indifferent()
BestResponse = Union[ThresholdStrategy, _Indifferent]


def _zeta_deltas(zeta_c: Real, payoffs: Sequence[LocalGamePayoff]) -> tuple:
    return tuple(
        zeta_c * g.delta(Action.C) + (1 - zeta_c) * g.delta(Action.D) for g in payoffs
    )


def threshold_function_general(zeta_c: Real, payoffs: Sequence[LocalGamePayoff]) -> BestResponse:
    """Best response of an agent with two local games to cooperation rate ``zeta_c``.

    The gain of C over D at type theta is ``d1 + theta * (d2 - d1)``.  A
    nonzero slope yields a finite crossing point, oriented DC when the slope
    is positive.  A zero slope gives a constant best action, reported as a
    threshold at -inf (always C) or +inf (always D), both DC.  If the gain is
    identically zero the agent is :data:`INDIFFERENT`.
    """
    d1, d2 = _zeta_deltas(zeta_c, payoffs)
    slope = d2 - d1
    if is_zero(slope):
        if is_zero(d1):
            return INDIFFERENT
        return ALWAYS_C if d1 > 0 else ALWAYS_D
    crossing = divide(d1, d1 - d2)
    return ThresholdStrategy(crossing, Orientation.DC if slope > 0 else Orientation.CD)


def forbidden_value(payoffs: Sequence[LocalGamePayoff]) -> Real | None:
    """Opponent cooperation rate at which both utility lines are parallel.

    ``None`` when the slope difference does not depend on the cooperation
    rate (then it is either never or always zero).
    """
    g1, g2 = payoffs
    c1, d1 = g1.delta(Action.C), g1.delta(Action.D)
    c2, d2 = g2.delta(Action.C), g2.delta(Action.D)
    denom = c1 - c2 + d2 - d1
    if is_zero(denom):
        return None
    return divide(-(d1 - d2), denom)


def determinant(payoffs: Sequence[LocalGamePayoff]) -> Real:
    g1, g2 = payoffs
    return g1.delta(Action.D) * g2.delta(Action.C) - g1.delta(Action.C) * g2.delta(Action.D)


class Monotonicity(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"


def delta_monotonicity(payoffs: Sequence[LocalGamePayoff]) -> Monotonicity:
    s = sign(determinant(payoffs))
    if s > 0:
        return Monotonicity.INCREASING
    if s < 0:
        return Monotonicity.DECREASING
    return Monotonicity.CONSTANT


def strategy_type(payoffs: Sequence[LocalGamePayoff], zeta_c: Real) -> Orientation | None:
    """Orientation of the best response at ``zeta_c``; None if it is constant or indifferent."""
    br = threshold_function_general(zeta_c, payoffs)
    if br is INDIFFERENT or not math.isfinite(float(br.threshold)):
        return None
    return br.orientation


def to_float_strategy(s: ThresholdStrategy) -> ThresholdStrategy:
    return ThresholdStrategy(float(s.threshold), s.orientation, float(s.alpha))


def to_exact_threshold(x) -> Real:
    """Keep infinities, make everything else a Fraction."""
    if isinstance(x, float) and math.isinf(x):
        return x
    return Fraction(x) if not isinstance(x, Fraction) else x
