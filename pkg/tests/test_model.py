import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multigame_ne import (
    Action,
    DGPDParams,
    DiscreteTypeSpace,
    InvalidGameError,
    LocalGamePayoff,
    Multigame,
    Orientation,
    TabulatedCDFTypeSpace,
    ThresholdStrategy,
    UniformTypeSpace,
    delta_vector,
    dgpd_game,
    expected_utility,
    has_pure_ne_guarantee,
    is_purely_cooperative,
    validate_dgpd,
    zeta,
)
from multigame_ne.model import LocalGameClass, as_fraction, delta_vector_from_zeta
from multigame_ne.strategies import ALWAYS_C, ALWAYS_D, threshold_function_dgpd

from conftest import load

P33 = DGPDParams(20, 16, 15, 6, 3)


# ---- validate_dgpd ----------------------------------------------------------


def test_valid_params():
    assert validate_dgpd(P33).ok
    assert validate_dgpd(DGPDParams(9, 5, 4, 2, 0)).ok


def test_ordering_violation_is_named():
    report = validate_dgpd(DGPDParams(9, 5, 4, 2, 3))
    assert not report
    assert "p > s fails" in report.violations


def test_every_violation_listed():
    report = validate_dgpd(DGPDParams(10, 4, 5, 1, 0))
    assert "r > y fails" in report.violations
    assert "r > (t+s)/2 fails" in report.violations


@pytest.mark.parametrize("bad", [math.inf, math.nan, -math.inf])
def test_non_finite_rejected(bad):
    with pytest.raises(InvalidGameError, match="non-finite payoff"):
        validate_dgpd(DGPDParams(bad, 5, 4, 2, 0))


# ---- type spaces ------------------------------------------------------------


def test_discrete_space_rejects_bad_prior():
    with pytest.raises(InvalidGameError, match="sum"):
        DiscreteTypeSpace([F(1, 5), F(1, 2)], [F(1, 2), F(2, 5)])
    with pytest.raises(InvalidGameError, match="increasing"):
        DiscreteTypeSpace([F(1, 2), F(1, 5)], [F(1, 2), F(1, 2)])
    with pytest.raises(InvalidGameError, match=r"\[0, 1\]"):
        DiscreteTypeSpace([F(3, 2)], [1])
    with pytest.raises(InvalidGameError, match="nonnegative"):
        DiscreteTypeSpace([0, 1], [F(3, 2), F(-1, 2)])


def test_float_inputs_are_read_as_decimals():
    sp = DiscreteTypeSpace([0.2, 0.5, 0.6], [0.3, 0.4, 0.3])
    assert sp.points == (F(1, 5), F(1, 2), F(3, 5))
    assert sp.cumulative[-1] == 1
    assert as_fraction(0.1) == F(1, 10)


def test_tabulated_cdf():
    cdf = TabulatedCDFTypeSpace([0, 0.5, 1], [0, 0.8, 1])
    assert cdf.cdf(0.25) == pytest.approx(0.4)
    assert cdf.cdf(0.75) == pytest.approx(0.9)
    assert cdf.cdf(-1) == 0.0 and cdf.cdf(2) == 1.0
    u = np.array([0.0, 0.4, 0.8, 0.9, 1.0])
    np.testing.assert_allclose(cdf.inverse_cdf(u), [0.0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(InvalidGameError):
        TabulatedCDFTypeSpace([0, 1], [0.1, 1])
    with pytest.raises(InvalidGameError):
        TabulatedCDFTypeSpace([0, 0.5, 1], [0, 0.6, 0.5])


def test_multigame_checks_dgpd_block():
    pd, social = P33.local_games()
    sp = DiscreteTypeSpace([0], [1])
    with pytest.raises(InvalidGameError, match="DGPD construction"):
        Multigame(((pd, social), (pd, pd)), (sp, sp), P33)
    with pytest.raises(InvalidGameError, match="2-agent"):
        Multigame(((pd, social),), (sp,))


def test_local_table_needs_four_entries():
    with pytest.raises(InvalidGameError, match="4 entries"):
        LocalGamePayoff.from_mapping({("C", "C"): 1, ("C", "D"): 2, ("D", "C"): 3})
    with pytest.raises(InvalidGameError, match="non-finite"):
        LocalGamePayoff(1, 2, math.inf, 0)


# ---- zeta -------------------------------------------------------------------


def test_zeta_sixtieths(sixtieths):
    opp = ThresholdStrategy(F(25, 120))  # strictly inside (12/60, 13/60)
    assert zeta(sixtieths, 0, Action.C, opp) == F(48, 61)
    assert zeta(sixtieths, 0, Action.D, opp) == F(13, 61)


def test_zeta_extremes(sixtieths):
    below = ThresholdStrategy(F(-1, 10))
    assert zeta(sixtieths, 0, Action.C, below) == 1
    assert zeta(sixtieths, 0, Action.C, ALWAYS_C) == 1
    assert zeta(sixtieths, 0, Action.C, ALWAYS_D) == 0


def test_zeta_uses_boundary_mix(sixtieths):
    on_point = F(13, 60)
    zc_c = zeta(sixtieths, 0, Action.C, ThresholdStrategy(on_point, alpha=1))
    zc_d = zeta(sixtieths, 0, Action.C, ThresholdStrategy(on_point, alpha=0))
    zc_half = zeta(sixtieths, 0, Action.C, ThresholdStrategy(on_point, alpha=F(1, 2)))
    assert zc_c - zc_d == F(1, 61)
    assert zc_half == (zc_c + zc_d) / 2


def _direct_sum(space, strategy):
    total = F(0)
    for theta, p in zip(space.points, space.probs):
        if theta > strategy.threshold:
            c = 1 if strategy.orientation is Orientation.DC else 0
        elif theta < strategy.threshold:
            c = 0 if strategy.orientation is Orientation.DC else 1
        else:
            c = strategy.alpha
        total += p * c
    return total


def test_zeta_matches_direct_summation():
    rng = np.random.default_rng(3)
    for _ in range(50):
        pts = sorted(set(int(v) for v in rng.integers(0, 100, size=5)))
        w = [int(v) for v in rng.integers(1, 10, size=len(pts))]
        space = DiscreteTypeSpace([F(p, 100) for p in pts], [F(x, sum(w)) for x in w])
        game = dgpd_game(P33, (space, space))
        strat = ThresholdStrategy(F(int(rng.integers(-5, 105)), 100), Orientation(rng.choice(["DC", "CD"])), F(1, 3))
        zc = zeta(game, 0, Action.C, strat)
        assert zc == _direct_sum(space, strat)
        assert zc + zeta(game, 0, Action.D, strat) == 1


def test_zeta_continuous():
    game = dgpd_game(P33, (UniformTypeSpace(), UniformTypeSpace()))
    assert zeta(game, 0, Action.C, ThresholdStrategy(0.3)) == pytest.approx(0.7)
    assert zeta(game, 0, Action.C, ThresholdStrategy(0.3, Orientation.CD)) == pytest.approx(0.3)
    assert zeta(game, 0, Action.C, ALWAYS_C) == 1.0


# ---- expected utility and delta ----------------------------------------------


def test_dgpd_utility_at_theta_one(sixtieths):
    for opp in (ALWAYS_C, ALWAYS_D, ThresholdStrategy(F(1, 3))):
        assert expected_utility(sixtieths, 0, Action.C, 1, opp) == P33.y
        assert expected_utility(sixtieths, 0, Action.D, 1, opp) == P33.s


def test_utilities_cross_at_threshold(sixtieths):
    opp = ThresholdStrategy(F(25, 120))
    theta = threshold_function_dgpd(F(48, 61), P33)
    assert theta == F(231, 963)
    uc = expected_utility(sixtieths, 0, Action.C, theta, opp)
    ud = expected_utility(sixtieths, 0, Action.D, theta, opp)
    assert uc == ud
    gain = expected_utility(sixtieths, 0, Action.C, F(1, 4), opp) - expected_utility(sixtieths, 0, Action.D, F(1, 4), opp)
    assert gain > 0


def test_delta_against_full_cooperation(sixtieths):
    assert delta_vector(sixtieths, 0, ALWAYS_C) == (-4, 12)


def test_delta_zero_for_identical_rows():
    flat = LocalGamePayoff(2, 5, 2, 5)
    sp = DiscreteTypeSpace([0, 1], [F(1, 2), F(1, 2)])
    game = Multigame(((flat, flat), (flat, flat)), (sp, sp))
    assert delta_vector(game, 0, ThresholdStrategy(F(1, 2))) == (0, 0)


def test_delta_general_m():
    tables = (LocalGamePayoff(1, 0, 0, 1), LocalGamePayoff(3, 3, 0, 0), LocalGamePayoff(0, 1, 2, 0))
    sp = DiscreteTypeSpace([0, 1], [F(1, 2), F(1, 2)])
    game = Multigame((tables, tables), (sp, sp))
    assert delta_vector(game, 0, ALWAYS_C) == (1, 3, -2)
    assert expected_utility(game, 0, Action.C, (F(1, 3), F(1, 3), F(1, 3)), ALWAYS_C) == F(4, 3)


def test_utility_is_affine_in_type(sixtieths):
    rng = np.random.default_rng(0)
    for _ in range(20):
        opp = ThresholdStrategy(F(int(rng.integers(0, 60)), 60) + F(1, 120))
        for a in (Action.C, Action.D):
            u = [expected_utility(sixtieths, 0, a, x, opp) for x in (F(0), F(1, 3), F(1))]
            # collinear: slope on [0, 1/3] equals slope on [1/3, 1]
            assert (u[1] - u[0]) * 3 == (u[2] - u[1]) * F(3, 2)


def test_delta_matches_utility_differences():
    game = dgpd_game(P33.as_float(), (UniformTypeSpace(), UniformTypeSpace()))
    rng = np.random.default_rng(1)
    for _ in range(50):
        opp = ThresholdStrategy(float(rng.random()))
        d = delta_vector(game, 0, opp)
        for theta, weights in ((0.0, (1, 0)), (1.0, (0, 1))):
            diff = expected_utility(game, 0, Action.C, theta, opp) - expected_utility(game, 0, Action.D, theta, opp)
            assert abs(diff - sum(w * x for w, x in zip(weights, d))) < 1e-12


# ---- classification ---------------------------------------------------------


def test_local_game_classes():
    pd, social = P33.local_games()
    sp = DiscreteTypeSpace([0], [1])
    game = dgpd_game(P33, (sp, sp))
    assert is_purely_cooperative(game, 0, 1) is LocalGameClass.COOPERATIVE
    assert is_purely_cooperative(game, 0, 0) is LocalGameClass.COMPETITIVE
    chicken = load("chicken.json")
    assert is_purely_cooperative(chicken, 0, 0) is LocalGameClass.COMPETITIVE
    stag = LocalGamePayoff(10, 1, 8, 5)
    assert is_purely_cooperative(Multigame(((stag, social), (stag, social)), (sp, sp)), 0, 0) is LocalGameClass.NEITHER


def test_cooperative_game_has_positive_delta():
    rng = np.random.default_rng(2)
    game = dgpd_game(P33, (UniformTypeSpace(), UniformTypeSpace()))
    for _ in range(100):
        opp = ThresholdStrategy(float(rng.uniform(-0.2, 1.2)), Orientation(rng.choice(["DC", "CD"])))
        assert delta_vector(game, 0, opp)[1] > 0


def test_existence_guarantee():
    u = UniformTypeSpace()
    assert has_pure_ne_guarantee(dgpd_game(P33, (u, u)))
    assert has_pure_ne_guarantee(load("chicken.json"))
    assert has_pure_ne_guarantee(load("battle_of_sexes.json"))
    neither = (LocalGamePayoff(2, 0, 1, 1), LocalGamePayoff(1, 1, 2, 0))
    assert not has_pure_ne_guarantee(Multigame((neither, neither), (u, u)))
    with pytest.raises(ValueError):
        has_pure_ne_guarantee(load("dgpd_sixtieths.json"))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(0, 50), min_size=1, max_size=6, unique=True),
    st.integers(1, 9),
    st.fractions(min_value=-1, max_value=2),
)
def test_zeta_sums_to_one(points, weight, threshold):
    pts = sorted(points)
    ws = [weight + i for i in range(len(pts))]
    sp = DiscreteTypeSpace([F(p, 50) for p in pts], [F(w, sum(ws)) for w in ws])
    game = dgpd_game(P33, (sp, sp))
    for o in Orientation:
        s = ThresholdStrategy(threshold, o, F(1, 2))
        assert zeta(game, 1, Action.C, s) + zeta(game, 1, Action.D, s) == 1


def test_delta_from_zeta_consistent(sixtieths):
    zc = F(48, 61)
    d = delta_vector_from_zeta(sixtieths, 0, zc)
    assert d == (zc * -4 + (1 - zc) * -3, 12)
