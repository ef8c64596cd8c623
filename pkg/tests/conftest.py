from fractions import Fraction
from importlib.resources import files

import numpy as np
import pytest

from multigame_ne import DiscreteTypeSpace, parse_game_file
from multigame_ne.oracle import action_profile

CORPUS = files("multigame_ne") / "corpus"


def corpus_path(name: str):
    return CORPUS / name


def load(name: str):
    return parse_game_file(corpus_path(name))


def profile(pair, game) -> tuple:
    """Action profile of a strategy pair on the game's type points (an equivalence key)."""
    return tuple(action_profile(s, sp.points) for s, sp in zip(pair, game.type_spaces))


def coarse_space(rng: np.random.Generator, n: int) -> DiscreteTypeSpace:
    """Points on the tenths grid with small-integer weights; thresholds often hit points exactly."""
    pts = sorted(rng.choice(np.arange(0, 11), size=n, replace=False))
    w = rng.integers(1, 4, size=n)
    return DiscreteTypeSpace([Fraction(int(p), 10) for p in pts], [Fraction(int(x), int(w.sum())) for x in w])


@pytest.fixture
def sixtieths():
    return load("dgpd_sixtieths.json")


@pytest.fixture
def table13():
    return load("table13_G.json"), load("table13_Gprime.json")


# ---- acceptance report -------------------------------------------------------

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
