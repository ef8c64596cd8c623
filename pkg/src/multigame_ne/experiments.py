"""Random instances, classification runs, solution counts and timing benchmarks.

Every random draw goes through ``numpy.random.default_rng`` seeded with a
tuple that names the run, the matrix and the trial, so results do not
depend on execution order or on how many worker processes are used.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .discrete import SearchStats, dgpd_search, general_search
from .gamefile import write_game_file
from .model import DGPDParams, DiscreteTypeSpace, LocalGamePayoff, Multigame, dgpd_game

GRID_DENOMINATOR = 10_000
BENCH_PARAMS = DGPDParams(20, 16, 15, 6, 3)

FULL = "full-observed"
HYBRID = "hybrid-observed"
SOLUTIONLESS = "solutionless-observed"


# --------------------------------------------------------------------------
# Random instances
# --------------------------------------------------------------------------


def random_payoff_matrix(seed, low: int = 0, high: int = 9) -> tuple:
    """Independent uniform integers in [low, high] for both agents' two tables."""
    if high < low:
        raise ValueError(f"empty range [{low}, {high}]")
    rng = np.random.default_rng(seed)
    draws = rng.integers(low, high + 1, size=(2, 2, 4))
    return tuple(tuple(LocalGamePayoff(*(int(v) for v in draws[i, j])) for j in range(2)) for i in range(2))


def _integer_weights(rng: np.random.Generator, n: int, total: int) -> list:
    """Flat-Dirichlet weights rounded to positive integers summing to ``total``."""
    w = rng.exponential(size=n)
    share = w / w.sum() * (total - n)
    base = np.floor(share).astype(np.int64)
    short = (total - n) - int(base.sum())
    order = np.argsort(-(share - base), kind="stable")
    base[order[:short]] += 1
    return [int(b) + 1 for b in base]


def random_type_space(rng: np.random.Generator, n: int) -> DiscreteTypeSpace:
    """``n`` distinct grid points in (0, 1) with a random prior.

    Points sit on the grid ``k / D`` with ``D = max(10^4, 2n)`` and the
    probabilities are integer multiples of ``1 / D``.
    """
    if n < 1:
        raise ValueError("type space size must be positive")
    den = max(GRID_DENOMINATOR, 2 * n)
    ks = np.sort(rng.choice(np.arange(1, den), size=n, replace=False))
    weights = _integer_weights(rng, n, den)
    return DiscreteTypeSpace([Fraction(int(k), den) for k in ks], [Fraction(w, den) for w in weights])


def random_dgpd_params(rng: np.random.Generator, high: int = 30) -> DGPDParams:
    """Rejection-sample integer DGPD payoffs in [0, high]."""
    while True:
        t, r, y, p, s = sorted((int(v) for v in rng.choice(high + 1, size=5, replace=False)), reverse=True)
        params = DGPDParams(t, r, y, p, s)
        if 2 * r > t + s and 2 * y > r + p:
            return params


# --------------------------------------------------------------------------
# Classification
# --------------------------------------------------------------------------


def _classify_one(args):
    seed, configs, max_size, low, high = args
    payoffs = random_payoff_matrix(seed, low, high)
    solved, unsolved = 0, None
    for c in range(configs):
        rng = np.random.default_rng((seed, c))
        n1, n2 = (int(v) for v in rng.integers(1, max_size + 1, size=2))
        game = Multigame(payoffs, (random_type_space(rng, n1), random_type_space(rng, n2)))
        if general_search(game, verify=False):
            solved += 1
        elif unsolved is None:
            unsolved = game
    return payoffs, solved, unsolved


def label_counts(solved: int, configs: int) -> str:
    if solved == configs:
        return FULL
    return HYBRID if solved else SOLUTIONLESS


def run_classification(
    seeds: Iterable[int],
    configs: int = 100,
    max_size: int = 5,
    low: int = 0,
    high: int = 9,
    jobs: int = 1,
    dump_dir=None,
) -> list:
    """Label random payoff matrices by how many sampled type configurations admit a pure NE.

    One matrix per seed; configuration ``c`` of that matrix is drawn from
    ``(seed, c)`` with both sizes uniform in [1, max_size].  Returns one dict
    per matrix.  A matrix with no solved configuration has its first game
    written to ``dump_dir`` when given.
    """
    if configs < 2:
        raise ValueError("need at least 2 configurations per matrix")
    seeds = list(seeds)
    tasks = [(s, configs, max_size, low, high) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            outcomes = list(pool.map(_classify_one, tasks, chunksize=4))
    else:
        outcomes = [_classify_one(t) for t in tasks]
    rows = []
    for matrix_id, (seed, (payoffs, solved, unsolved)) in enumerate(zip(seeds, outcomes)):
        label = label_counts(solved, configs)
        row = {"matrix_id": matrix_id, "seed": seed, "configs": configs, "solved": solved, "label": label}
        if label == SOLUTIONLESS and dump_dir is not None:
            path = Path(dump_dir) / f"solutionless_seed{seed}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            write_game_file(unsolved, path)
            row["dump"] = str(path)
        rows.append(row)
    return rows


# --------------------------------------------------------------------------
# Average number of solutions
# --------------------------------------------------------------------------


def run_avg_solutions(payoffs: Sequence, sizes: Iterable[int], trials: int, seed: int) -> list:
    """Mean number of pure-NE classes over random configurations, per type-space size."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rows = []
    for n in sizes:
        total = 0
        for trial in range(trials):
            rng = np.random.default_rng((seed, n, trial))
            game = Multigame(payoffs, (random_type_space(rng, n), random_type_space(rng, n)))
            total += len(general_search(game, find_all=True, verify=False))
        rows.append({"size": n, "mean_solutions": Fraction(total, trials)})
    return rows


# --------------------------------------------------------------------------
# Benchmarks
# --------------------------------------------------------------------------


def _bench_sizes(mode: str, n: int, n_fixed: int) -> tuple:
    if mode == "diag":
        return n, n
    if mode == "fix-n1":
        return n_fixed, n
    if mode == "fix-n2":
        return n, n_fixed
    raise ValueError(f"unknown mode {mode!r}")


def run_benchmark(
    algo: str,
    sizes: Iterable[int],
    seed: int,
    mode: str = "fix-n2",
    n_fixed: int = 1000,
    trials: int = 5,
    repeats: int = 3,
    params: DGPDParams = BENCH_PARAMS,
) -> list:
    """Wall time and main-loop iterations of one search per size.

    Agent ``i``'s type space depends only on ``(seed, trial, i, n_i)``, so the
    fixed agent keeps the same space across a series.  Each instance is
    timed ``repeats`` times and the fastest run is kept; the row reports the
    mean over trials.  Only the search itself is timed.
    """
    if algo not in ("dgpd", "general"):
        raise ValueError(f"unknown algorithm {algo!r}")
    rows = []
    for n in sizes:
        n1, n2 = _bench_sizes(mode, n, n_fixed)
        times, iters = [], []
        for trial in range(trials):
            s1 = random_type_space(np.random.default_rng((seed, trial, 1, n1)), n1)
            s2 = random_type_space(np.random.default_rng((seed, trial, 2, n2)), n2)
            game = dgpd_game(params, (s1, s2))
            best = float("inf")
            for _ in range(repeats):
                stats = SearchStats()
                start = time.perf_counter()
                if algo == "dgpd":
                    dgpd_search(game, verify=False, stats=stats)
                else:
                    general_search(game, verify=False, stats=stats)
                best = min(best, time.perf_counter() - start)
            times.append(best)
            iters.append(stats.iterations)
        rows.append(
            {
                "algo": algo,
                "n1": n1,
                "n2": n2,
                "mean_wall_time": float(np.mean(times)),
                "mean_iterations": float(np.mean(iters)),
            }
        )
    return rows


def linear_fit_r2(x: Sequence[float], y: Sequence[float]) -> tuple:
    """Least-squares line through (x, y): returns (slope, intercept, R^2)."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------


def _cell(v):
    if isinstance(v, Fraction):
        return f"{float(v):.6f}"
    if isinstance(v, float):
        return f"{v:.6g}"
    return v


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    if not rows:
        return ""
    columns = list(columns or rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c, "")) for c in columns])
    return buf.getvalue()
