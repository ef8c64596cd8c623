"""Command-line entry point.

Exit codes: 0 solved or verified, 1 no pure equilibrium found (or the
checked pair is not one), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from .continuous import SolverError, solve_game
from .discrete import SearchStats, dgpd_params_of, dgpd_search, dgpd_search_all, general_search
from .experiments import (
    SOLUTIONLESS,
    run_avg_solutions,
    run_benchmark,
    run_classification,
    rows_to_csv,
)
from .gamefile import GameFileError, parse_game_file
from .model import InvalidGameError, Orientation, has_pure_ne_guarantee, validate_dgpd
from .oracle import brute_force_ne, verify_equilibrium
from .strategies import ThresholdStrategy, lambda_mu

EXIT_OK, EXIT_NO_NE, EXIT_INPUT = 0, 1, 2


def _num(x):
    """JSON-friendly number: exact values as 'num/den' strings, floats as floats."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _strategy_json(s: ThresholdStrategy) -> dict:
    return {"threshold": _num(s.threshold), "orientation": s.orientation.value, "alpha": _num(s.alpha)}


def _result_json(r) -> dict:
    out = {
        "strategies": [_strategy_json(s) for s in r.strategies],
        "intervals": [iv.k for iv in r.intervals],
    }
    if r.regret is not None:
        out["regret"] = _num(r.regret)
    return out


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _parse_threshold(text: str):
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return math.inf
    if t == "-inf":
        return -math.inf
    return Fraction(text)


def _parse_seeds(text: str) -> list:
    """'0-99' is an inclusive range; otherwise a comma-separated list."""
    text = text.strip()
    if "-" in text.lstrip("-") and "," not in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def _parse_sizes(text: str) -> list:
    return [int(v) for v in text.split(",") if v.strip()]


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_validate(args) -> int:
    game = parse_game_file(args.file)
    out = {
        "valid": True,
        "m_games": game.m_games,
        "kind": "discrete" if game.discrete else "continuous" if game.continuous else "mixed",
    }
    if game.dgpd is not None:
        out["dgpd"] = [_num(v) for v in game.dgpd.as_tuple()]
        out["dgpd_violations"] = list(validate_dgpd(game.dgpd).violations)
    if game.continuous:
        out["pure_ne_guaranteed"] = has_pure_ne_guarantee(game)
    _emit(out)
    return EXIT_OK


def _auto_method(game) -> str:
    if game.continuous:
        return "continuous"
    if game.discrete:
        return "dgpd" if game.dgpd is not None else "general"
    raise InvalidGameError("mixed discrete/continuous type spaces are not supported")


def cmd_solve(args) -> int:
    game = parse_game_file(args.file)
    method = _auto_method(game) if args.method == "auto" else args.method
    start = time.perf_counter()
    if method == "continuous":
        try:
            sol = solve_game(game)
        except SolverError as exc:
            _emit({"method": method, "solutions": [], "error": str(exc), "best": exc.best, "residual": exc.residual})
            return EXIT_NO_NE
        _emit(
            {
                "method": method,
                "theta1": sol.theta1,
                "theta2": sol.theta2,
                "residual": sol.residual,
                "symmetric": sol.symmetric,
                "solver": sol.method,
                "seconds": time.perf_counter() - start,
            }
        )
        return EXIT_OK
    if method == "dgpd":
        params = dgpd_params_of(game)
        stats = SearchStats()
        if args.all:
            results = dgpd_search_all(game, stats=stats)
        else:
            found = dgpd_search(game, stats=stats)
            results = [found] if found is not None else []
        lam, mu = lambda_mu(params)
        out = {
            "method": method,
            "lambda": _num(lam),
            "mu": _num(mu),
            "candidates": [_num(c[1]) for c in stats.candidates],
            "iterations": stats.iterations,
        }
    elif method == "general":
        stats = SearchStats()
        results = general_search(game, find_all=args.all, stats=stats)
        out = {"method": method, "iterations": stats.iterations}
    else:
        raise InvalidGameError(f"unknown method {method!r}")
    out["solutions"] = [_result_json(r) for r in results]
    out["seconds"] = time.perf_counter() - start
    _emit(out)
    return EXIT_OK if results else EXIT_NO_NE


def cmd_verify(args) -> int:
    game = parse_game_file(args.file)
    strategies = (
        ThresholdStrategy(_parse_threshold(args.theta1), Orientation(args.orient1), Fraction(args.alpha1)),
        ThresholdStrategy(_parse_threshold(args.theta2), Orientation(args.orient2), Fraction(args.alpha2)),
    )
    report = verify_equilibrium(game, strategies, exact=not args.float)
    _emit(
        {
            "equilibrium": report.is_equilibrium,
            "regret": _num(report.regret),
            "per_agent": [_num(r) for r in report.per_agent],
            "worst_type": [_num(t) for t in report.worst_type],
            "worst_action": [a.value for a in report.worst_action],
        }
    )
    return EXIT_OK if report.is_equilibrium else EXIT_NO_NE


def cmd_oracle(args) -> int:
    game = parse_game_file(args.file)
    pairs = brute_force_ne(game, cap=args.cap)
    _emit({"solutions": [[_strategy_json(s) for s in pair] for pair in pairs]})
    return EXIT_OK if pairs else EXIT_NO_NE


def cmd_classify(args) -> int:
    rows = run_classification(
        _parse_seeds(args.seeds),
        configs=args.configs,
        max_size=args.max_size,
        low=args.low,
        high=args.high,
        jobs=args.jobs,
        dump_dir=args.dump_dir,
    )
    sys.stdout.write(rows_to_csv(rows, ["matrix_id", "seed", "configs", "solved", "label"]))
    counts = {}
    for r in rows:
        counts[r["label"]] = counts.get(r["label"], 0) + 1
    summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    print(f"# {summary}", file=sys.stderr)
    for r in rows:
        if r["label"] == SOLUTIONLESS and "dump" in r:
            print(f"# counterexample written to {r['dump']}", file=sys.stderr)
    return EXIT_OK


def cmd_avg_solutions(args) -> int:
    game = parse_game_file(args.matrix_file)
    rows = run_avg_solutions(game.payoffs, _parse_sizes(args.sizes), args.trials, args.seed)
    sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = run_benchmark(
        args.algo,
        _parse_sizes(args.sizes),
        seed=args.seed,
        mode=args.mode,
        n_fixed=args.n_fixed,
        trials=args.trials,
        repeats=args.repeats,
    )
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multigame-ne", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and check a game file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="find pure Bayesian equilibria")
    p.add_argument("file")
    p.add_argument("--method", choices=["auto", "dgpd", "general", "continuous"], default="auto")
    p.add_argument("--all", action="store_true", help="return every equilibrium class")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="regret of a threshold strategy pair")
    p.add_argument("file")
    p.add_argument("--theta1", required=True)
    p.add_argument("--theta2", required=True)
    p.add_argument("--orient1", choices=["DC", "CD"], default="DC")
    p.add_argument("--orient2", choices=["DC", "CD"], default="DC")
    p.add_argument("--alpha1", default="1")
    p.add_argument("--alpha2", default="1")
    p.add_argument("--float", action="store_true", help="binary64 instead of exact arithmetic")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force enumeration of pure threshold equilibria")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=10**6)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("classify", help="label random payoff matrices full / hybrid / solutionless")
    p.add_argument("--seeds", required=True, help="matrix seeds: range '0-99' or list '1,5,9'")
    p.add_argument("--configs", type=int, default=100, help="type configurations per matrix")
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--low", type=int, default=0)
    p.add_argument("--high", type=int, default=9)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dump-dir", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("avg-solutions", help="mean number of equilibria per type-space size")
    p.add_argument("--matrix-file", required=True)
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_avg_solutions)

    p = sub.add_parser("bench", help="time the discrete searches")
    p.add_argument("--algo", choices=["dgpd", "general"], required=True)
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--mode", choices=["diag", "fix-n1", "fix-n2"], default="fix-n2")
    p.add_argument("--n-fixed", type=int, default=1000)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None, help="also write the CSV here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (GameFileError, InvalidGameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
