"""JSON game files.

Layout::

    {
      "agents": 2,
      "local_games": [                       # one entry per local game
        [ {"C": {"C": 5, "D": 0}, "D": {"C": 9, "D": 2}},   # agent 1, own -> opp
          {"C": {"C": 5, "D": 0}, "D": {"C": 9, "D": 2}} ], # agent 2
        ...
      ],
      "type_spaces": [
        {"kind": "discrete", "points": ["1/5", "1/2"], "probs": ["3/10", "7/10"]},
        {"kind": "uniform"}
      ],
      "dgpd": {"t": 9, "r": 5, "y": 4, "p": 2, "s": 0}    # optional
    }

Numbers may be JSON integers or ``"num/den"`` strings; JSON floats are
accepted and read through their decimal text.  Serialization writes integers
as integers and every other rational as ``"num/den"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .model import (
    ACTIONS,
    DGPDParams,
    DiscreteTypeSpace,
    InvalidGameError,
    LocalGamePayoff,
    Multigame,
    TabulatedCDFTypeSpace,
    UniformTypeSpace,
)


class GameFileError(ValueError):
    """Malformed game file; the message starts with the offending field path."""

    def __init__(self, field: str, message: str, line: int | None = None):
        where = f"{field}" + (f" (line {line})" if line is not None else "")
        super().__init__(f"{where}: {message}")
        self.field = field
        self.line = line


def _number(value, field: str) -> Fraction:
    if isinstance(value, bool):
        raise GameFileError(field, f"expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise GameFileError(field, f"malformed rational {value!r}") from None
    raise GameFileError(field, f"expected a number or 'num/den' string, got {type(value).__name__}")


def _simplify(x: Fraction):
    return int(x) if x.denominator == 1 else x


def _table(obj, field: str) -> LocalGamePayoff:
    if not isinstance(obj, dict):
        raise GameFileError(field, "payoff table must be an object keyed by own action")
    entries = {}
    for own in ACTIONS:
        row = obj.get(own.value)
        if not isinstance(row, dict):
            raise GameFileError(f"{field}.{own.value}", "missing row")
        for opp in ACTIONS:
            if opp.value not in row:
                raise GameFileError(f"{field}.{own.value}.{opp.value}", "missing entry")
            entries[own, opp] = _simplify(_number(row[opp.value], f"{field}.{own.value}.{opp.value}"))
        extra = set(row) - {"C", "D"}
        if extra:
            raise GameFileError(f"{field}.{own.value}", f"unknown actions {sorted(extra)}")
    extra = set(obj) - {"C", "D"}
    if extra:
        raise GameFileError(field, f"unknown actions {sorted(extra)}")
    return LocalGamePayoff.from_mapping(entries)


def _type_space(obj, field: str):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise GameFileError(field, "type space needs a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "uniform":
            return UniformTypeSpace()
        if kind == "discrete":
            pts = [_number(v, f"{field}.points[{i}]") for i, v in enumerate(obj.get("points", []))]
            prs = [_number(v, f"{field}.probs[{i}]") for i, v in enumerate(obj.get("probs", []))]
            return DiscreteTypeSpace(pts, prs)
        if kind == "cdf":
            ks = [_number(v, f"{field}.knots[{i}]") for i, v in enumerate(obj.get("knots", []))]
            vs = [_number(v, f"{field}.values[{i}]") for i, v in enumerate(obj.get("values", []))]
            return TabulatedCDFTypeSpace(ks, vs)
    except InvalidGameError as exc:
        raise GameFileError(field, str(exc)) from None
    raise GameFileError(f"{field}.kind", f"unknown kind {kind!r}")


def game_from_dict(doc) -> Multigame:
    if not isinstance(doc, dict):
        raise GameFileError("$", "top level must be an object")
    agents = doc.get("agents", 2)
    if agents != 2:
        raise GameFileError("agents", f"only 2 agents are supported, got {agents!r}")
    local = doc.get("local_games")
    if not isinstance(local, list) or not local:
        raise GameFileError("local_games", "expected a nonempty list")
    per_game = []
    for j, game in enumerate(local):
        if not isinstance(game, list) or len(game) != 2:
            raise GameFileError(f"local_games[{j}]", "expected one table per agent (2)")
        per_game.append([_table(game[i], f"local_games[{j}][{i}]") for i in range(2)])
    payoffs = tuple(tuple(per_game[j][i] for j in range(len(per_game))) for i in range(2))
    spaces = doc.get("type_spaces")
    if not isinstance(spaces, list) or len(spaces) != 2:
        raise GameFileError("type_spaces", "expected one type space per agent (2)")
    type_spaces = []
    for i, s in enumerate(spaces):
        try:
            type_spaces.append(_type_space(s, f"type_spaces[{i}]"))
        except GameFileError as exc:
            raise GameFileError(exc.field, f"agent {i + 1}: {str(exc).split(': ', 1)[1]}") from None
    dgpd = None
    if doc.get("dgpd") is not None:
        block = doc["dgpd"]
        if not isinstance(block, dict):
            raise GameFileError("dgpd", "expected an object with t, r, y, p, s")
        missing = [k for k in "tryps" if k not in block]
        if missing:
            raise GameFileError("dgpd", f"missing keys {missing}")
        dgpd = DGPDParams(*(_simplify(_number(block[k], f"dgpd.{k}")) for k in "tryps"))
    try:
        return Multigame(payoffs, type_spaces, dgpd)
    except InvalidGameError as exc:
        raise GameFileError("dgpd" if dgpd is not None else "$", str(exc)) from None


def loads(text: str) -> Multigame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError("$", exc.msg, line=exc.lineno) from None
    return game_from_dict(doc)


def parse_game_file(path) -> Multigame:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GameFileError(str(path), f"cannot read file ({exc.strerror})") from None
    return loads(text)


def _encode(x):
    x = Fraction(x) if not isinstance(x, float) else Fraction(repr(x))
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _encode_table(t: LocalGamePayoff) -> dict:
    return {own.value: {opp.value: _encode(t(own, opp)) for opp in ACTIONS} for own in ACTIONS}


def _encode_space(space) -> dict:
    if isinstance(space, UniformTypeSpace):
        return {"kind": "uniform"}
    if isinstance(space, DiscreteTypeSpace):
        return {
            "kind": "discrete",
            "points": [_encode(p) for p in space.points],
            "probs": [_encode(p) for p in space.probs],
        }
    if isinstance(space, TabulatedCDFTypeSpace):
        return {"kind": "cdf", "knots": [_encode(k) for k in space.knots], "values": [_encode(v) for v in space.values]}
    raise TypeError(f"cannot serialize {type(space).__name__}")


def game_to_dict(game: Multigame) -> dict:
    doc = {
        "agents": 2,
        "local_games": [[_encode_table(game.payoffs[i][j]) for i in range(2)] for j in range(game.m_games)],
        "type_spaces": [_encode_space(s) for s in game.type_spaces],
    }
    if game.dgpd is not None:
        doc["dgpd"] = {k: _encode(v) for k, v in zip("tryps", game.dgpd.as_tuple())}
    return doc


def dumps(game: Multigame) -> str:
    return json.dumps(game_to_dict(game), indent=2) + "\n"


def write_game_file(game: Multigame, path) -> None:
    Path(path).write_text(dumps(game), encoding="utf-8")
