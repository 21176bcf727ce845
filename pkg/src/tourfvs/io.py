"""Text serialization of weighted tournaments and solver results.

Tournament file::

    n
    w_0 w_1 ... w_{n-1}          reduced rationals, "p" or "p/q"
    row_0                         n characters over {0,1,-}
    ...
    row_{n-1}

Row u, column v is '1' iff u->v, '0' iff v->u, '-' on the diagonal.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .core import Tournament, as_weights, total_weight

_NAT = re.compile(r"0|[1-9][0-9]*")
_RATIONAL = re.compile(r"(-?)(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?")


class ParseError(ValueError):
    """Malformed input; ``line`` and ``column`` are 1-based."""

    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(token: str, line: int = 1, column: int = 1) -> Fraction:
    m = _RATIONAL.fullmatch(token)
    if not m:
        raise ParseError(line, column, f"malformed rational {token!r}")
    sign, num, den = m.groups()
    if sign and num != "0":
        raise ParseError(line, column, f"negative weight {token}")
    if sign:
        raise ParseError(line, column, f"malformed rational {token!r} (signed zero)")
    if den is not None and (den == "1" or gcd(int(num), int(den)) != 1):
        raise ParseError(line, column, f"rational {token} is not in lowest terms")
    return Fraction(int(num), int(den) if den else 1)


def parse_tournament(text: str) -> tuple[Tournament, tuple[Fraction, ...]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, 1, "empty input")
    if not _NAT.fullmatch(lines[0]):
        raise ParseError(1, 1, f"expected a vertex count, got {lines[0]!r}")
    n = int(lines[0])
    if len(lines) < 2:
        raise ParseError(2, 1, "missing weight line")

    weights = []
    if n or lines[1]:
        col = 1
        for token in lines[1].split(" "):
            if token == "":
                raise ParseError(2, col, "weights must be separated by single spaces")
            weights.append(parse_rational(token, 2, col))
            col += len(token) + 1
    if len(weights) != n:
        raise ParseError(2, 1, f"expected {n} weights, got {len(weights)}")

    if len(lines) < n + 2:
        raise ParseError(len(lines) + 1, 1, f"expected {n} adjacency rows, got {len(lines) - 2}")
    if len(lines) > n + 2:
        raise ParseError(n + 3, 1, "unexpected line after the adjacency rows")
    rows = lines[2:]
    for u, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(u + 3, min(len(row), n) + 1, f"row has {len(row)} characters, expected {n}")
        for v, ch in enumerate(row):
            if u == v and ch != "-":
                raise ParseError(u + 3, v + 1, f"diagonal entry must be '-', got {ch!r}")
            if u != v and ch not in "01":
                raise ParseError(u + 3, v + 1, f"unexpected character {ch!r}")
    for u in range(n):
        for v in range(u + 1, n):
            if rows[u][v] == rows[v][u]:
                raise ParseError(v + 3, u + 1, f"entries ({u},{v}) and ({v},{u}) are not antisymmetric")
    masks = [sum(1 << v for v, ch in enumerate(row) if ch == "1") for row in rows]
    return Tournament(masks), tuple(weights)


def write_tournament(t: Tournament, w=None) -> str:
    w = as_weights(w, t.n)
    out = [str(t.n), " ".join(format_rational(x) for x in w)]
    for u in range(t.n):
        out.append("".join("-" if u == v else "1" if t.arc(u, v) else "0" for v in range(t.n)))
    return "\n".join(out) + "\n"


def tournament_to_json(t: Tournament, w=None) -> str:
    """Structured alternative carrying the same fields as the text format."""
    w = as_weights(w, t.n)
    text = write_tournament(t, w).split("\n")
    return json.dumps({"n": t.n, "weights": [format_rational(x) for x in w], "rows": text[2:2 + t.n]})


def tournament_from_json(text: str) -> tuple[Tournament, tuple[Fraction, ...]]:
    doc = json.loads(text)
    lines = [str(doc["n"]), " ".join(doc["weights"]), *doc["rows"]]
    return parse_tournament("\n".join(lines) + "\n")


def read_tournament_file(path) -> tuple[Tournament, tuple[Fraction, ...]]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return tournament_from_json(text)
    return parse_tournament(text)


# -- result documents ---------------------------------------------------------

def result_document(result, t: Tournament, w: Sequence[Fraction],
                    oracle_optimum: Optional[Fraction] = None) -> dict:
    """Machine-readable summary of an ``FvsResult``.  Rationals are strings."""
    doc = {
        "algorithm": result.algorithm,
        "n": t.n,
        "fvs": list(result.fvs),
        "weight": format_rational(result.weight),
        "total_weight": format_rational(total_weight(w, range(t.n))),
        "stage_tags": {str(v): tag for v, tag in sorted(result.stage_tags.items())},
        "lp_trace": [
            {
                "iteration": s.iteration,
                "lp_value": format_rational(s.lp_value),
                "rounded": list(s.rounded),
                "pruned": list(s.pruned),
                "residual_value": format_rational(s.residual_value),
                "fvs_weight": format_rational(s.fvs_weight),
            }
            for s in result.trace
        ],
        "stalls": result.stalls,
    }
    if result.lp_value is not None:
        doc["lp_value"] = format_rational(result.lp_value)
    if oracle_optimum is not None:
        doc["oracle_optimum"] = format_rational(oracle_optimum)
        doc["ratio"] = format_rational(ratio(result.weight, oracle_optimum))
    return doc


def ratio(weight: Fraction, optimum: Fraction) -> Fraction:
    """weight / optimum, with 0/0 read as 1; a positive weight against a zero
    optimum is an error."""
    if optimum == 0:
        if weight != 0:
            raise ValueError(f"weight {weight} on an instance with optimum 0")
        return Fraction(1)
    return Fraction(weight) / optimum


def check_result_document(doc: dict, w: Sequence[Fraction]) -> bool:
    return parse_rational(doc["weight"]) == total_weight(w, doc["fvs"])


def format_document(doc: dict, fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    for key, value in doc.items():
        if key == "lp_trace":
            for step in value:
                lines.append("lp_trace: " + " ".join(
                    f"{k}={','.join(map(str, v)) if isinstance(v, list) else v}" for k, v in step.items()))
        elif key == "stage_tags":
            lines.append("stage_tags: " + " ".join(f"{v}:{tag}" for v, tag in value.items()))
        elif isinstance(value, list):
            lines.append(f"{key}: " + " ".join(map(str, value)))
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"
