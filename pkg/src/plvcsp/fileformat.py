"""Instance documents: a JSON text format mirroring the Instance model.

Rationals are decimal strings "p" or "p/q" (or plain JSON integers); floats
are rejected so exactness survives the round trip. Polynomials are listed
constant-first: [a_0, a_1, ..., a_r]. A piece whose value is the token
"+inf" is accepted and discarded (points outside all stored pieces are
+inf anyway), and guard constraints with constant polynomials are resolved
during parsing: a violated one kills its piece, a satisfied one is dropped.

Syntax problems raise ParseError; structurally valid documents with bad
values (zero denominators, out-of-range indices, wrong lengths) raise
ValidationError. The CLI maps these to exit codes 1 and 2.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .errors import ParseError, ValidationError
from .feasibility import feasible, system_from_constraints
from .model import (
    Instance,
    LinearConstraint,
    LinearPolynomial,
    PLCostFunction,
    Piece,
    Relation,
    Term,
)

INFINITY_TOKEN = "+inf"

_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?\Z")
_RELATIONS = {rel.symbol: rel for rel in Relation}


def parse_rational(token: Any) -> Fraction:
    """A rational literal: an optionally signed integer or "p/q"."""
    if isinstance(token, bool):
        raise ParseError(f"expected a rational literal, got {token!r}")
    if isinstance(token, int):
        return Fraction(token)
    if not isinstance(token, str) or not _RATIONAL_RE.match(token):
        raise ParseError(f"malformed rational literal {token!r}")
    if "/" in token:
        numerator, denominator = token.split("/")
        if int(denominator) == 0:
            raise ValidationError(f"zero denominator in rational literal {token!r}")
        return Fraction(int(numerator), int(denominator))
    return Fraction(int(token))


def format_rational(value: Fraction) -> str:
    return str(value)


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _parse_poly(data: Any, arity: int, where: str) -> LinearPolynomial:
    _expect(isinstance(data, list), f"{where}: polynomial must be a list of rationals")
    values = [parse_rational(v) for v in data]
    if len(values) != arity + 1:
        raise ValidationError(
            f"{where}: polynomial needs {arity + 1} entries (constant first), got {len(values)}"
        )
    return LinearPolynomial(values[0], tuple(values[1:]))


def _parse_piece(data: Any, arity: int, where: str) -> Piece | None:
    _expect(isinstance(data, dict), f"{where}: piece must be an object")
    unknown = set(data) - {"constraints", "value"}
    _expect(not unknown, f"{where}: unknown piece fields {sorted(unknown)}")
    _expect("value" in data, f"{where}: piece needs a value")
    raw_constraints = data.get("constraints", [])
    _expect(isinstance(raw_constraints, list), f"{where}: constraints must be a list")

    value = data["value"]
    if value == INFINITY_TOKEN:
        return None  # implicit outside all pieces; not stored

    guard: list[LinearConstraint] = []
    for c_index, raw in enumerate(raw_constraints):
        label = f"{where}, constraint {c_index}"
        _expect(isinstance(raw, dict), f"{label}: constraint must be an object")
        _expect(
            set(raw) == {"poly", "rel"}, f"{label}: constraint needs exactly poly and rel"
        )
        rel = _RELATIONS.get(raw["rel"]) if isinstance(raw["rel"], str) else None
        _expect(rel is not None, f"{label}: relation must be one of <=, <, =")
        poly = _parse_poly(raw["poly"], arity, label)
        if poly.is_constant():
            if not rel.holds(poly.constant):
                return None  # dead piece: constant guard can never hold
            continue
        guard.append(LinearConstraint(poly, rel))
    return Piece(tuple(guard), _parse_poly(value, arity, f"{where}, value"))


def parse(text: str) -> Instance:
    """Parse and validate an instance document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    _expect(isinstance(data, dict), "document must be a JSON object")
    unknown = set(data) - {"dimension", "functions", "terms"}
    _expect(not unknown, f"unknown document fields {sorted(unknown)}")
    _expect(
        all(key in data for key in ("dimension", "functions", "terms")),
        "document needs dimension, functions, and terms",
    )
    dimension = data["dimension"]
    _expect(isinstance(dimension, int) and not isinstance(dimension, bool),
            "dimension must be an integer")
    _expect(isinstance(data["functions"], list), "functions must be a list")
    _expect(isinstance(data["terms"], list), "terms must be a list")

    functions = []
    for f_index, raw in enumerate(data["functions"]):
        where = f"function {f_index}"
        _expect(isinstance(raw, dict), f"{where}: function must be an object")
        unknown = set(raw) - {"arity", "pieces"}
        _expect(not unknown, f"{where}: unknown function fields {sorted(unknown)}")
        arity = raw.get("arity")
        _expect(isinstance(arity, int) and not isinstance(arity, bool),
                f"{where}: arity must be an integer")
        if arity < 1:
            raise ValidationError(f"{where}: arity must be at least 1")
        raw_pieces = raw.get("pieces", [])
        _expect(isinstance(raw_pieces, list), f"{where}: pieces must be a list")
        pieces = []
        for p_index, raw_piece in enumerate(raw_pieces):
            piece = _parse_piece(raw_piece, arity, f"{where}, piece {p_index}")
            if piece is not None:
                pieces.append(piece)
        functions.append(PLCostFunction(arity, tuple(pieces)))

    terms = []
    for t_index, raw in enumerate(data["terms"]):
        where = f"term {t_index}"
        _expect(isinstance(raw, dict), f"{where}: term must be an object")
        _expect(set(raw) == {"function", "scope"}, f"{where}: term needs function and scope")
        _expect(isinstance(raw["function"], int) and not isinstance(raw["function"], bool),
                f"{where}: function must be an integer index")
        _expect(
            isinstance(raw["scope"], list)
            and all(isinstance(i, int) and not isinstance(i, bool) for i in raw["scope"]),
            f"{where}: scope must be a list of integer variable indices",
        )
        terms.append(Term(raw["function"], tuple(raw["scope"])))

    if dimension < 1:
        raise ValidationError("dimension must be at least 1")
    return Instance(dimension, tuple(functions), tuple(terms))


def parse_file(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read())


def render(instance: Instance) -> str:
    """Serialize an instance; parse(render(instance)) == instance."""
    document = {
        "dimension": instance.dimension,
        "functions": [
            {
                "arity": function.arity,
                "pieces": [
                    {
                        "constraints": [
                            {
                                "poly": [format_rational(c.poly.constant)]
                                + [format_rational(v) for v in c.poly.coefficients],
                                "rel": c.rel.symbol,
                            }
                            for c in piece.guard
                        ],
                        "value": [format_rational(piece.value.constant)]
                        + [format_rational(v) for v in piece.value.coefficients],
                    }
                    for piece in function.pieces
                ],
            }
            for function in instance.functions
        ],
        "terms": [
            {"function": term.function_index, "scope": list(term.scope)}
            for term in instance.terms
        ],
    }
    return json.dumps(document, indent=2)


def validate_disjointness(instance: Instance) -> list[tuple[int, int, int]]:
    """All (function, piece, piece) pairs whose guards overlap, checked by
    strict feasibility of the joint guard in the function's own arity.
    Quadratic in pieces; empty result means the instance satisfies the
    mutual-disjointness requirement."""
    violations = []
    for f_index, function in enumerate(instance.functions):
        for i in range(len(function.pieces)):
            for j in range(i + 1, len(function.pieces)):
                joint = function.pieces[i].guard + function.pieces[j].guard
                system = system_from_constraints(function.arity, joint)
                if system is not None and feasible(system):
                    violations.append((f_index, i, j))
    return violations
