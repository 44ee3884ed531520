"""Hyperplane arrangements induced by an instance's guard polynomials.

Extracts the canonical, deduplicated polynomial list, enumerates the
non-empty sign-vector cells by incremental strict-feasibility testing
(depth-first, branch order Neg/Zero/Pos), and provides the exact
cell-count bound together with the closure of a cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .feasibility import MixedSystem, feasible_with_evidence
from .model import (
    Cell,
    Instance,
    LinearConstraint,
    LinearPolynomial,
    Point,
    Relation,
    Sign,
)

_SIGN_ORDER = (Sign.NEG, Sign.ZERO, Sign.POS)


def cell_count_bound(dimension: int, count: int) -> int:
    """Maximal number of cells `count` hyperplanes create in `dimension`
    variables: sum over i <= dimension of 2^i * C(count, i). Tight for
    hyperplanes in general position."""
    return sum(2**i * math.comb(count, i) for i in range(dimension + 1))


def extract_polynomials(instance: Instance) -> tuple[LinearPolynomial, ...]:
    """Every guard polynomial of every term, lifted to the instance
    dimension through the term's scope, canonicalized and deduplicated in
    first-occurrence order. Polynomials that lift to constants are excluded;
    their sign is decided during restriction instead."""
    seen: set[LinearPolynomial] = set()
    ordered: list[LinearPolynomial] = []
    for term in instance.terms:
        function = instance.functions[term.function_index]
        for piece in function.pieces:
            for constraint in piece.guard:
                lifted = constraint.poly.lift(term.scope, instance.dimension)
                if lifted.is_constant():
                    continue
                canonical, _ = lifted.canonicalize()
                if canonical not in seen:
                    seen.add(canonical)
                    ordered.append(canonical)
    return tuple(ordered)


def _partial_system(
    dimension: int, polys: Sequence[LinearPolynomial], signs: Sequence[Sign]
) -> MixedSystem:
    strict: list[LinearPolynomial] = []
    weak: list[LinearPolynomial] = []
    for poly, sign in zip(polys, signs):
        if sign is Sign.NEG:
            strict.append(poly)
        elif sign is Sign.POS:
            strict.append(-poly)
        else:
            weak.append(poly)
            weak.append(-poly)
    return MixedSystem(dimension, tuple(strict), tuple(weak))


def cell_system(cell: Cell, dimension: int | None = None) -> MixedSystem:
    """The mixed strict/weak system whose solution set is exactly the cell.

    `dimension` is only needed for cells over an empty polynomial list,
    where the ambient dimension cannot be inferred.
    """
    if dimension is None:
        if not cell.polys:
            raise ValueError("ambient dimension is required for the empty arrangement")
        dimension = cell.polys[0].dimension
    return _partial_system(dimension, cell.polys, cell.signs)


def closure_system(cell: Cell) -> tuple[LinearConstraint, ...]:
    """Each strict sign weakened: Neg -> p <= 0, Pos -> -p <= 0, Zero ->
    p = 0. For a non-empty cell this is its topological closure."""
    constraints = []
    for poly, sign in zip(cell.polys, cell.signs):
        if sign is Sign.NEG:
            constraints.append(LinearConstraint(poly, Relation.LEQ))
        elif sign is Sign.POS:
            constraints.append(LinearConstraint(-poly, Relation.LEQ))
        else:
            constraints.append(LinearConstraint(poly, Relation.EQ))
    return tuple(constraints)


@dataclass(frozen=True)
class EnumerationResult:
    cells: tuple[Cell, ...]
    witnesses: tuple[Point, ...]
    feasibility_calls: int


def enumerate_cells_with_witnesses(
    dimension: int, polys: Iterable[LinearPolynomial]
) -> EnumerationResult:
    """All non-empty cells of the arrangement, each with an interior point.

    Cells are extended one polynomial at a time; the branch whose sign the
    current witness already realizes is kept without a feasibility call, the
    other two branches are decided by the transposition reduction (which
    also yields the new branch's witness). Output order is depth-first with
    branch order Neg, Zero, Pos.
    """
    poly_list = tuple(polys)
    cells: list[Cell] = []
    witnesses: list[Point] = []
    calls = 0
    signs: list[Sign] = []

    def descend(index: int, witness: Point) -> None:
        nonlocal calls
        if index == len(poly_list):
            cells.append(Cell(poly_list, tuple(signs)))
            witnesses.append(witness)
            return
        realized = Sign.of(poly_list[index].evaluate(witness))
        for sign in _SIGN_ORDER:
            if sign is realized:
                signs.append(sign)
                descend(index + 1, witness)
                signs.pop()
            else:
                signs.append(sign)
                calls += 1
                ok, point, _ = feasible_with_evidence(
                    _partial_system(dimension, poly_list, signs)
                )
                if ok:
                    assert point is not None
                    descend(index + 1, point)
                signs.pop()

    descend(0, (Fraction(0),) * dimension)
    return EnumerationResult(tuple(cells), tuple(witnesses), calls)


def enumerate_cells(
    dimension: int, polys: Iterable[LinearPolynomial]
) -> tuple[Cell, ...]:
    """The non-empty cells of the arrangement, in deterministic DFS order."""
    return enumerate_cells_with_witnesses(dimension, polys).cells


@dataclass(frozen=True)
class Arrangement:
    """Canonical polynomial list plus all certified non-empty cells."""

    dimension: int
    polys: tuple[LinearPolynomial, ...]
    cells: tuple[Cell, ...]


def build_arrangement(instance: Instance) -> tuple[Arrangement, EnumerationResult]:
    polys = extract_polynomials(instance)
    enumeration = enumerate_cells_with_witnesses(instance.dimension, polys)
    return Arrangement(instance.dimension, polys, enumeration.cells), enumeration
