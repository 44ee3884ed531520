"""End-to-end solving: restrict the objective to each non-empty cell,
bound it over the cell's closure, and aggregate infimum and attainment.

On every cell the objective either restricts to one linear expression or is
+inf because some term has no piece covering the cell. Cells here are
relatively open, so a finite infimum is attained on a cell exactly when the
restricted objective is constant there (equal infimum and supremum over the
closure).

`solve_naive` re-decides everything by exhaustive sign-vector enumeration
with the slack-method feasibility oracle; it shares no cell-enumeration or
transposition code with `solve` and acts as the reference implementation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arrangement import (
    build_arrangement,
    cell_system,
    closure_system,
    extract_polynomials,
)
from .errors import InternalError, InvalidInstanceError
from .feasibility import MixedSystem, feasible, feasible_oracle
from .lp import Infeasible, LpProblem, Optimal, Unbounded, solve_lp, solve_lp_max
from .model import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    Cell,
    ExtRational,
    Instance,
    LinearConstraint,
    LinearPolynomial,
    PLCostFunction,
    Point,
    Relation,
    Sign,
    SolveResult,
    Term,
)

NAIVE_MAX_POLYNOMIALS = 12


@dataclass
class SolveStats:
    """Instrumentation for one solve call."""

    dimension: int = 0
    polynomials: int = 0
    cells: int = 0
    lpf_enumeration: int = 0
    lpf_restriction: int = 0
    lp_bounds: int = 0

    @property
    def lpf_calls(self) -> int:
        return self.lpf_enumeration + self.lpf_restriction

    @property
    def lp_calls(self) -> int:
        return self.lp_bounds


@dataclass(frozen=True)
class CellObjective:
    """The objective restricted to one cell, defined only when every term is
    finite there."""

    cell: Cell
    expression: LinearPolynomial


def restrict_term_to_cell(
    term: Term,
    functions: Sequence[PLCostFunction],
    dimension: int,
    cell: Cell,
    stats: SolveStats | None = None,
) -> LinearPolynomial | None:
    """The term's value polynomial on the cell (lifted to the instance
    dimension), or None when no piece covers the cell.

    Every lifted guard polynomial has constant sign on the cell, so the cell
    is contained in a piece exactly when it intersects it; containment is
    decided by one feasibility call per live piece. Raises
    InvalidInstanceError when two pieces cover the cell with different
    values.
    """
    function = functions[term.function_index]
    base = cell_system(cell, dimension)
    found: LinearPolynomial | None = None
    for piece in function.pieces:
        extra_strict: list[LinearPolynomial] = []
        extra_weak: list[LinearPolynomial] = []
        dead = False
        for constraint in piece.guard:
            lifted = constraint.poly.lift(term.scope, dimension)
            if lifted.is_constant():
                if not constraint.rel.holds(lifted.constant):
                    dead = True
                    break
                continue
            if constraint.rel is Relation.LT:
                extra_strict.append(lifted)
            elif constraint.rel is Relation.LEQ:
                extra_weak.append(lifted)
            else:
                extra_weak.append(lifted)
                extra_weak.append(-lifted)
        if dead:
            continue
        system = MixedSystem(
            dimension, base.strict + tuple(extra_strict), base.weak + tuple(extra_weak)
        )
        if stats is not None:
            stats.lpf_restriction += 1
        if feasible(system):
            value = piece.value.lift(term.scope, dimension)
            if found is not None and value != found:
                raise InvalidInstanceError(
                    "two overlapping pieces cover a cell with different values"
                )
            found = value
    return found


def cell_objective(
    instance: Instance, cell: Cell, stats: SolveStats | None = None
) -> CellObjective | None:
    """Sum of all term restrictions on the cell, or None if any term is +inf
    there (the cell contributes nothing to the infimum)."""
    total = LinearPolynomial.zero(instance.dimension)
    for term in instance.terms:
        restricted = restrict_term_to_cell(
            term, instance.functions, instance.dimension, cell, stats
        )
        if restricted is None:
            return None
        total = total + restricted
    return CellObjective(cell, total)


def cell_bounds(
    cell: Cell, objective: LinearPolynomial, stats: SolveStats | None = None
) -> tuple[ExtRational, ExtRational]:
    """(infimum, supremum) of the objective over the cell, computed over its
    closure; equal by density. Unbounded maps to -inf / +inf."""
    problem = LpProblem(objective.dimension, closure_system(cell), objective)
    if stats is not None:
        stats.lp_bounds += 2
    low = solve_lp(problem)
    high = solve_lp_max(problem)
    if isinstance(low, Infeasible) or isinstance(high, Infeasible):
        raise InternalError("closure of a non-empty cell cannot be infeasible")
    low_value = MINUS_INFINITY if isinstance(low, Unbounded) else ExtRational.finite(low.value)
    high_value = PLUS_INFINITY if isinstance(high, Unbounded) else ExtRational.finite(high.value)
    return low_value, high_value


@dataclass
class _Aggregate:
    best: ExtRational = field(default_factory=lambda: PLUS_INFINITY)
    attained: bool = False
    witness: Point | None = None

    def update(self, low: ExtRational, high: ExtRational, witness: Point | None) -> None:
        if low < self.best:
            self.best = low
            self.attained = low == high
            self.witness = witness if self.attained else None
        elif low == self.best and low == high and not self.attained:
            self.attained = True
            self.witness = witness


def solve_detailed(instance: Instance) -> tuple[SolveResult, Point | None, SolveStats]:
    """Full cell-decomposition solve; returns the result, an exact point
    attaining the value when it is attained, and call-count statistics."""
    stats = SolveStats(dimension=instance.dimension)
    arrangement, enumeration = build_arrangement(instance)
    stats.polynomials = len(arrangement.polys)
    stats.cells = len(arrangement.cells)
    stats.lpf_enumeration = enumeration.feasibility_calls

    aggregate = _Aggregate()
    for cell, interior in zip(arrangement.cells, enumeration.witnesses):
        restricted = cell_objective(instance, cell, stats)
        if restricted is None:
            continue
        low, high = cell_bounds(cell, restricted.expression, stats)
        aggregate.update(low, high, interior)
    result = SolveResult(aggregate.best, aggregate.attained)
    if result.attained:
        witness = aggregate.witness
        if witness is None or instance.evaluate(witness) != result.value:
            raise InternalError("winning-cell witness does not re-evaluate to the optimum")
        return result, witness, stats
    return result, None, stats


def solve(instance: Instance) -> SolveResult:
    """Exact infimum of the instance objective over Q^d and whether some
    assignment attains it."""
    return solve_detailed(instance)[0]


def solve_with_witness(instance: Instance) -> tuple[SolveResult, Point | None]:
    """As solve; adds an exact optimal assignment when the value is attained."""
    result, witness, _ = solve_detailed(instance)
    return result, witness


def _sign_satisfies(actual: Sign, rel: Relation) -> bool:
    if rel is Relation.LT:
        return actual is Sign.NEG
    if rel is Relation.LEQ:
        return actual is not Sign.POS
    return actual is Sign.ZERO


def solve_naive(instance: Instance) -> SolveResult:
    """Reference solver: enumerate all 3^k full sign vectors, keep those the
    slack-method oracle accepts, restrict each term by direct sign lookup,
    and bound with the same exact LP. Intentionally avoids the incremental
    enumeration and the transposition reduction used by `solve`."""
    polys = extract_polynomials(instance)
    if len(polys) > NAIVE_MAX_POLYNOMIALS:
        raise ValueError(
            f"naive enumeration supports at most {NAIVE_MAX_POLYNOMIALS} polynomials"
        )
    dimension = instance.dimension
    index_of = {poly: i for i, poly in enumerate(polys)}

    # Per term, per live piece: sign-lookup entries plus the lifted value.
    tables = []
    for term in instance.terms:
        function = instance.functions[term.function_index]
        pieces = []
        for piece in function.pieces:
            entries: list[tuple[int, int, Relation]] = []
            dead = False
            for constraint in piece.guard:
                lifted = constraint.poly.lift(term.scope, dimension)
                if lifted.is_constant():
                    if not constraint.rel.holds(lifted.constant):
                        dead = True
                        break
                    continue
                canonical, orientation = lifted.canonicalize()
                entries.append((index_of[canonical], orientation, constraint.rel))
            if not dead:
                pieces.append((entries, piece.value.lift(term.scope, dimension)))
        tables.append(pieces)

    best: ExtRational = PLUS_INFINITY
    attained = False
    for signs in itertools.product((Sign.NEG, Sign.ZERO, Sign.POS), repeat=len(polys)):
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
        if not feasible_oracle(MixedSystem(dimension, tuple(strict), tuple(weak))):
            continue

        objective = LinearPolynomial.zero(dimension)
        covered = True
        for pieces in tables:
            value: LinearPolynomial | None = None
            for entries, expression in pieces:
                hit = True
                for index, orientation, rel in entries:
                    actual = signs[index] if orientation > 0 else signs[index].flipped
                    if not _sign_satisfies(actual, rel):
                        hit = False
                        break
                if hit:
                    if value is not None and expression != value:
                        raise InvalidInstanceError(
                            "two overlapping pieces cover a cell with different values"
                        )
                    value = expression
            if value is None:
                covered = False
                break
            objective = objective + value
        if not covered:
            continue

        constraints = []
        for poly, sign in zip(polys, signs):
            if sign is Sign.NEG:
                constraints.append(LinearConstraint(poly, Relation.LEQ))
            elif sign is Sign.POS:
                constraints.append(LinearConstraint(-poly, Relation.LEQ))
            else:
                constraints.append(LinearConstraint(poly, Relation.EQ))
        problem = LpProblem(dimension, tuple(constraints), objective)
        low_outcome = solve_lp(problem)
        high_outcome = solve_lp_max(problem)
        if isinstance(low_outcome, Infeasible) or isinstance(high_outcome, Infeasible):
            raise InternalError("oracle-accepted sign vector has infeasible closure")
        low = (
            MINUS_INFINITY
            if isinstance(low_outcome, Unbounded)
            else ExtRational.finite(low_outcome.value)
        )
        high = (
            PLUS_INFINITY
            if isinstance(high_outcome, Unbounded)
            else ExtRational.finite(high_outcome.value)
        )
        if low < best:
            best = low
            attained = low == high
        elif low == best and low == high:
            attained = True
    return SolveResult(best, attained)
