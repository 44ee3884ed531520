"""Feasibility of mixed strict/weak linear systems over the rationals.

A system {p_j(x) < 0} u {q_j(x) <= 0} is decided by one exact LP: homogenize
with an extra coordinate t (adding the row -t < 0), then minimize -sum(y)
over the transposed nonnegative system A^T y + B^T z = 0. By the
transposition theorem the original system is satisfiable exactly when that
LP cannot escape y = 0, i.e. when its optimum is 0 rather than unbounded.

Both answers come with exact evidence: a satisfying point recovered from
the LP's dual multipliers, or a nonnegative certificate (y, z) with y != 0
proving infeasibility. `feasible_oracle` decides the same predicate by an
independent slack LP and shares nothing with the reduction above.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InternalError
from .lp import Infeasible, LpProblem, Optimal, Unbounded, solve_lp_max, solve_lp_nonneg
from .model import LinearConstraint, LinearPolynomial, Point, Relation


@dataclass(frozen=True)
class MixedSystem:
    """Conjunction of strict rows p(x) < 0 and weak rows p(x) <= 0.

    Equality constraints must be pre-split into two weak rows.
    """

    dimension: int
    strict: tuple[LinearPolynomial, ...]
    weak: tuple[LinearPolynomial, ...]

    def __post_init__(self) -> None:
        for poly in self.strict + self.weak:
            if poly.dimension != self.dimension:
                raise ValueError("system row dimension differs from ambient dimension")

    def satisfied_at(self, point: Sequence[Fraction]) -> bool:
        return all(p.evaluate(point) < 0 for p in self.strict) and all(
            p.evaluate(point) <= 0 for p in self.weak
        )


@dataclass(frozen=True)
class MotzkinDual:
    """Homogenized matrices of the system: strict_matrix has one row per
    strict constraint plus the final row (0,...,0,-1); each row lists the
    d coefficients followed by the constant term."""

    strict_matrix: tuple[tuple[Fraction, ...], ...]
    weak_matrix: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Nonnegative multipliers with strict_multipliers != 0 and
    strict_matrix^T * strict + weak_matrix^T * weak = 0."""

    strict_multipliers: tuple[Fraction, ...]
    weak_multipliers: tuple[Fraction, ...]


def homogenize(system: MixedSystem) -> MotzkinDual:
    """Matrices of the homogenized system: x_i = t_i / t_{d+1} with the
    forced strict row -t_{d+1} < 0 appended."""
    strict_rows = [p.coefficients + (p.constant,) for p in system.strict]
    strict_rows.append((Fraction(0),) * system.dimension + (Fraction(-1),))
    weak_rows = [p.coefficients + (p.constant,) for p in system.weak]
    return MotzkinDual(tuple(strict_rows), tuple(weak_rows))


def _transposed_program(dual: MotzkinDual, dimension: int) -> LpProblem:
    strict_count = len(dual.strict_matrix)
    weak_count = len(dual.weak_matrix)
    total = strict_count + weak_count
    constraints = []
    for t in range(dimension + 1):
        coeffs = tuple(row[t] for row in dual.strict_matrix) + tuple(
            row[t] for row in dual.weak_matrix
        )
        constraints.append(
            LinearConstraint(LinearPolynomial(Fraction(0), coeffs), Relation.EQ)
        )
    objective = LinearPolynomial(
        Fraction(0), (Fraction(-1),) * strict_count + (Fraction(0),) * weak_count
    )
    return LpProblem(total, tuple(constraints), objective)


def feasible_with_evidence(
    system: MixedSystem,
) -> tuple[bool, Point | None, InfeasibilityCertificate | None]:
    """Decide the system; on yes also return a satisfying point, on no a
    transposition certificate. One LP either way."""
    dual = homogenize(system)
    program = _transposed_program(dual, system.dimension)
    outcome = solve_lp_nonneg(program)
    strict_count = len(dual.strict_matrix)

    if isinstance(outcome, Optimal):
        # y = z = 0 is the only solution, so the strict system is satisfiable;
        # the row duals give a point of the homogenized system with margin 1.
        if outcome.value != 0:
            raise InternalError("transposed program has a nonzero finite optimum")
        homogeneous = [-m for m in outcome.dual]
        last = homogeneous[system.dimension]
        if last <= 0:
            raise InternalError("homogenizing coordinate of recovered point is not positive")
        point = tuple(c / last for c in homogeneous[: system.dimension])
        if not system.satisfied_at(point):
            raise InternalError("recovered point violates the system")
        return True, point, None

    if isinstance(outcome, Unbounded):
        ray = outcome.ray
        certificate = InfeasibilityCertificate(
            tuple(ray[:strict_count]), tuple(ray[strict_count:])
        )
        _check_certificate(dual, certificate)
        return False, None, certificate

    raise InternalError("transposed program cannot be infeasible: zero is feasible")


def _check_certificate(dual: MotzkinDual, certificate: InfeasibilityCertificate) -> None:
    y = certificate.strict_multipliers
    z = certificate.weak_multipliers
    if any(v < 0 for v in y) or any(v < 0 for v in z):
        raise InternalError("certificate multipliers must be nonnegative")
    if all(v == 0 for v in y):
        raise InternalError("certificate requires a nonzero strict multiplier")
    width = len(dual.strict_matrix[0])
    for t in range(width):
        total = sum(m * row[t] for m, row in zip(y, dual.strict_matrix)) + sum(
            m * row[t] for m, row in zip(z, dual.weak_matrix)
        )
        if total != 0:
            raise InternalError("certificate combination does not vanish")


def feasible(system: MixedSystem) -> bool:
    """True iff some rational point satisfies every strict and weak row."""
    return feasible_with_evidence(system)[0]


def strict_witness(system: MixedSystem) -> Point | None:
    """A satisfying point, or None when the system is infeasible."""
    return feasible_with_evidence(system)[1]


def system_from_constraints(
    dimension: int, constraints: Sequence[LinearConstraint]
) -> MixedSystem | None:
    """Build the mixed system of a constraint conjunction. Constant
    polynomials are resolved immediately: a violated one means the
    conjunction is empty (returns None), a satisfied one is dropped."""
    strict: list[LinearPolynomial] = []
    weak: list[LinearPolynomial] = []
    for constraint in constraints:
        poly = constraint.poly
        if poly.is_constant():
            if not constraint.rel.holds(poly.constant):
                return None
            continue
        if constraint.rel is Relation.LT:
            strict.append(poly)
        elif constraint.rel is Relation.LEQ:
            weak.append(poly)
        else:
            weak.append(poly)
            weak.append(-poly)
    return MixedSystem(dimension, tuple(strict), tuple(weak))


def feasible_oracle(system: MixedSystem) -> bool:
    """Independent slack-method check: maximize t subject to p(x) + t <= 0
    for strict rows, p(x) <= 0 for weak rows, and t <= 1; the system is
    satisfiable iff the optimum t is strictly positive."""
    d = system.dimension
    constraints = []
    for poly in system.strict:
        constraints.append(
            LinearConstraint(
                LinearPolynomial(poly.constant, poly.coefficients + (Fraction(1),)),
                Relation.LEQ,
            )
        )
    for poly in system.weak:
        constraints.append(
            LinearConstraint(
                LinearPolynomial(poly.constant, poly.coefficients + (Fraction(0),)),
                Relation.LEQ,
            )
        )
    slack_axis = (Fraction(0),) * d + (Fraction(1),)
    constraints.append(
        LinearConstraint(LinearPolynomial(Fraction(-1), slack_axis), Relation.LEQ)
    )
    program = LpProblem(
        d + 1, tuple(constraints), LinearPolynomial(Fraction(0), slack_axis)
    )
    outcome = solve_lp_max(program)
    if isinstance(outcome, Infeasible):
        return False
    if isinstance(outcome, Unbounded):
        raise InternalError("slack objective is capped at 1, cannot be unbounded")
    return outcome.value > 0
