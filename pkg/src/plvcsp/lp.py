"""Exact rational linear programming.

Minimizes a linear objective over weak linear constraints (<=, =) on
rational variables, reporting Infeasible / Unbounded / Optimal with exact
witnesses and dual multipliers. The engine is a two-phase primal simplex
with Bland's rule, run on a fraction-free integer tableau: every tableau is
the basis-determinant multiple of the true rational tableau, so pivots stay
in arbitrary-precision integers and all divisions are exact.

`solve_lp` treats variables as free (split x = u - v); `solve_lp_nonneg`
solves the same problem shape with variables restricted to be nonnegative,
which is what the strict-feasibility reduction needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InternalError
from .model import LinearConstraint, LinearPolynomial, Point, Relation

ZERO = Fraction(0)


@dataclass(frozen=True)
class LpProblem:
    """Minimize objective(x) subject to constraints; relations LEQ/EQ only."""

    dimension: int
    constraints: tuple[LinearConstraint, ...]
    objective: LinearPolynomial

    def __post_init__(self) -> None:
        if self.objective.dimension != self.dimension:
            raise ValueError("objective dimension differs from problem dimension")
        for constraint in self.constraints:
            if constraint.rel is Relation.LT:
                raise ValueError("strict constraints are not allowed in an LP")
            if constraint.dimension != self.dimension:
                raise ValueError("constraint dimension differs from problem dimension")


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Unbounded:
    """A feasible point plus an exact improving ray: witness + t*ray stays
    feasible for every t >= 0 and the objective decreases strictly in t."""

    witness: Point
    ray: Point


@dataclass(frozen=True)
class Optimal:
    """Exact optimal value, a feasible witness attaining it, and one dual
    multiplier per constraint: multipliers of <=-rows are nonnegative and
    objective - value == -sum(dual[i] * row_i) identically (free variables)
    or componentwise >= 0 (nonnegative variables)."""

    value: Fraction
    witness: Point
    dual: tuple[Fraction, ...]


LpOutcome = Infeasible | Unbounded | Optimal


def _dot(coefficients: Sequence[Fraction], vector: Sequence[Fraction]) -> Fraction:
    total = ZERO
    for c, x in zip(coefficients, vector):
        if c:
            total += c * x
    return total


class _Simplex:
    """Fraction-free simplex core over nonnegative standard-form variables.

    rows: (coefficients, rhs, is_equality) with variables implicitly >= 0.
    The stored integer row is factor[i] * the given row; `den` is the signed
    determinant of the current basis, so true tableau = T / den.
    """

    def __init__(self, num_vars: int, rows, cost: Sequence[Fraction]):
        self.n = num_vars
        self.m = len(rows)
        self.factors: list[int] = []
        int_rows: list[tuple[list[int], int]] = []
        eq_flags: list[bool] = []
        for coeffs, rhs, is_eq in rows:
            scale = math.lcm(rhs.denominator, *(c.denominator for c in coeffs))
            ints = [int(c * scale) for c in coeffs]
            irhs = int(rhs * scale)
            factor = scale
            if irhs < 0:
                ints = [-v for v in ints]
                irhs = -irhs
                factor = -scale
            int_rows.append((ints, irhs))
            self.factors.append(factor)
            eq_flags.append(is_eq)
        self.eq_flags = eq_flags

        col = num_vars
        self.slack_col: list[int | None] = [None] * self.m
        self.art_col: list[int | None] = [None] * self.m
        for i in range(self.m):
            if not eq_flags[i]:
                self.slack_col[i] = col
                col += 1
        for i in range(self.m):
            if eq_flags[i] or self.factors[i] < 0:
                self.art_col[i] = col
                col += 1
        self.width = col + 1  # + rhs column
        self.artificials = frozenset(c for c in self.art_col if c is not None)

        self.T: list[list[int]] = []
        self.basis: list[int] = []
        for i, (ints, irhs) in enumerate(int_rows):
            row = ints + [0] * (self.width - num_vars - 1) + [irhs]
            if self.slack_col[i] is not None:
                row[self.slack_col[i]] = 1 if self.factors[i] > 0 else -1
            if self.art_col[i] is not None:
                row[self.art_col[i]] = 1
            self.T.append(row)
            art = self.art_col[i]
            self.basis.append(art if art is not None else self.slack_col[i])  # type: ignore[arg-type]
        self.den = 1

        self.cost = list(cost)
        self.cost_scale = math.lcm(1, *(c.denominator for c in cost))
        self.z: list[int] = []

    # -- tableau mechanics ------------------------------------------------

    def _pivot(self, r: int, c: int) -> None:
        T = self.T
        prow = T[r]
        p = prow[c]
        d = self.den
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[c]
            if f:
                T[i] = [(a * p - f * b) // d for a, b in zip(row, prow)]
            elif p != d:
                T[i] = [(a * p) // d for a in row]
        f = self.z[c]
        if f:
            self.z = [(a * p - f * b) // d for a, b in zip(self.z, prow)]
        elif p != d:
            self.z = [(a * p) // d for a in self.z]
        self.den = p
        self.basis[r] = c

    def _price(self, scaled_costs: list[int]) -> None:
        den = self.den
        z = [den * c for c in scaled_costs] + [0]
        for i, row in enumerate(self.T):
            cb = scaled_costs[self.basis[i]]
            if cb:
                z = [a - cb * b for a, b in zip(z, row)]
        self.z = z

    def _run(self, banned: frozenset[int]) -> int | None:
        """Bland pivoting until optimal (returns None) or unbounded
        (returns the entering column)."""
        T = self.T
        while True:
            sgn = 1 if self.den > 0 else -1
            z = self.z
            enter = -1
            for j in range(self.width - 1):
                if z[j] * sgn < 0 and j not in banned:
                    enter = j
                    break
            if enter < 0:
                return None
            leave = -1
            bn = bd = 0
            for i in range(self.m):
                t = T[i][enter]
                if t * sgn > 0:
                    num = T[i][-1]
                    if leave < 0:
                        leave, bn, bd = i, num, t
                    else:
                        lhs = num * bd
                        rhs = bn * t
                        if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[leave]):
                            leave, bn, bd = i, num, t
            if leave < 0:
                return enter
            self._pivot(leave, enter)

    # -- two phases --------------------------------------------------------

    def solve(self):
        """Returns ("infeasible",) or ("optimal", witness, row_duals) or
        ("unbounded", witness, ray), all in standard (nonnegative) space;
        row_duals y satisfy cost - A^T y >= 0 over the real columns and are
        reported for the rows as given (unscaled, unnegated)."""
        if self.artificials:
            phase1 = [1 if j in self.artificials else 0 for j in range(self.width - 1)]
            self._price(phase1)
            if self._run(frozenset()) is not None:
                raise InternalError("phase-1 objective is bounded below by zero")
            for i in range(self.m):
                if self.basis[i] in self.artificials and self.T[i][-1] != 0:
                    return ("infeasible",)
            self._drive_out_artificials()

        scaled = [0] * (self.width - 1)
        for j, c in enumerate(self.cost):
            scaled[j] = int(c * self.cost_scale)
        self._price(scaled)
        enter = self._run(self.artificials)
        if enter is None:
            return ("optimal", self._witness(), self._row_duals())
        return ("unbounded", self._witness(), self._ray(enter))

    def _drive_out_artificials(self) -> None:
        # Rows whose artificial cannot be displaced are redundant: their real
        # entries are all zero and stay zero under every later pivot.
        for i in range(self.m):
            if self.basis[i] not in self.artificials:
                continue
            row = self.T[i]
            for j in range(self.width - 1):
                if j not in self.artificials and row[j] != 0:
                    self._pivot(i, j)
                    break

    # -- result extraction --------------------------------------------------

    def _witness(self) -> list[Fraction]:
        values = [ZERO] * (self.width - 1)
        for i in range(self.m):
            values[self.basis[i]] = Fraction(self.T[i][-1], self.den)
        return values[: self.n]

    def _ray(self, enter: int) -> list[Fraction]:
        direction = [ZERO] * (self.width - 1)
        direction[enter] = Fraction(1)
        for i in range(self.m):
            t = self.T[i][enter]
            if t:
                direction[self.basis[i]] = Fraction(-t, self.den)
        return direction[: self.n]

    def _row_duals(self) -> list[Fraction]:
        denom = self.den * self.cost_scale
        duals = []
        for i in range(self.m):
            if self.eq_flags[i]:
                unit = self.art_col[i]
                eps = 1
            else:
                unit = self.slack_col[i]
                eps = 1 if self.factors[i] > 0 else -1
            reduced = Fraction(self.z[unit], denom)  # type: ignore[index]
            duals.append(-self.factors[i] * eps * reduced)
        return duals


def _constraint_rows(problem: LpProblem):
    rows = []
    for constraint in problem.constraints:
        poly = constraint.poly
        rows.append((poly.coefficients, -poly.constant, constraint.rel is Relation.EQ))
    return rows


def _verify_point(problem: LpProblem, point: Sequence[Fraction], nonneg: bool) -> bool:
    if nonneg and any(x < 0 for x in point):
        return False
    for constraint in problem.constraints:
        value = constraint.poly.evaluate(point)
        if constraint.rel is Relation.EQ:
            if value != 0:
                return False
        elif value > 0:
            return False
    return True


def _verify_ray(problem: LpProblem, ray: Sequence[Fraction], nonneg: bool) -> bool:
    if nonneg and any(x < 0 for x in ray):
        return False
    for constraint in problem.constraints:
        slope = _dot(constraint.poly.coefficients, ray)
        if constraint.rel is Relation.EQ:
            if slope != 0:
                return False
        elif slope > 0:
            return False
    return _dot(problem.objective.coefficients, ray) < 0


def _finish(problem: LpProblem, outcome, to_ambient, nonneg: bool) -> LpOutcome:
    if outcome[0] == "infeasible":
        return Infeasible()
    if outcome[0] == "unbounded":
        witness = tuple(to_ambient(outcome[1]))
        ray = tuple(to_ambient(outcome[2]))
        if not (_verify_point(problem, witness, nonneg) and _verify_ray(problem, ray, nonneg)):
            raise InternalError("simplex produced an invalid unboundedness certificate")
        return Unbounded(witness, ray)
    witness = tuple(to_ambient(outcome[1]))
    if not _verify_point(problem, witness, nonneg):
        raise InternalError("simplex witness violates a constraint")
    dual = tuple(-y for y in outcome[2])
    return Optimal(problem.objective.evaluate(witness), witness, dual)


def solve_lp(problem: LpProblem) -> LpOutcome:
    """Minimize over free rational variables."""
    n = problem.dimension
    rows = []
    for coeffs, rhs, is_eq in _constraint_rows(problem):
        rows.append((list(coeffs) + [-c for c in coeffs], rhs, is_eq))
    cost = list(problem.objective.coefficients) + [-c for c in problem.objective.coefficients]
    outcome = _Simplex(2 * n, rows, cost).solve()

    def to_ambient(vector: list[Fraction]) -> list[Fraction]:
        return [vector[j] - vector[n + j] for j in range(n)]

    return _finish(problem, outcome, to_ambient, nonneg=False)


def solve_lp_nonneg(problem: LpProblem) -> LpOutcome:
    """Minimize with every variable restricted to be nonnegative.

    The Optimal dual here certifies the bound componentwise: dual of every
    <=-row is >= 0 and objective coefficients + sum(dual[i] * row_i
    coefficients) >= 0 for each variable, with constants matching the value.
    """
    rows = _constraint_rows(problem)
    outcome = _Simplex(problem.dimension, rows, list(problem.objective.coefficients)).solve()
    return _finish(problem, outcome, lambda v: v, nonneg=True)


def solve_lp_max(problem: LpProblem) -> LpOutcome:
    """Maximize the objective: solve the negated minimization and negate the
    value back. Unbounded means the supremum is +inf. The dual certifies the
    negated problem."""
    negated = LpProblem(problem.dimension, problem.constraints, -problem.objective)
    outcome = solve_lp(negated)
    if isinstance(outcome, Optimal):
        return Optimal(-outcome.value, outcome.witness, outcome.dual)
    return outcome


def valid_certificate(problem: LpProblem, outcome: Optimal, nonneg: bool = False) -> bool:
    """Check the dual multipliers of a minimization outcome exactly.

    Free variables: objective - value must equal -sum(dual_i * row_i) as a
    polynomial identity. Nonnegative variables: the combination must
    dominate componentwise instead.
    """
    if len(outcome.dual) != len(problem.constraints):
        return False
    for multiplier, constraint in zip(outcome.dual, problem.constraints):
        if constraint.rel is Relation.LEQ and multiplier < 0:
            return False
    for j in range(problem.dimension):
        combined = problem.objective.coefficients[j] + sum(
            m * c.poly.coefficients[j] for m, c in zip(outcome.dual, problem.constraints)
        )
        if nonneg:
            if combined < 0:
                return False
        elif combined != 0:
            return False
    constant = problem.objective.constant + sum(
        m * c.poly.constant for m, c in zip(outcome.dual, problem.constraints)
    )
    return constant == outcome.value
