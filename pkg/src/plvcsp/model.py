"""Exact domain model: rational values extended with infinities, affine
polynomials, piecewise-linear cost functions, instances, and sign-vector
cells.

All arithmetic is exact (`fractions.Fraction`); floats are rejected at the
boundary. Every type is immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InternalError, InvalidInstanceError, ValidationError

RationalLike = Union[Fraction, int, str]
Point = tuple[Fraction, ...]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, string ("p/q" or "p"), or Fraction to Fraction.

    Floats are rejected: they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"expected an exact rational, got {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise ValueError(f"expected an exact rational, got {value!r}")


def as_point(values: Iterable[RationalLike]) -> Point:
    return tuple(as_fraction(v) for v in values)


class ExtRational:
    """A rational number extended with +inf and -inf.

    Ordering: -inf < every finite value < +inf. Addition treats +inf as
    absorbing; the sum (+inf) + (-inf) is undefined and raises.
    """

    __slots__ = ("_kind", "_value")

    _FINITE, _PLUS, _MINUS = 0, 1, -1

    def __init__(self, kind: int, value: Fraction | None):
        self._kind = kind
        self._value = value

    @classmethod
    def finite(cls, value: RationalLike) -> "ExtRational":
        return cls(cls._FINITE, as_fraction(value))

    @property
    def is_finite(self) -> bool:
        return self._kind == self._FINITE

    @property
    def is_plus_infinity(self) -> bool:
        return self._kind == self._PLUS

    @property
    def is_minus_infinity(self) -> bool:
        return self._kind == self._MINUS

    @property
    def value(self) -> Fraction:
        if self._kind != self._FINITE:
            raise ValueError("infinite value has no rational part")
        assert self._value is not None
        return self._value

    @staticmethod
    def _coerce(other: object) -> "ExtRational | None":
        if isinstance(other, ExtRational):
            return other
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            return ExtRational.finite(other)
        return None

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._kind == o._kind and self._value == o._value

    def __hash__(self) -> int:
        return hash((self._kind, self._value))

    def __lt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._kind != o._kind:
            return self._kind < o._kind
        if self._kind != self._FINITE:
            return False
        return self._value < o._value  # type: ignore[operator]

    def __le__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return not (o < self)

    def __gt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o < self

    def __ge__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return not (self < o)

    def __add__(self, other: object) -> "ExtRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._kind == self._FINITE and o._kind == self._FINITE:
            return ExtRational.finite(self._value + o._value)  # type: ignore[operator]
        if self._kind == -o._kind and self._kind != self._FINITE:
            raise ArithmeticError("(+inf) + (-inf) is undefined")
        return self if self._kind != self._FINITE else o

    __radd__ = __add__

    def __str__(self) -> str:
        if self._kind == self._PLUS:
            return "+inf"
        if self._kind == self._MINUS:
            return "-inf"
        return str(self._value)

    def __repr__(self) -> str:
        return f"ExtRational({self})"


PLUS_INFINITY = ExtRational(ExtRational._PLUS, None)
MINUS_INFINITY = ExtRational(ExtRational._MINUS, None)


@dataclass(frozen=True)
class LinearPolynomial:
    """Affine form  constant + coefficients[0]*x_0 + ... over d variables."""

    constant: Fraction
    coefficients: tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return len(self.coefficients)

    @classmethod
    def of(cls, constant: RationalLike, *coefficients: RationalLike) -> "LinearPolynomial":
        return cls(as_fraction(constant), tuple(as_fraction(c) for c in coefficients))

    @classmethod
    def zero(cls, dimension: int) -> "LinearPolynomial":
        return cls(Fraction(0), (Fraction(0),) * dimension)

    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def is_zero(self) -> bool:
        return self.constant == 0 and self.is_constant()

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.dimension:
            raise ValueError(
                f"point has {len(point)} coordinates, polynomial has dimension {self.dimension}"
            )
        total = self.constant
        for c, x in zip(self.coefficients, point):
            if c:
                total += c * x
        return total

    def __add__(self, other: "LinearPolynomial") -> "LinearPolynomial":
        if not isinstance(other, LinearPolynomial):
            return NotImplemented
        if other.dimension != self.dimension:
            raise ValueError("cannot add polynomials of different dimensions")
        return LinearPolynomial(
            self.constant + other.constant,
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def __neg__(self) -> "LinearPolynomial":
        return LinearPolynomial(-self.constant, tuple(-c for c in self.coefficients))

    def __sub__(self, other: "LinearPolynomial") -> "LinearPolynomial":
        return self + (-other)

    def __mul__(self, scalar: RationalLike) -> "LinearPolynomial":
        s = as_fraction(scalar)
        return LinearPolynomial(self.constant * s, tuple(c * s for c in self.coefficients))

    __rmul__ = __mul__

    def add_constant(self, value: RationalLike) -> "LinearPolynomial":
        return LinearPolynomial(self.constant + as_fraction(value), self.coefficients)

    def lift(self, scope: Sequence[int], dimension: int) -> "LinearPolynomial":
        """Rewrite this r-variable polynomial over d ambient variables, sending
        local variable i to ambient variable scope[i]. Repeated scope indices
        merge their coefficients."""
        if len(scope) != self.dimension:
            raise ValueError("scope length must equal polynomial dimension")
        coeffs = [Fraction(0)] * dimension
        for index, c in zip(scope, self.coefficients):
            if not 0 <= index < dimension:
                raise ValueError(f"scope index {index} out of range for dimension {dimension}")
            coeffs[index] += c
        return LinearPolynomial(self.constant, tuple(coeffs))

    def canonicalize(self) -> tuple["LinearPolynomial", int]:
        """Return (canonical, orientation) with canonical a primitive-integer,
        sign-normalized positive multiple of +-this polynomial.

        canonical = this / (positive scalar) up to the orientation sign: the
        first nonzero coefficient (scanning x_0..x_{d-1}, then the constant)
        of canonical is positive, and orientation * canonical is a positive
        multiple of this polynomial.
        """
        if self.is_constant():
            raise ValueError("constant polynomial cannot be canonicalized")
        entries = self.coefficients + (self.constant,)
        scale = math.lcm(*(e.denominator for e in entries))
        nums = [int(e * scale) for e in entries]
        g = math.gcd(*nums)
        nums = [n // g for n in nums]
        orientation = 1
        for n in nums:  # coefficients first, constant last: first nonzero decides
            if n:
                if n < 0:
                    orientation = -1
                    nums = [-m for m in nums]
                break
        return (
            LinearPolynomial(Fraction(nums[-1]), tuple(Fraction(n) for n in nums[:-1])),
            orientation,
        )


class Relation(Enum):
    """Constraint relation against zero: poly(x) <rel> 0."""

    LEQ = "<="
    LT = "<"
    EQ = "="

    @property
    def symbol(self) -> str:
        return self.value

    def holds(self, value: Fraction) -> bool:
        if self is Relation.LEQ:
            return value <= 0
        if self is Relation.LT:
            return value < 0
        return value == 0


@dataclass(frozen=True)
class LinearConstraint:
    """poly(x) rel 0."""

    poly: LinearPolynomial
    rel: Relation

    @property
    def dimension(self) -> int:
        return self.poly.dimension

    def satisfied_at(self, point: Sequence[Fraction]) -> bool:
        return self.rel.holds(self.poly.evaluate(point))

    def __str__(self) -> str:
        return f"{self.poly} {self.rel.symbol} 0"


@dataclass(frozen=True)
class Piece:
    """One polyhedral piece of a cost function: a guard (conjunction of
    constraints; empty means the whole space) and the value expression."""

    guard: tuple[LinearConstraint, ...]
    value: LinearPolynomial


@dataclass(frozen=True)
class PLCostFunction:
    """A piecewise-linear cost function: finitely many mutually disjoint
    pieces; +inf outside their union (never stored explicitly)."""

    arity: int
    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValidationError("cost function arity must be at least 1")
        for piece in self.pieces:
            if piece.value.dimension != self.arity:
                raise ValidationError("piece value dimension differs from function arity")
            for constraint in piece.guard:
                if constraint.dimension != self.arity:
                    raise ValidationError("guard dimension differs from function arity")

    def evaluate(self, point: Sequence[Fraction]) -> ExtRational:
        """Value at the point: the containing piece's expression, +inf if no
        piece applies. Raises InvalidInstanceError if two overlapping pieces
        disagree."""
        if len(point) != self.arity:
            raise ValueError(f"point has {len(point)} coordinates, function arity is {self.arity}")
        result: Fraction | None = None
        for piece in self.pieces:
            if all(c.satisfied_at(point) for c in piece.guard):
                value = piece.value.evaluate(point)
                if result is not None and value != result:
                    raise InvalidInstanceError(
                        "overlapping pieces assign different values at the same point"
                    )
                result = value
        return PLUS_INFINITY if result is None else ExtRational.finite(result)


@dataclass(frozen=True)
class Term:
    """An application of one cost function to a tuple of instance variables
    (indices into 0..d-1; repetition allowed)."""

    function_index: int
    scope: tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    """A sum of cost-function applications over d rational variables."""

    dimension: int
    functions: tuple[PLCostFunction, ...]
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValidationError("instance dimension must be at least 1")
        for term in self.terms:
            if not 0 <= term.function_index < len(self.functions):
                raise ValidationError(f"term references unknown function {term.function_index}")
            function = self.functions[term.function_index]
            if len(term.scope) != function.arity:
                raise ValidationError(
                    f"term scope has {len(term.scope)} variables, function arity is {function.arity}"
                )
            for index in term.scope:
                if not 0 <= index < self.dimension:
                    raise ValidationError(f"scope index {index} out of range")

    def evaluate(self, point: Sequence[Fraction]) -> ExtRational:
        """Objective value at the point; +inf absorbs."""
        if len(point) != self.dimension:
            raise ValueError(
                f"point has {len(point)} coordinates, instance dimension is {self.dimension}"
            )
        total = ExtRational.finite(0)
        for term in self.terms:
            function = self.functions[term.function_index]
            sub = tuple(point[i] for i in term.scope)
            total = total + function.evaluate(sub)
        return total


class Sign(Enum):
    """Sign condition of one arrangement polynomial on a cell."""

    NEG = -1
    ZERO = 0
    POS = 1

    @classmethod
    def of(cls, value: Fraction) -> "Sign":
        if value < 0:
            return cls.NEG
        if value > 0:
            return cls.POS
        return cls.ZERO

    @property
    def flipped(self) -> "Sign":
        return Sign(-self.value)

    @property
    def symbol(self) -> str:
        return {Sign.NEG: "-", Sign.ZERO: "0", Sign.POS: "+"}[self]


@dataclass(frozen=True)
class Cell:
    """A relatively open polyhedral set given by one sign per arrangement
    polynomial: { x : polys[j](x) <signs[j]> 0 for all j }."""

    polys: tuple[LinearPolynomial, ...]
    signs: tuple[Sign, ...]

    def __post_init__(self) -> None:
        if len(self.polys) != len(self.signs):
            raise ValueError("cell needs exactly one sign per polynomial")

    def sign_string(self) -> str:
        return "".join(s.symbol for s in self.signs)

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(Sign.of(p.evaluate(point)) is s for p, s in zip(self.polys, self.signs))


@dataclass(frozen=True)
class SolveResult:
    """Infimum value of an instance and whether some assignment attains it."""

    value: ExtRational
    attained: bool

    def __post_init__(self) -> None:
        if not self.value.is_finite and self.attained:
            raise InternalError("an infinite infimum can never be attained")

    def __str__(self) -> str:
        kind = "minimum" if self.attained else "infimum"
        flag = "attained" if self.attained else "not attained"
        return f"value = {self.value} ({kind}, {flag})"
