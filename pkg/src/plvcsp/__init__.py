"""Exact solver for valued constraint satisfaction problems with
piecewise-linear cost functions over the rationals.

The library computes the exact infimum of a sum of PL cost functions in a
fixed number of rational variables and decides whether it is attained, by
decomposing space into the sign-vector cells of the guard-hyperplane
arrangement and bounding the (linear) objective on each cell with an exact
rational simplex.
"""

from .arrangement import (
    Arrangement,
    build_arrangement,
    cell_count_bound,
    cell_system,
    closure_system,
    enumerate_cells,
    enumerate_cells_with_witnesses,
    extract_polynomials,
)
from .errors import (
    InternalError,
    InvalidInstanceError,
    ParseError,
    PlvcspError,
    ValidationError,
)
from .feasibility import (
    InfeasibilityCertificate,
    MixedSystem,
    MotzkinDual,
    feasible,
    feasible_oracle,
    feasible_with_evidence,
    homogenize,
    strict_witness,
    system_from_constraints,
)
from .fileformat import parse, parse_file, render, validate_disjointness
from .lp import (
    Infeasible,
    LpOutcome,
    LpProblem,
    Optimal,
    Unbounded,
    solve_lp,
    solve_lp_max,
    solve_lp_nonneg,
    valid_certificate,
)
from .model import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    Cell,
    ExtRational,
    Instance,
    LinearConstraint,
    LinearPolynomial,
    PLCostFunction,
    Piece,
    Relation,
    Sign,
    SolveResult,
    Term,
    as_fraction,
    as_point,
)
from .solver import (
    CellObjective,
    SolveStats,
    cell_bounds,
    cell_objective,
    restrict_term_to_cell,
    solve,
    solve_detailed,
    solve_naive,
    solve_with_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
