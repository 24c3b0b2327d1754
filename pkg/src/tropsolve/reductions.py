"""Bridges between the kindred max-plus problems and the two-sided solver.

One-sided inequalities reduce to equalities by folding the maximum into one
side; systems with separate unknown blocks concatenate into a single block;
affine systems gain a homogenizing variable that is pinned to zero in every
cell afterwards.  Residuation (the principal solution of A (x) x <= b for a
real A) is computed directly via the conjugate matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cells import (
    SolutionCell,
    SolutionSet,
    cell_membership,
    sample_cell,
    solve,
)
from .bivariate import Constraint
from .core import (
    NEG_INF,
    DimensionMismatch,
    Matrix,
    NegInfinity,
    PosInfinity,
    Scalar,
    as_scalar,
    as_vector,
    conjugate,
    matvec_maxplus,
    matvec_minplus,
    oplus,
)


def leq_to_eq(a: Matrix, b: Matrix) -> tuple[Matrix, Matrix]:
    """One-sided inequality as an equality: A(x)x <= B(x)x iff (A+B)(x)x = B(x)x."""
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionMismatch("matrix shapes differ")
    merged = Matrix(
        [[oplus(a[i, j], b[i, j]) for j in range(a.cols)] for i in range(a.rows)],
        cols=a.cols,
    )
    return merged, b


def solve_leq(a: Matrix, b: Matrix, collect_stats: bool = False) -> SolutionSet:
    merged, rhs = leq_to_eq(a, b)
    return solve(merged, rhs, collect_stats=collect_stats)


def hetero_to_homo(c: Matrix, d: Matrix) -> tuple[Matrix, Matrix]:
    """C(x)x = D(x)y as a single system over the stacked unknown [x; y]."""
    if c.rows != d.rows:
        raise DimensionMismatch("row counts differ")
    n, m = c.cols, d.cols
    a_rows = [[c[i, j] for j in range(n)] + [NEG_INF] * m for i in range(c.rows)]
    b_rows = [[NEG_INF] * n + [d[i, j] for j in range(m)] for i in range(c.rows)]
    return Matrix(a_rows, cols=n + m), Matrix(b_rows, cols=n + m)


def solve_hetero(c: Matrix, d: Matrix, collect_stats: bool = False) -> SolutionSet:
    """Solve the two-block system; with no rows every (x, y) is a solution."""
    if c.rows == 0:
        n = c.cols + d.cols
        from .cells import _unconstrained_cell

        cell = _unconstrained_cell(list(range(n)), n)
        return SolutionSet(
            cells=(cell,),
            globally_forced=frozenset(),
            trivial_only=False,
            win_sequence_count=0,
            num_vars=n,
        )
    return solve(*hetero_to_homo(c, d), collect_stats=collect_stats)


def split_hetero_solution(z: Sequence[Scalar], n: int) -> tuple[tuple, tuple]:
    zs = tuple(z)
    return zs[:n], zs[n:]


@dataclass(frozen=True)
class AffineInstance:
    a: Matrix
    b: Matrix
    a_vec: tuple[Scalar, ...]
    b_vec: tuple[Scalar, ...]

    def __post_init__(self):
        if self.a.rows != self.b.rows or self.a.cols != self.b.cols:
            raise DimensionMismatch("matrix shapes differ")
        if len(self.a_vec) != self.a.rows or len(self.b_vec) != self.a.rows:
            raise DimensionMismatch("vector lengths must equal the row count")


def homogenize_affine(inst: AffineInstance) -> tuple[Matrix, Matrix]:
    """Append the constant columns: ([A | a], [B | b]) over n+1 variables."""
    a_rows = [
        [inst.a[i, j] for j in range(inst.a.cols)] + [inst.a_vec[i]]
        for i in range(inst.a.rows)
    ]
    b_rows = [
        [inst.b[i, j] for j in range(inst.b.cols)] + [inst.b_vec[i]]
        for i in range(inst.b.rows)
    ]
    return Matrix(a_rows, cols=inst.a.cols + 1), Matrix(b_rows, cols=inst.b.cols + 1)


def affine_holds(inst: AffineInstance, x: Sequence) -> bool:
    """Direct evaluation of A(x)x (+) a = B(x)x (+) b."""
    xs = as_vector(x)
    left = matvec_maxplus(inst.a, xs)
    right = matvec_maxplus(inst.b, xs)
    return tuple(oplus(l, v) for l, v in zip(left, inst.a_vec)) == tuple(
        oplus(r, v) for r, v in zip(right, inst.b_vec)
    )


@dataclass(frozen=True)
class PinnedCell:
    """A cell with one variable pinned to a finite value.

    Variables sharing the pinned parameter become fixed constants; parameters
    constrained against it acquire scalar bounds (a lower bound excludes
    -inf).  Membership and sampling are expressed over the remaining
    variables (the pinned one is dropped from vectors).
    """

    base: SolutionCell
    pinned_var: int
    pinned_value: Fraction
    neg_inf: frozenset[int]
    fixed: Mapping[int, Fraction]
    assignments: Mapping[int, tuple[int, Fraction]]
    constraints: tuple[Constraint, ...]
    lower: Mapping[int, Fraction]
    upper: Mapping[int, Fraction]

    def num_vars(self) -> int:
        return self.base.num_vars - 1

    def _embed(self, x: Sequence) -> list:
        xs = list(x)
        if len(xs) != self.num_vars():
            raise DimensionMismatch(
                f"vector of length {len(xs)} against {self.num_vars()} variables"
            )
        xs.insert(self.pinned_var, self.pinned_value)
        return xs

    def contains(self, x: Sequence) -> bool:
        return cell_membership(self.base, self._embed(x))

    def contains_by_view(self, x: Sequence) -> bool:
        """Same predicate, evaluated on the specialized fields (cross-check)."""
        full = [as_scalar(v) for v in self._embed(x)]
        for v in self.neg_inf:
            if not isinstance(full[v], NegInfinity):
                return False
        for v, value in self.fixed.items():
            if full[v] != value:
                return False
        values: dict[int, Scalar] = {}
        for v, (param, offset) in self.assignments.items():
            val = full[v]
            t = val if isinstance(val, NegInfinity) else val - offset
            if param in values:
                if values[param] != t:
                    return False
            else:
                values[param] = t
        for param, bound in self.lower.items():
            t = values[param]
            if isinstance(t, NegInfinity) or t < bound:
                return False
        for param, bound in self.upper.items():
            t = values[param]
            if not isinstance(t, NegInfinity) and t > bound:
                return False
        for c in self.constraints:
            tp, tm = values[c.plus], values[c.minus]
            if isinstance(tp, NegInfinity):
                continue
            if isinstance(tm, NegInfinity):
                return False
            if tp - tm + c.constant > 0:
                return False
        return True

    def sample(self, count: int, seed: int = 0, box=10) -> list[tuple[Scalar, ...]]:
        """Members with the pinned variable already substituted out.

        Base-cell samples where the pinned variable is finite are shifted so
        it hits the pinned value exactly (cells are stable under adding one
        constant to all finite coordinates).
        """
        out: list[tuple[Scalar, ...]] = []
        attempt = 0
        while len(out) < count and attempt < 200:
            chunk = sample_cell(self.base, count + 2, seed + 7919 * attempt, box)
            for point in chunk:
                z = point[self.pinned_var]
                if isinstance(z, NegInfinity):
                    continue
                delta = self.pinned_value - z
                shifted = [
                    v if isinstance(v, NegInfinity) else v + delta for v in point
                ]
                del shifted[self.pinned_var]
                out.append(tuple(shifted))
                if len(out) == count:
                    break
            attempt += 1
        if len(out) < count:
            raise RuntimeError("could not sample the pinned cell")
        return out


def pin_variable(cell: SolutionCell, var: int, value) -> PinnedCell | None:
    """Specialize a cell by fixing one variable; None if the cell forces it to -inf."""
    if var in cell.neg_inf:
        return None
    val = Fraction(value)
    param0, off0 = cell.assignments[var]
    t0 = val - off0
    fixed: dict[int, Fraction] = {}
    assignments: dict[int, tuple[int, Fraction]] = {}
    for v, (param, offset) in cell.assignments.items():
        if v == var:
            continue
        if param == param0:
            fixed[v] = t0 + offset
        else:
            assignments[v] = (param, offset)
    lower: dict[int, Fraction] = {}
    upper: dict[int, Fraction] = {}
    constraints: list[Constraint] = []
    for c in cell.constraints:
        if c.plus == param0:
            bound = t0 + c.constant
            if c.minus not in lower or bound > lower[c.minus]:
                lower[c.minus] = bound
        elif c.minus == param0:
            bound = t0 - c.constant
            if c.plus not in upper or bound < upper[c.plus]:
                upper[c.plus] = bound
        else:
            constraints.append(c)
    return PinnedCell(
        base=cell,
        pinned_var=var,
        pinned_value=val,
        neg_inf=cell.neg_inf,
        fixed=fixed,
        assignments=assignments,
        constraints=tuple(constraints),
        lower=lower,
        upper=upper,
    )


@dataclass(frozen=True)
class PinnedSolutionSet:
    """Solution set of an affine problem: base cells with the homogenizer at 0."""

    base: SolutionSet
    cells: tuple[PinnedCell, ...]
    num_vars: int

    def contains(self, x: Sequence) -> bool:
        return any(cell.contains(x) for cell in self.cells)


def solve_affine(inst: AffineInstance, collect_stats: bool = False) -> PinnedSolutionSet:
    base = solve(*homogenize_affine(inst), collect_stats=collect_stats)
    z = inst.a.cols
    pinned = tuple(
        pc
        for cell in base.cells
        if (pc := pin_variable(cell, z, 0)) is not None
    )
    return PinnedSolutionSet(base=base, cells=pinned, num_vars=z)


def solve_eq_b(a: Matrix, b: Sequence, collect_stats: bool = False) -> PinnedSolutionSet:
    """All solutions of A (x) x = b, valid for matrices with -inf entries."""
    bs = as_vector(b)
    neg = Matrix([[NEG_INF] * a.cols for _ in range(a.rows)], cols=a.cols)
    inst = AffineInstance(a, neg, tuple([NEG_INF] * a.rows), bs)
    return solve_affine(inst, collect_stats=collect_stats)


def principal_solution(a: Matrix, b: Sequence) -> tuple[Scalar, ...]:
    """Greatest x with A (x) x <= b, for a real matrix A."""
    result = matvec_minplus(conjugate(a), as_vector(b))
    if any(isinstance(v, PosInfinity) for v in result):
        raise DimensionMismatch("residuation needs at least one row")
    return result  # type: ignore[return-value]


def decide_eq_b(a: Matrix, b: Sequence) -> tuple[Scalar, ...] | None:
    """The greatest solution of A (x) x = b for real A, or None if none exists."""
    bs = as_vector(b)
    candidate = principal_solution(a, bs)
    if matvec_maxplus(a, candidate) == bs:
        return candidate
    return None
