"""Shared fixtures: the worked examples, transcribed with 1-based indices.

Helpers convert the human-readable 1-based transcription into the package's
0-based convention so tests read like the source material.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from tropsolve import Matrix, SolutionCell
from tropsolve.bivariate import Constraint, LEQ
from tropsolve.cells import dimension_bound

NI = "-inf"


def seq0(pairs):
    """1-based win sequence -> 0-based."""
    return tuple((p - 1, q - 1) for p, q in pairs)


def seq1(pairs):
    """0-based win sequence -> 1-based (for readable assertions)."""
    return tuple((p + 1, q + 1) for p, q in pairs)


def make_cell(num_vars, assignments, constraints, neg_inf=(), win_sequence=()):
    """Reference cell from 1-based (var, param, offset) and (plus, minus, const)."""
    assign = {v - 1: (p - 1, Fraction(o)) for v, p, o in assignments}
    cons = tuple(Constraint(p - 1, m - 1, Fraction(c), LEQ) for p, m, c in constraints)
    seq = seq0(win_sequence)
    bound, cycles, free = dimension_bound(seq, num_vars)
    neg = frozenset(v - 1 for v in neg_inf)
    return SolutionCell(
        win_sequence=seq,
        neg_inf=neg,
        assignments=assign,
        constraints=cons,
        cycles=cycles,
        free_indices=frozenset(free) - neg,
        dimension_bound=bound,
        num_vars=num_vars,
    )


@pytest.fixture
def running_example():
    a = Matrix([[3, 7, -1, NI], [6, 7, NI, NI], [1, 0, 1, NI]])
    b = Matrix([[NI, NI, NI, 8], [NI, NI, 5, 1], [1, 0, 1, 2]])
    return a, b


@pytest.fixture
def running_example_m():
    return Matrix([[3, 7, -1, 8], [6, 7, 5, 1], [1, 0, 1, 2]])


@pytest.fixture
def empty_case_example():
    a = Matrix([[3, 7, -1, NI], [6, 7, NI, NI], [-9, 0, 0, NI]])
    b = Matrix([[NI, NI, NI, 8], [NI, NI, 5, 1], [-9, 0, NI, -4]])
    return a, b


@pytest.fixture
def three_by_three_example():
    a = Matrix([[1, 3, NI], [5, 0, NI], [NI, 3, NI]])
    b = Matrix([[NI, NI, 3], [5, 0, 2], [3, NI, 2]])
    return a, b


@pytest.fixture
def two_by_seven_example():
    a = Matrix([[NI, NI, NI, 0, 4, 2, 6], [NI, 5, 6, NI, NI, NI, 2]])
    b = Matrix([[0, 1, 5, NI, NI, NI, NI], [3, NI, NI, 0, 2, 4, NI]])
    return a, b


def non_real_example(m21=2, m22=3):
    """The 2x3 instance whose maximum matrix has a -inf entry."""
    a = Matrix([[1, NI, NI], [m21, m22, 0]])
    b = Matrix([[NI, 1, NI], [NI, NI, 0]])
    return a, b


# The two cells displayed for the running example, as reference point sets.
def running_reference_cells():
    cell1 = make_cell(
        4,
        assignments=[(1, 4, 5), (2, 2, 0), (3, 4, 6), (4, 4, 0)],
        constraints=[(2, 4, -1)],
        win_sequence=[(1, 4), (1, 3), (3, 3)],
    )
    cell2 = make_cell(
        4,
        assignments=[(1, 3, -1), (2, 4, 1), (3, 3, 0), (4, 4, 0)],
        constraints=[(3, 4, -6), (4, 3, 3)],
        win_sequence=[(2, 4), (1, 3), (3, 3)],
    )
    return cell1, cell2


# The eight cells displayed for the 2x7 example, keyed by win sequence.
def two_by_seven_reference_cells():
    free = [(5, 5, 0), (6, 6, 0), (7, 7, 0)]
    data = {
        ((4, 1), (2, 1)): (
            [(1, 4, 0), (2, 4, -2), (3, 3, 0), (4, 4, 0)] + free,
            [(3, 4, 5), (5, 4, 4), (6, 4, 2), (7, 4, 6)],
        ),
        ((4, 3), (2, 1)): (
            [(1, 2, 2), (2, 2, 0), (3, 4, -5), (4, 4, 0)] + free,
            [(2, 4, 2), (4, 2, -4), (5, 2, -3), (6, 2, -1), (7, 2, -3),
             (5, 4, 4), (6, 4, 2), (7, 4, 6)],
        ),
        ((5, 1), (2, 1)): (
            [(1, 5, 4), (2, 5, 2), (3, 3, 0), (4, 4, 0)] + free,
            [(3, 5, 1), (4, 5, -4), (6, 5, -2), (7, 5, 2)],
        ),
        ((5, 3), (2, 1)): (
            [(1, 2, 2), (2, 2, 0), (3, 5, -1), (4, 4, 0)] + free,
            [(2, 5, -2), (5, 2, 0), (4, 5, -4), (4, 2, -5), (6, 2, -1),
             (7, 2, -3), (6, 5, -2), (7, 5, 2)],
        ),
        ((6, 1), (2, 1)): (
            [(1, 6, 2), (2, 6, 0), (3, 3, 0), (4, 4, 0)] + free,
            [(3, 6, 3), (4, 6, -2), (5, 6, 2), (7, 6, 4)],
        ),
        ((6, 3), (2, 1)): (
            [(1, 2, 2), (2, 2, 0), (3, 6, -3), (4, 4, 0)] + free,
            [(2, 6, 0), (6, 2, -1), (4, 6, -2), (5, 6, 2), (4, 2, -5),
             (5, 2, -3), (7, 2, -3), (7, 6, 4)],
        ),
        ((7, 1), (2, 1)): (
            [(1, 7, 6), (2, 7, 4), (3, 3, 0), (4, 4, 0)] + free,
            [(3, 7, -1), (4, 7, -6), (5, 7, -2), (6, 7, -4)],
        ),
        ((7, 3), (2, 1)): (
            [(1, 2, 2), (2, 2, 0), (3, 7, 1), (4, 4, 0)] + free,
            [(2, 7, -4), (7, 2, 2), (4, 7, -6), (5, 7, -2), (6, 7, -4),
             (4, 2, -5), (5, 2, -3), (6, 2, -1)],
        ),
    }
    return {
        ws: make_cell(7, assignments, constraints, win_sequence=list(ws))
        for ws, (assignments, constraints) in data.items()
    }
