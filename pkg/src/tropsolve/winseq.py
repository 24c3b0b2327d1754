"""Row classification, winning pairs, compatibility, and enumeration.

For each row, the columns split into those where the left side strictly
wins, those where the right side strictly wins, ties, and columns dead on
both sides.  A winning pair picks one column from each strict side (or a tie
column against itself); two pairs from different rows are compatible when
every 2x2 tropical minor of the maximum matrix they span attains its value
on the main diagonal.  Win sequences (one pair per row, pairwise compatible)
are enumerated by depth-first backtracking with incremental pruning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Matrix, TropicalError, ExtendedScalar, dif, odot

Pair = tuple[int, int]
WinSequence = tuple[Pair, ...]


@dataclass(frozen=True)
class RowClassification:
    """Disjoint column sets of one row: their union is the full column range."""

    a_wins: frozenset[int]
    b_wins: frozenset[int]
    ties: frozenset[int]
    dead: frozenset[int]


def classify_row(a_dom: Matrix, b_dom: Matrix, i: int) -> RowClassification:
    a_wins, b_wins, ties, dead = set(), set(), set(), set()
    for j in range(a_dom.cols):
        av, bv = a_dom[i, j], b_dom[i, j]
        if av > bv:
            a_wins.add(j)
        elif av < bv:
            b_wins.add(j)
        elif isinstance(av, Fraction):
            ties.add(j)
        else:
            dead.add(j)
    return RowClassification(
        frozenset(a_wins), frozenset(b_wins), frozenset(ties), frozenset(dead)
    )


def winning_pairs(cls: RowClassification) -> list[Pair]:
    """All strict-side pairs plus the tie diagonal, lexicographically sorted.

    Tie columns are paired only with themselves: a solution tying two
    columns arises from each diagonal pair separately, so mixed tie pairs
    would only duplicate sub-cells.
    """
    pairs = [(p, q) for p in cls.a_wins for q in cls.b_wins]
    pairs.extend((e, e) for e in cls.ties)
    return sorted(pairs)


def max_pairs_per_row(n: int) -> int:
    """Upper bound r on the number of winning pairs of any row."""
    return max(((n + 1) // 2) * (n // 2), n)


def is_compatible(max_matrix: Matrix, i: int, first: Pair, k: int, second: Pair) -> bool:
    """Whether the pair of row k is compatible with the pair of row i < k.

    Checks m_{i kappa} + m_{k iota} <= m_{i iota} + m_{k kappa} for the up
    to four column combinations, with -inf absorbing; a minor that is -inf
    on both sides passes.
    """
    for iota in set(first):
        for kappa in set(second):
            lhs = odot(max_matrix[i, kappa], max_matrix[k, iota])
            rhs = odot(max_matrix[i, iota], max_matrix[k, kappa])
            if not lhs <= rhs:
                return False
    return True


def interval(
    max_matrix: Matrix, i: int, k: int, iota: int, kappa: int
) -> tuple[ExtendedScalar, ExtendedScalar]:
    """Closed interval [lo, hi] bounding x_kappa - x_iota across rows i < k.

    Entry differences decrease with the row subscript for compatible pairs,
    so lo comes from row k and hi from row i.  Endpoints may be +/-inf.
    """
    lo = dif(max_matrix, iota, kappa, k)
    hi = dif(max_matrix, iota, kappa, i)
    if not lo <= hi:
        raise TropicalError(
            f"empty interval [{lo}, {hi}]: pairs were not compatible"
        )
    return lo, hi


def enumerate_win_sequences(
    max_matrix: Matrix, pairs_per_row: list[list[Pair]]
) -> list[WinSequence]:
    """All pairwise-compatible pair choices, in lexicographic order."""
    return enumerate_win_sequences_counted(max_matrix, pairs_per_row)[0]


def enumerate_win_sequences_counted(
    max_matrix: Matrix, pairs_per_row: list[list[Pair]]
) -> tuple[list[WinSequence], int]:
    """Enumerate win sequences and report the number of search nodes visited."""
    m = len(pairs_per_row)
    out: list[WinSequence] = []
    chosen: list[Pair] = []
    nodes = 0

    def extend(row: int) -> None:
        nonlocal nodes
        if row == m:
            out.append(tuple(chosen))
            return
        for pair in pairs_per_row[row]:
            nodes += 1
            if all(
                is_compatible(max_matrix, i, chosen[i], row, pair) for i in range(row)
            ):
                chosen.append(pair)
                extend(row + 1)
                chosen.pop()

    extend(0)
    return out, nodes
