"""Independent brute-force reference computations for the test suite.

Everything here goes back to first definitions (ball configurations, pair
graphs, labelling signs) and deliberately avoids the convolution and matrix
code paths under test, so a match is evidence rather than tautology.
"""

import itertools
from typing import List, Tuple

from altschur import BipartiteGraph, NonTransverseError, pair_graph
from altschur.algebra import GradedElement
from altschur.enumeration import enum_B
from altschur.fields import Scalar
from altschur.graphs import Word, pair_sign


def kernel_value(elem: GradedElement, s_word: Word, u_word: Word) -> Scalar:
    """The integral kernel of ``elem`` evaluated at the configuration pair.

    Even symbols contribute their coefficient when the pair graph matches;
    odd symbols contribute the coefficient times the ball-labelling sign (and
    nothing at non-transverse pairs, where no simple graph can match).
    """
    f = elem.field
    g = pair_graph(s_word, u_word, elem.n)
    total = f.zero
    for sym, c in elem.terms.items():
        if sym.graph != g:
            continue
        if sym.is_odd:
            total = f.add(total, f.mul(f.from_int(pair_sign(s_word, u_word)), c))
        else:
            total = f.add(total, c)
    return total


def convolution_value(
    x: GradedElement, y: GradedElement, s_word: Word, u_word: Word
) -> Scalar:
    """Sum over all middle configurations T of kernel(x)(S,T) * kernel(y)(T,U)."""
    f = x.field
    total = f.zero
    for t_word in enum_B(x.n, x.d):
        total = f.add(
            total, f.mul(kernel_value(x, s_word, t_word), kernel_value(y, t_word, u_word))
        )
    return total


def all_pairs_realizing(g: BipartiteGraph, n: int, d: int) -> List[Tuple[Word, Word]]:
    """Every configuration pair whose pair graph is ``g``, by exhaustion."""
    return [
        (s, u)
        for s in enum_B(n, d)
        for u in enum_B(n, d)
        if pair_graph(s, u, n) == g
    ]


def latin_count(n: int) -> int:
    """Number of n x n Latin squares, by row-wise backtracking.

    Rows are permutations of 1..n; a partial square extends by any row that
    avoids repeating an entry in every column.
    """
    rows = list(itertools.permutations(range(1, n + 1)))
    count = 0

    def extend(chosen: List[Tuple[int, ...]]) -> None:
        nonlocal count
        if len(chosen) == n:
            count += 1
            return
        for row in rows:
            if all(row[j] != prev[j] for prev in chosen for j in range(n)):
                chosen.append(row)
                extend(chosen)
                chosen.pop()

    extend([])
    return count
