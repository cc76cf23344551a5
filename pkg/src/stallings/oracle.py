"""Brute-force cross-checks for the free-factor machinery.

These are deliberately slow, transparent procedures used to validate the
main algorithms at desk scale.  They answer True/False when they finish and
raise :class:`BudgetExceeded` when they cannot, so a truncated enumeration
is never mistaken for a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from .automaton import stallings_graph
from .errors import BudgetExceeded
from .freefactor import apply_istep
from .words import Alphabet, Word


@dataclass(frozen=True)
class OracleBudget:
    """Enumeration limits: candidate tuples may total at most
    ``max_total_length`` letters each, and at most ``max_candidates`` tuples
    are tried."""

    max_total_length: int = 16
    max_candidates: int = 100_000

    def __post_init__(self) -> None:
        if self.max_total_length < 1 or self.max_candidates < 1:
            raise ValueError("budget limits must be positive")


def generates_whole(words: Sequence[Word], alphabet: Alphabet) -> bool:
    """Whether the given words generate the entire free group: their graph
    must be the one-state automaton with a loop per letter."""
    graph = stallings_graph(words, alphabet)
    return graph.num_states == 1 and graph.rank() == alphabet.size


def _reduced_words_up_to(alphabet: Alphabet, max_len: int) -> list[tuple[int, ...]]:
    """All non-empty reduced letter tuples of length <= max_len, in
    length-then-lexicographic order (letter order +1, -1, +2, -2, ...)."""
    order = list(alphabet.signed_letters())
    out: list[tuple[int, ...]] = []
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(max_len):
        new = []
        for w in frontier:
            for a in order:
                if w and w[-1] == -a:
                    continue
                new.append(w + (a,))
        out.extend(new)
        frontier = new
    return out


def federer_jonsson(
    generators: Sequence[Word],
    alphabet: Alphabet,
    budget: OracleBudget = OracleBudget(),
) -> bool:
    """Classical brute-force free-factor test.

    H is a free factor of F exactly when some d = rank(F) - rank(H) extra
    words, none longer than the longest basis element of H, extend a basis
    of H to a generating set of the whole of F.  Tries all such tuples.
    """
    graph = stallings_graph(generators, alphabet)
    basis = list(graph.spanning_tree_basis().words)
    n = len(basis)
    d = alphabet.size - n
    if n == 0:
        return True
    if d < 0:
        return False
    if d == 0:
        return generates_whole(basis, alphabet)
    max_len = max(len(w) for w in basis)
    if d * max_len > budget.max_total_length:
        raise BudgetExceeded(
            f"candidate tuples of total length {d * max_len} exceed the budget of {budget.max_total_length}"
        )
    candidates = _reduced_words_up_to(alphabet, max_len)
    total = math.comb(len(candidates) + d - 1, d)
    if total > budget.max_candidates:
        raise BudgetExceeded(f"{total} candidate tuples exceed the budget of {budget.max_candidates}")
    # unordered tuples suffice: the generated subgroup ignores order
    for combo in combinations_with_replacement(candidates, d):
        extension = [Word(c, alphabet) for c in combo]
        if generates_whole(basis + extension, alphabet):
            return True
    return False


def unpruned_istep_search(
    generators: Sequence[Word],
    alphabet: Alphabet,
    max_nodes: int = 200_000,
) -> bool:
    """The identification-step search without subtree pruning and without
    isomorphism deduplication; meant for small instances only."""
    graph = stallings_graph(generators, alphabet)
    d = len(graph.letters_used()) - graph.rank()
    if d < 0:
        return False
    counter = [0]

    def explore(automaton, depth_left: int) -> bool:
        if depth_left == 0:
            return automaton.num_states == 1
        n = automaton.num_states
        base_rank = automaton.rank()
        for p in range(n):
            for q in range(p + 1, n):
                counter[0] += 1
                if counter[0] > max_nodes:
                    raise BudgetExceeded(f"more than {max_nodes} identification steps explored")
                child = apply_istep(automaton, p, q)
                if child.rank() == base_rank + 1 and explore(child, depth_left - 1):
                    return True
        return False

    return explore(graph, d)
