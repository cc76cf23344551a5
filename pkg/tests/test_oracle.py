import pytest

from stallings import (
    Alphabet,
    BudgetExceeded,
    OracleBudget,
    bouquet,
    federer_jonsson,
    generates_whole,
    unpruned_istep_search,
)
from stallings.oracle import _reduced_words_up_to
from testutil import w, ws

A1, A2 = Alphabet(1), Alphabet(2)


def test_generates_whole_examples():
    assert generates_whole(ws("a,b"), A2)
    assert not generates_whole(ws("aa,b"), A2)
    assert generates_whole(ws("ab,b"), A2)


def test_candidate_enumeration_order():
    words = _reduced_words_up_to(A2, 2)
    assert words[:4] == [(1,), (-1,), (2,), (-2,)]
    assert all(len(t) == 1 for t in words[:4]) and all(len(t) == 2 for t in words[4:])
    # reduced only: no x followed by -x
    assert all(t[i] != -t[i + 1] for t in words for i in range(len(t) - 1))
    assert len(words) == 4 + 4 * 3


def test_federer_jonsson_examples():
    assert federer_jonsson([w("ab")], A2)
    assert not federer_jonsson([w("aa", 1)], A1)  # rank gap 0: must generate outright
    assert not federer_jonsson([w("abAB")], A2)


def test_federer_jonsson_trivial_and_excess_rank():
    assert federer_jonsson([], A2)
    assert not federer_jonsson(ws("aa,ab,ba,bb"), A2)  # rank 3 > 2


def test_budget_is_an_error_not_a_verdict():
    tight = OracleBudget(max_total_length=2, max_candidates=100)
    with pytest.raises(BudgetExceeded):
        federer_jonsson([w("abab")], A2, tight)  # candidate length 4 > 2
    with pytest.raises(BudgetExceeded):
        federer_jonsson([w("abab")], A2, OracleBudget(max_total_length=40, max_candidates=3))
    with pytest.raises(ValueError):
        OracleBudget(max_total_length=0, max_candidates=1)


def test_unpruned_search_examples():
    assert unpruned_istep_search([w("ab")], A2)
    assert not unpruned_istep_search([w("aa")], A2)
    assert unpruned_istep_search(ws("a,b"), A2)  # one-vertex input, gap 0
    with pytest.raises(BudgetExceeded):
        unpruned_istep_search([w("abab")], A2, max_nodes=1)
