"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.
"""

import random

import pytest

from stallings import (
    Alphabet,
    BudgetExceeded,
    OracleBudget,
    Word,
    complement_in_free,
    complement_in_subgroup,
    federer_jonsson,
    generates_whole,
    is_free_factor_of,
    is_free_factor_of_free,
    is_free_factor_via_embedding,
    stallings_graph,
    unpruned_istep_search,
)
from stallings.bench import fit_exponent, median_nodes, random_reduced_word, run_bench


def report(number, name, ok, details=""):
    line = f"[acceptance {number}] {name}: {'PASS' if ok else 'FAIL'}"
    if details:
        line += f" ({details})"
    print(line)
    assert ok, line


def random_tuple(rng, max_size=3, max_len=20, max_gens=4):
    size = rng.randrange(1, max_size + 1)
    alphabet = Alphabet(size)
    remaining = rng.randrange(1, max_len + 1)
    gens = []
    for _ in range(rng.randrange(1, max_gens + 1)):
        if remaining <= 0:
            break
        n = rng.randrange(1, remaining + 1)
        remaining -= n
        gens.append(random_reduced_word(rng, alphabet, n))
    return gens, alphabet


@pytest.fixture(scope="module")
def corpus():
    rng = random.Random(20_200)
    return [random_tuple(rng) for _ in range(200)]


def test_criterion_1_folding_order_uniqueness(corpus):
    rng = random.Random(101)
    mismatches = 0
    for gens, alphabet in corpus:
        digests = {
            stallings_graph(gens, alphabet, rng=random.Random(rng.random())).digest
            for _ in range(5)
        }
        if len(digests) != 1:
            mismatches += 1
    report(1, "graph unique under folding order", mismatches == 0, f"200 tuples x 5 orders, {mismatches} mismatches")


def test_criterion_2_rank_formula_and_basis_regeneration(corpus):
    violations = 0
    for gens, alphabet in corpus:
        graph = stallings_graph(gens, alphabet)
        tb = graph.spanning_tree_basis()
        edges = sum(1 for _ in graph.edges())
        if graph.rank() != edges - graph.num_states + 1 or graph.rank() != len(tb.words):
            violations += 1
            continue
        if stallings_graph(list(tb.words), alphabet).digest != graph.digest:
            violations += 1
    report(2, "rank formula and basis regeneration", violations == 0, f"200 graphs, {violations} violations")


def test_criterion_3_membership_oracle_equivalence():
    rng = random.Random(303)
    disagreements = 0
    for _ in range(500):
        gens, alphabet = random_tuple(rng)
        word = random_reduced_word(rng, alphabet, rng.randrange(0, 12))
        graph = stallings_graph(gens, alphabet)
        by_trace = graph.member(word)
        by_graph = stallings_graph(gens + [word], alphabet).digest == graph.digest
        if by_trace != by_graph:
            disagreements += 1
    report(3, "membership equals graph equality", disagreements == 0, f"500 pairs, {disagreements} disagreements")


GROUND_TRUTH = [
    # (generators, expected verdict) over the alphabet {a, b}
    ("ab", True),
    ("a", True),
    ("aa", False),
    ("abAB", False),
    ("aa,b", False),
    # subsets of bases
    ("a,b", True),
    ("b", True),
    ("ab,b", True),
]


def _parse(gens_text, alphabet):
    from stallings import parse_word

    return [parse_word(t, alphabet) for t in gens_text.split(",")] if gens_text else []


@pytest.fixture(scope="module")
def ground_truth_verdicts():
    alphabet = Alphabet(2)
    results = []
    for text, expected in GROUND_TRUTH:
        gens = _parse(text, alphabet)
        verdict = is_free_factor_of_free(gens, alphabet)
        oracle = federer_jonsson(gens, alphabet, OracleBudget(max_total_length=16, max_candidates=50_000))
        results.append((text, gens, alphabet, expected, verdict, oracle))
    return results


def test_criterion_4_fixed_ground_truth(ground_truth_verdicts):
    wrong = [
        text
        for text, _, _, expected, verdict, oracle in ground_truth_verdicts
        if verdict.is_free_factor != expected or oracle != expected
    ]
    report(4, "fixed free-factor cases match brute force", not wrong, f"{len(ground_truth_verdicts)} cases, wrong: {wrong or 'none'}")


def test_criterion_5_oracle_agreement_sweep():
    rng = random.Random(505)
    budget = OracleBudget(max_total_length=12, max_candidates=2000)
    fj_checked = fj_agree = 0
    prune_checked = prune_agree = 0
    attempts = 0
    while fj_checked < 500 and attempts < 3000:
        attempts += 1
        gens, alphabet = random_tuple(rng, max_size=3, max_len=8, max_gens=3)
        verdict = is_free_factor_of_free(gens, alphabet).is_free_factor
        try:
            if unpruned_istep_search(gens, alphabet, max_nodes=100_000) == verdict:
                prune_agree += 1
            prune_checked += 1
        except BudgetExceeded:
            pass
        try:
            if federer_jonsson(gens, alphabet, budget) == verdict:
                fj_agree += 1
            fj_checked += 1
        except BudgetExceeded:
            continue
    ok = fj_checked >= 500 and fj_agree == fj_checked and prune_agree == prune_checked
    report(
        5,
        "oracle agreement sweep",
        ok,
        f"brute force {fj_agree}/{fj_checked} agree, unpruned {prune_agree}/{prune_checked} agree, {attempts} instances",
    )


def _random_k_with_basis(rng):
    while True:
        gens, alphabet = random_tuple(rng, max_size=3, max_len=12, max_gens=3)
        graph = stallings_graph(gens, alphabet)
        basis = list(graph.spanning_tree_basis().words)
        if basis:
            return gens, alphabet, graph, basis


def _random_member(rng, basis, alphabet):
    word = Word((), alphabet)
    for _ in range(rng.randrange(1, 4)):
        piece = rng.choice(basis)
        word = word * (piece if rng.random() < 0.5 else piece.inverse())
    return word


@pytest.fixture(scope="module")
def hk_suite():
    rng = random.Random(606)
    constructed = []
    while len(constructed) < 100:
        k_gens, alphabet, graph, basis = _random_k_with_basis(rng)
        subset = [b for b in basis if rng.random() < 0.6]
        if not subset:
            continue
        constructed.append((subset, k_gens, alphabet))
    random_pairs = []
    while len(random_pairs) < 100:
        k_gens, alphabet, graph, basis = _random_k_with_basis(rng)
        h_gens = [_random_member(rng, basis, alphabet) for _ in range(rng.randrange(1, 3))]
        random_pairs.append((h_gens, k_gens, alphabet))
    return constructed, random_pairs


def test_criterion_6_subgroup_free_factor_suite(hk_suite):
    constructed, random_pairs = hk_suite
    failures = 0
    for h_gens, k_gens, alphabet in constructed:
        if not is_free_factor_of(h_gens, k_gens, alphabet).is_free_factor:
            failures += 1
    disagreements = 0
    for h_gens, k_gens, alphabet in random_pairs:
        first = is_free_factor_of(h_gens, k_gens, alphabet)
        second = is_free_factor_via_embedding(h_gens, k_gens, alphabet)
        if first.is_free_factor != second.is_free_factor or first.contained != second.contained:
            disagreements += 1
    ok = failures == 0 and disagreements == 0
    report(
        6,
        "subgroup free-factor suite",
        ok,
        f"100 constructed positives ({failures} failures), 100 random pairs ({disagreements} disagreements)",
    )


def _check_free_complement(gens, alphabet):
    graph = stallings_graph(gens, alphabet)
    basis = graph.spanning_tree_basis().words
    comp = complement_in_free(gens, alphabet)
    if len(basis) + len(comp) != alphabet.size:
        return "size"
    if not generates_whole(list(basis) + comp, alphabet):
        return "generation"
    used = set(graph.letters_used())
    bound = 2 * graph.q0_diameter()
    for word in comp:
        if len(word) == 1 and abs(word.letters[0]) not in used:
            continue  # unused letter appended to extend the basis to all of A
        if len(word) > bound:
            return "length"
    return None


def _check_subgroup_complement(h_gens, k_gens, alphabet):
    h_graph = stallings_graph(h_gens, alphabet)
    k_graph = stallings_graph(k_gens, alphabet)
    comp = complement_in_subgroup(h_gens, k_gens, alphabet)
    basis = h_graph.spanning_tree_basis().words
    if len(basis) + len(comp) != k_graph.rank():
        return "size"
    if stallings_graph(list(basis) + comp, alphabet).digest != k_graph.digest:
        return "generation"
    bound = max(2 * h_graph.q0_diameter(), 1 + 2 * k_graph.q0_diameter())
    if any(len(word) > bound for word in comp):
        return "length"
    return None


def test_criterion_7_complement_validity(ground_truth_verdicts, hk_suite):
    violations = []
    checked = 0
    for text, gens, alphabet, expected, verdict, _ in ground_truth_verdicts:
        if verdict.is_free_factor:
            checked += 1
            why = _check_free_complement(gens, alphabet)
            if why:
                violations.append((text, why))
    constructed, random_pairs = hk_suite
    for h_gens, k_gens, alphabet in constructed:
        checked += 1
        why = _check_subgroup_complement(h_gens, k_gens, alphabet)
        if why:
            violations.append(("constructed", why))
    for h_gens, k_gens, alphabet in random_pairs:
        if is_free_factor_of(h_gens, k_gens, alphabet).is_free_factor:
            checked += 1
            why = _check_subgroup_complement(h_gens, k_gens, alphabet)
            if why:
                violations.append(("random-pair", why))
    report(7, "complement validity and length bounds", not violations, f"{checked} complements checked, violations: {violations or 'none'}")


def test_criterion_8_search_scaling():
    rows = run_bench([25, 50, 100], d=1, repeats=3, seed=0)
    exponent = fit_exponent(rows)
    slowest = max(row.millis for row in rows if row.l == 100)
    ok = exponent <= 2.5 and slowest < 10_000
    med = median_nodes(rows)
    report(
        8,
        "search scaling at rank gap 1",
        ok,
        f"median nodes {med}, fit exponent {exponent:.2f} <= 2.5, slowest l=100 instance {slowest:.0f} ms < 10000 ms",
    )
