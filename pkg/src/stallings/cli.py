"""Command-line front end.

Subgroups are given as comma-separated generator words (compact syntax by
default, numeric with ``--numeric``).  Exit codes: 0 success (including
negative verdicts), 2 parse error, 3 the candidate subgroup is not
contained in the reference subgroup, 4 a brute-force oracle ran out of
budget, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .automaton import InverseAutomaton, stallings_graph
from .bench import render_scaling_plot, run_bench, write_csv
from .errors import (
    AutomatonParseError,
    BudgetExceeded,
    NotAFreeFactor,
    NotContained,
    WordParseError,
)
from .freefactor import (
    FFVerdict,
    is_free_factor_of,
    is_free_factor_of_free,
    is_free_factor_via_embedding,
)
from .oracle import federer_jonsson
from .words import Alphabet, Word, format_word, parse_word

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_NOT_CONTAINED = 3
EXIT_INCONCLUSIVE = 4


def parse_generators(text: str, alphabet: Alphabet) -> list[Word]:
    """Comma-separated generator words; an empty string means no generators."""
    if not text.strip():
        return []
    return [parse_word(part, alphabet) for part in text.split(",")]


def _add_subgroup_args(parser: argparse.ArgumentParser, with_k: bool = False) -> None:
    parser.add_argument("--alphabet", type=int, required=True, metavar="N", help="number of generators of the ambient free group")
    parser.add_argument("--H", required=True, metavar="WORDS", help="comma-separated generators of the subgroup H")
    if with_k:
        parser.add_argument("--K", metavar="WORDS", help="comma-separated generators of the subgroup K (default: the whole free group)")
    parser.add_argument("--numeric", action="store_true", help="read and write words as space-separated signed integers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stallings", description="Subgroups of free groups as Stallings graphs: membership, bases, free-factor decisions, complements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="print the subgroup graph in the line-based text format")
    _add_subgroup_args(p)

    p = sub.add_parser("member", help="decide membership of a word in the subgroup")
    _add_subgroup_args(p)
    p.add_argument("--word", required=True, metavar="WORD")
    p.add_argument("--oracle", action="store_true", help="cross-check against graph-equality of the extended subgroup")

    p = sub.add_parser("basis", help="print the spanning-tree basis of the subgroup")
    _add_subgroup_args(p)
    p.add_argument("--oracle", action="store_true", help="cross-check membership and regeneration of the graph")

    p = sub.add_parser("rank", help="print the rank of the subgroup")
    _add_subgroup_args(p)
    p.add_argument("--oracle", action="store_true", help="cross-check the edge count formula against the basis size")

    p = sub.add_parser("is-ff", help="decide the free-factor relation H <= K (or H <= F without --K)")
    _add_subgroup_args(p, with_k=True)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--oracle", action="store_true", help="cross-check the verdict against a brute-force oracle")
    p.add_argument("--no-prune", action="store_true", help="disable the non-incrementing-step subtree pruning")
    p.add_argument("--deterministic", action="store_true", help="accepted for compatibility; the search is always sequential and deterministic")

    p = sub.add_parser("complement", help="print a complement basis for a free factor")
    _add_subgroup_args(p, with_k=True)

    p = sub.add_parser("export-dot", help="print the subgroup graph in GraphViz DOT format")
    _add_subgroup_args(p)

    p = sub.add_parser("bench", help="time the free-factor search on random instances, emit CSV and optionally a figure")
    p.add_argument("--sizes", default="", metavar="L1,L2,...", help="comma-separated total generator lengths (empty: header-only CSV)")
    p.add_argument("--d", type=int, default=1, help="target rank gap of the instances (default 1)")
    p.add_argument("--repeats", type=int, default=3, help="instances per size (default 3)")
    p.add_argument("--gens", type=int, default=1, help="generators per instance (default 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--out", metavar="FILE", help="write the CSV here instead of stdout")
    p.add_argument("--plot", metavar="FILE", help="render the scaling figure to this file")
    return parser


def _fmt(word: Word, numeric: bool) -> str:
    return format_word(word, numeric=numeric)


def _print_verdict(verdict: FFVerdict, numeric: bool, as_json: bool) -> None:
    if as_json:
        payload = {
            "verdict": "YES" if verdict.is_free_factor else "NO",
            "witness": [
                {"p": s.p, "q": s.q, "word": _fmt(s.witness_word, numeric)}
                for s in (verdict.witness.steps if verdict.witness else ())
            ],
            "complement": [_fmt(w, numeric) for w in (verdict.complement or ())],
            "stats": {"nodes_explored": verdict.nodes_explored, "depth": verdict.depth},
        }
        print(json.dumps(payload))
        return
    if not verdict.is_free_factor:
        print("NO" if verdict.contained else "NO (H is not contained in K)")
        return
    print("YES")
    for s in verdict.witness.steps if verdict.witness else ():
        print(f"identify {s.p} {s.q} adds {_fmt(s.witness_word, numeric)}")
    print("complement: " + ",".join(_fmt(w, numeric) for w in (verdict.complement or ())))


def _cmd_is_ff(args) -> int:
    alphabet = Alphabet(args.alphabet)
    h_gens = parse_generators(args.H, alphabet)
    prune = not args.no_prune
    if args.K is None:
        verdict = is_free_factor_of_free(h_gens, alphabet, prune=prune)
        if args.oracle:
            reference = federer_jonsson(h_gens, alphabet)
            if reference != verdict.is_free_factor:
                print(f"ORACLE DISAGREEMENT: search says {verdict.is_free_factor}, brute force says {reference}", file=sys.stderr)
                return EXIT_ERROR
        _print_verdict(verdict, args.numeric, args.json)
        return EXIT_OK
    k_gens = parse_generators(args.K, alphabet)
    primary = is_free_factor_of(h_gens, k_gens, alphabet, prune=prune)
    reference = None
    if args.oracle or primary.is_free_factor:
        reference = is_free_factor_via_embedding(h_gens, k_gens, alphabet, prune=prune)
    if args.oracle and primary.is_free_factor != reference.is_free_factor:
        print(f"ORACLE DISAGREEMENT: basis rewriting says {primary.is_free_factor}, embedding search says {reference.is_free_factor}", file=sys.stderr)
        return EXIT_ERROR
    # report the embedding-based witness/complement: it replays from the
    # graph of H over the original alphabet
    shown = FFVerdict(
        primary.is_free_factor,
        contained=primary.contained,
        witness=reference.witness if reference else None,
        complement=reference.complement if reference else None,
        nodes_explored=primary.nodes_explored,
        depth=primary.depth,
    )
    _print_verdict(shown, args.numeric, args.json)
    return EXIT_OK if primary.contained else EXIT_NOT_CONTAINED


def _cmd_member(args) -> int:
    alphabet = Alphabet(args.alphabet)
    gens = parse_generators(args.H, alphabet)
    word = parse_word(args.word, alphabet)
    graph = stallings_graph(gens, alphabet)
    answer = graph.member(word)
    if args.oracle:
        extended = stallings_graph(gens + [word], alphabet)
        if (extended.digest == graph.digest) != answer:
            print("ORACLE DISAGREEMENT: membership trace vs graph equality", file=sys.stderr)
            return EXIT_ERROR
    print("YES" if answer else "NO")
    return EXIT_OK


def _cmd_basis(args) -> int:
    alphabet = Alphabet(args.alphabet)
    gens = parse_generators(args.H, alphabet)
    graph = stallings_graph(gens, alphabet)
    basis = graph.spanning_tree_basis()
    if args.oracle:
        regenerated = stallings_graph(list(basis.words), alphabet)
        if not all(graph.member(w) for w in basis.words) or regenerated.digest != graph.digest:
            print("ORACLE DISAGREEMENT: basis does not regenerate the graph", file=sys.stderr)
            return EXIT_ERROR
    for w in basis.words:
        print(_fmt(w, args.numeric))
    return EXIT_OK


def _cmd_rank(args) -> int:
    alphabet = Alphabet(args.alphabet)
    graph = stallings_graph(parse_generators(args.H, alphabet), alphabet)
    if args.oracle and graph.rank() != len(graph.spanning_tree_basis().words):
        print("ORACLE DISAGREEMENT: edge formula vs basis size", file=sys.stderr)
        return EXIT_ERROR
    print(graph.rank())
    return EXIT_OK


def _cmd_graph(args) -> int:
    alphabet = Alphabet(args.alphabet)
    graph = stallings_graph(parse_generators(args.H, alphabet), alphabet)
    sys.stdout.write(graph.to_text())
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    alphabet = Alphabet(args.alphabet)
    graph = stallings_graph(parse_generators(args.H, alphabet), alphabet)
    sys.stdout.write(graph.to_dot())
    return EXIT_OK


def _cmd_complement(args) -> int:
    from .freefactor import complement_in_free, complement_in_subgroup

    alphabet = Alphabet(args.alphabet)
    h_gens = parse_generators(args.H, alphabet)
    if args.K is None:
        words = complement_in_free(h_gens, alphabet)
    else:
        words = complement_in_subgroup(h_gens, parse_generators(args.K, alphabet), alphabet)
    for w in words:
        print(_fmt(w, args.numeric))
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rows = run_bench(sizes, d=args.d, repeats=args.repeats, seed=args.seed, n_gens=args.gens, prune=not args.no_prune)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    if args.plot:
        render_scaling_plot(rows, args.plot)
    return EXIT_OK


_COMMANDS = {
    "graph": _cmd_graph,
    "member": _cmd_member,
    "basis": _cmd_basis,
    "rank": _cmd_rank,
    "is-ff": _cmd_is_ff,
    "complement": _cmd_complement,
    "export-dot": _cmd_export_dot,
    "bench": _cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (WordParseError, AutomatonParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotContained as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONTAINED
    except BudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except NotAFreeFactor as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
