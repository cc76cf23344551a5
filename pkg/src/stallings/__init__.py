"""Stallings graphs for finitely generated subgroups of free groups.

Subgroups are represented as reduced inverse automata; on top of that
representation the package decides membership, computes bases and ranks,
decides the free-factor relation against the ambient free group or another
subgroup, and produces complement bases with replayable witnesses.
"""

from .automaton import (
    AutomatonBuilder,
    InverseAutomaton,
    SpanningTreeBasis,
    bouquet,
    prune,
    stallings_graph,
)
from .errors import (
    AlphabetMismatch,
    AutomatonParseError,
    BudgetExceeded,
    NotAFreeFactor,
    NotContained,
    StallingsError,
    WordParseError,
)
from .freefactor import (
    FFVerdict,
    IStep,
    SearchWitness,
    apply_istep,
    complement_in_free,
    complement_in_subgroup,
    embeds,
    is_free_factor_of,
    is_free_factor_of_free,
    is_free_factor_via_embedding,
    rank_incrementing_children,
    replay_witness,
    rewrite_in_basis,
)
from .oracle import OracleBudget, federer_jonsson, generates_whole, unpruned_istep_search
from .words import Alphabet, Word, format_word, parse_word

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AlphabetMismatch",
    "AutomatonBuilder",
    "AutomatonParseError",
    "BudgetExceeded",
    "FFVerdict",
    "IStep",
    "InverseAutomaton",
    "NotAFreeFactor",
    "NotContained",
    "OracleBudget",
    "SearchWitness",
    "SpanningTreeBasis",
    "StallingsError",
    "Word",
    "WordParseError",
    "apply_istep",
    "bouquet",
    "complement_in_free",
    "complement_in_subgroup",
    "embeds",
    "federer_jonsson",
    "format_word",
    "generates_whole",
    "is_free_factor_of",
    "is_free_factor_of_free",
    "is_free_factor_via_embedding",
    "parse_word",
    "prune",
    "rank_incrementing_children",
    "replay_witness",
    "rewrite_in_basis",
    "stallings_graph",
    "unpruned_istep_search",
]
