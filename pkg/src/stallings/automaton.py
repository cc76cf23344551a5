"""Inverse automata and the Stallings graph of a finitely generated subgroup.

An :class:`InverseAutomaton` is a base-pointed, deterministic, connected,
edge-symmetric automaton over a symmetrized alphabet: whenever there is an
edge (p, a, q) there is the dual edge (q, -a, p).  The reduced words reading
base-to-base loops form a subgroup of the free group, and every finitely
generated subgroup has exactly one reduced such automaton, its Stallings
graph.  Construction goes through :class:`AutomatonBuilder`, which supports
expansions (gluing word-labeled paths), folding (merging equally labeled
edges until deterministic) and pruning (deleting non-base degree-one
states).

State numbering of automata returned by the high-level constructors is
canonical: breadth-first from the base, exploring letters in the order
+1, -1, +2, -2, ...  Two reduced automata are base-pointed isomorphic
exactly when their canonical text forms (and hence their digests) agree.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import AlphabetMismatch, AutomatonParseError
from .words import Alphabet, Word, free_reduce, invert_letters


def _positive_edge(p: int, a: int, q: int) -> tuple[int, int, int]:
    """Normalize a directed labeled edge to its positive-letter orientation."""
    return (p, a, q) if a > 0 else (q, -a, p)


class InverseAutomaton:
    """Immutable deterministic dual automaton with a base state.

    ``delta[s]`` maps each signed letter with an edge at ``s`` to its target;
    dual entries are always stored for both orientations.  Instances are
    treated as immutable after construction; do not mutate ``delta``.
    """

    def __init__(self, alphabet: Alphabet, delta: list[dict[int, int]], base: int = 0):
        self.alphabet = alphabet
        self.base = base
        self._delta = delta
        self._digest: str | None = None
        self._tree: tuple[list[int], list[int], list[tuple[int, ...]]] | None = None

    @classmethod
    def from_edges(
        cls,
        alphabet: Alphabet,
        num_states: int,
        edges: Iterable[tuple[int, int, int]],
        base: int = 0,
    ) -> "InverseAutomaton":
        """Build and validate an automaton from (state, letter, state) triples.

        Dual edges are added automatically; determinism and connectivity are
        checked.
        """
        if num_states < 1:
            raise ValueError("an automaton needs at least one state")
        if not 0 <= base < num_states:
            raise ValueError(f"base state {base} out of range")
        delta: list[dict[int, int]] = [{} for _ in range(num_states)]

        def put(p: int, a: int, q: int) -> None:
            cur = delta[p].get(a)
            if cur is not None and cur != q:
                raise AutomatonParseError(f"not deterministic: ({p}, {a}) maps to both {cur} and {q}")
            delta[p][a] = q

        for p, a, q in edges:
            if not (0 <= p < num_states and 0 <= q < num_states):
                raise AutomatonParseError(f"edge ({p}, {a}, {q}) references an unknown state")
            if not alphabet.contains(a):
                raise AutomatonParseError(f"edge label {a} out of range for alphabet of size {alphabet.size}")
            put(p, a, q)
            put(q, -a, p)
        aut = cls(alphabet, delta, base)
        if any(n < 0 for n in aut._canonical_order()):
            raise AutomatonParseError("automaton is not connected from the base state")
        return aut

    # -- basic queries -------------------------------------------------

    @property
    def num_states(self) -> int:
        return len(self._delta)

    def step(self, state: int, letter: int) -> int | None:
        return self._delta[state].get(letter)

    def read(self, state: int, letters: Sequence[int]) -> int | None:
        """Follow a letter sequence; None as soon as a transition is missing."""
        s: int | None = state
        for a in letters:
            s = self._delta[s].get(a)
            if s is None:
                return None
        return s

    def degree(self, state: int) -> int:
        return len(self._delta[state])

    @property
    def is_reduced(self) -> bool:
        """No state except the base is incident to a single edge end."""
        return all(s == self.base or len(t) != 1 for s, t in enumerate(self._delta))

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Positive-letter edges, each once, sorted by (state, letter)."""
        for p, trans in enumerate(self._delta):
            for a in sorted(x for x in trans if x > 0):
                yield (p, a, trans[a])

    def letters_used(self) -> tuple[int, ...]:
        present = {abs(a) for trans in self._delta for a in trans}
        return tuple(sorted(present))

    def rank(self) -> int:
        """Rank of the represented subgroup: positive edges - states + 1."""
        e = sum(1 for trans in self._delta for a in trans if a > 0)
        return e - self.num_states + 1

    def member(self, word: Word) -> bool:
        """Whether the reduced form of ``word`` reads a base-to-base loop."""
        if word.alphabet.size != self.alphabet.size:
            raise AlphabetMismatch(
                f"word over alphabet of size {word.alphabet.size}, automaton over {self.alphabet.size}"
            )
        return self.read(self.base, word.reduce().letters) == self.base

    def q0_diameter(self) -> int:
        """Largest breadth-first distance from the base state."""
        _, _, words = self._base_tree()
        return max(len(w) for w in words)

    # -- canonical form ------------------------------------------------

    def _canonical_order(self) -> list[int]:
        """Map old state ids to breadth-first discovery ids (-1 if unreachable)."""
        order = [-1] * self.num_states
        order[self.base] = 0
        queue = [self.base]
        nxt = 1
        for s in queue:
            trans = self._delta[s]
            for a in self.alphabet.signed_letters():
                t = trans.get(a)
                if t is not None and order[t] < 0:
                    order[t] = nxt
                    nxt += 1
                    queue.append(t)
        return order

    def canonicalize(self) -> "InverseAutomaton":
        """Relabel states in canonical breadth-first order."""
        order = self._canonical_order()
        if all(order[s] == s for s in range(self.num_states)):
            return self
        delta: list[dict[int, int]] = [{} for _ in range(self.num_states)]
        for s, trans in enumerate(self._delta):
            delta[order[s]] = {a: order[t] for a, t in trans.items()}
        return InverseAutomaton(self.alphabet, delta, 0)

    def canonical_form(self) -> tuple[tuple[int, ...], str]:
        """The canonical relabeling (old id -> canonical id) together with
        the digest of the relabeled automaton."""
        return tuple(self._canonical_order()), self.digest

    @property
    def digest(self) -> str:
        """Hex digest of the canonical text form; equal digests mean
        base-pointed isomorphic automata."""
        if self._digest is None:
            canon = self.canonicalize()
            self._digest = hashlib.sha256(canon.to_text().encode("ascii")).hexdigest()
        return self._digest

    def isomorphic(self, other: "InverseAutomaton") -> bool:
        return self.digest == other.digest

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InverseAutomaton):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.base == other.base
            and self._delta == other._delta
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<InverseAutomaton states={self.num_states} rank={self.rank()} alphabet={self.alphabet.size}>"

    # -- base-rooted geodesic tree --------------------------------------

    def _base_tree(self) -> tuple[list[int], list[int], list[tuple[int, ...]]]:
        """Breadth-first tree from the base in canonical letter order.

        Returns (parent state, letter into the state, geodesic word) per
        state; the base has parent -1 and the empty word.
        """
        if self._tree is None:
            parent = [-1] * self.num_states
            letter = [0] * self.num_states
            words: list[tuple[int, ...]] = [()] * self.num_states
            seen = [False] * self.num_states
            seen[self.base] = True
            queue = [self.base]
            for s in queue:
                trans = self._delta[s]
                for a in self.alphabet.signed_letters():
                    t = trans.get(a)
                    if t is not None and not seen[t]:
                        seen[t] = True
                        parent[t] = s
                        letter[t] = a
                        words[t] = words[s] + (a,)
                        queue.append(t)
            self._tree = (parent, letter, words)
        return self._tree

    def geodesic_word(self, state: int) -> Word:
        """Shortest word reading base -> state (canonical tie-break)."""
        return Word(self._base_tree()[2][state], self.alphabet)

    def spanning_tree_basis(self) -> "SpanningTreeBasis":
        """Basis of the subgroup from the breadth-first spanning tree.

        Each positive non-tree edge e = (p, a, q) contributes the loop
        u_p a u_q^-1 through the tree geodesics u; these loops freely
        generate the subgroup.
        """
        parent, letter, words = self._base_tree()
        tree = set()
        for s in range(self.num_states):
            if s != self.base:
                tree.add(_positive_edge(parent[s], letter[s], s))
        basis_edges: list[tuple[int, int, int]] = []
        basis_words: list[Word] = []
        for edge in self.edges():
            if edge in tree:
                continue
            p, a, q = edge
            letters = words[p] + (a,) + invert_letters(words[q])
            # no cancellation can occur at either junction for a non-tree edge
            basis_edges.append(edge)
            basis_words.append(Word(letters, self.alphabet))
        return SpanningTreeBasis(frozenset(tree), tuple(basis_edges), tuple(basis_words))

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        """Line-based text form: header plus one line per positive edge."""
        lines = [
            f"alphabet {self.alphabet.size}",
            f"states {self.num_states}",
            f"base {self.base}",
        ]
        lines.extend(f"edge {p} {a} {q}" for p, a, q in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "InverseAutomaton":
        """Parse the line-based text form produced by :meth:`to_text`."""
        size = states = base = None
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "alphabet" and len(parts) == 2:
                    size = int(parts[1])
                elif parts[0] == "states" and len(parts) == 2:
                    states = int(parts[1])
                elif parts[0] == "base" and len(parts) == 2:
                    base = int(parts[1])
                elif parts[0] == "edge" and len(parts) == 4:
                    edges.append((int(parts[1]), int(parts[2]), int(parts[3])))
                else:
                    raise AutomatonParseError(f"line {lineno}: unrecognized line {line!r}")
            except ValueError:
                raise AutomatonParseError(f"line {lineno}: expected integers in {line!r}") from None
        if size is None or states is None or base is None:
            raise AutomatonParseError("missing alphabet/states/base header")
        return cls.from_edges(Alphabet(size), states, edges, base)

    def to_dot(self) -> str:
        """GraphViz DOT form: one directed edge per positive letter; the base
        state is drawn with a double circle."""
        compact = self.alphabet.size <= 26

        def label(a: int) -> str:
            return chr(ord("a") + a - 1) if compact else str(a)

        lines = ["digraph stallings {", "  rankdir=LR;", "  node [shape=circle];"]
        lines.append(f"  {self.base} [shape=doublecircle];")
        for p, a, q in self.edges():
            lines.append(f'  {p} -> {q} [label="{label(a)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SpanningTreeBasis:
    """Spanning tree of an automaton plus the basis indexed by the
    positive edges outside the tree (1-based, in edge enumeration order)."""

    tree: frozenset[tuple[int, int, int]]
    basis_edges: tuple[tuple[int, int, int], ...]
    words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)


class AutomatonBuilder:
    """Mutable dual multigraph used to construct inverse automata.

    Edges may be temporarily nondeterministic (several targets for one
    (state, letter) pair); :meth:`fold` merges states until deterministic,
    :meth:`prune` removes hanging paths, :meth:`finish` freezes the result
    into a canonically numbered :class:`InverseAutomaton`.
    """

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.base = 0
        self._adj: list[dict[int, list[int]]] = [{}]

    @classmethod
    def from_automaton(cls, automaton: InverseAutomaton) -> "AutomatonBuilder":
        b = cls(automaton.alphabet)
        b.base = automaton.base
        b._adj = [{a: [t] for a, t in trans.items()} for trans in automaton._delta]
        return b

    @property
    def num_states(self) -> int:
        return len(self._adj)

    def add_state(self) -> int:
        self._adj.append({})
        return len(self._adj) - 1

    def add_edge(self, p: int, a: int, q: int) -> None:
        """Add an edge and its dual."""
        if not self.alphabet.contains(a):
            raise ValueError(f"letter {a} out of range for alphabet of size {self.alphabet.size}")
        self._adj[p].setdefault(a, []).append(q)
        self._adj[q].setdefault(-a, []).append(p)

    def expand(self, p: int, word: Word, q: int) -> None:
        """Glue a fresh path labeled by a non-empty reduced word from p to q."""
        if not word.letters:
            raise ValueError("cannot expand by the empty word")
        if not word.is_reduced:
            raise ValueError("expansion words must be reduced")
        if word.alphabet.size != self.alphabet.size:
            raise AlphabetMismatch("expansion word over a different alphabet")
        cur = p
        for a in word.letters[:-1]:
            nxt = self.add_state()
            self.add_edge(cur, a, nxt)
            cur = nxt
        self.add_edge(cur, word.letters[-1], q)

    # -- folding ---------------------------------------------------------

    def fold(self, rng=None, identify: Iterable[tuple[int, int]] = ()) -> None:
        """Merge states until deterministic (all equally labeled edges from a
        state point to one target).

        ``identify`` seeds extra state identifications before folding;
        ``rng`` picks the order in which clashes are processed (any order
        reaches the same automaton, which is what the randomized tests
        check).  Near-quadratic worst case.
        """
        adj = self._adj
        n = len(adj)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        pending: list[tuple[int, int]] = list(identify)
        for trans in adj:
            for targets in trans.values():
                first = targets[0]
                pending.extend((first, t) for t in targets[1:])

        while pending:
            i = rng.randrange(len(pending)) if rng is not None else len(pending) - 1
            x, y = pending.pop(i)
            x, y = find(x), find(y)
            if x == y:
                continue
            # keep the state with more edge entries as the representative
            if sum(len(v) for v in adj[x].values()) < sum(len(v) for v in adj[y].values()):
                x, y = y, x
            parent[y] = x
            tx = adj[x]
            for a, targets in adj[y].items():
                cur = tx.get(a)
                if cur is None:
                    tx[a] = targets
                else:
                    cur.extend(targets)
            adj[y] = {}
            # new clashes can only appear at the merged state
            for a, targets in tx.items():
                if len(targets) > 1:
                    roots = []
                    seen = set()
                    for t in targets:
                        r = find(t)
                        if r not in seen:
                            seen.add(r)
                            roots.append(r)
                    tx[a] = roots
                    pending.extend((roots[0], r) for r in roots[1:])

        self._compact(lambda s: find(s) == s, find)

    def _compact(self, live, resolve) -> None:
        """Renumber live states consecutively and collapse target lists."""
        index: dict[int, int] = {}
        order = [s for s in range(len(self._adj)) if live(s)]
        for s in order:
            index[s] = len(index)
        new_adj: list[dict[int, list[int]]] = []
        for s in order:
            trans: dict[int, list[int]] = {}
            for a, targets in self._adj[s].items():
                resolved = {index[resolve(t)] for t in targets}
                if len(resolved) != 1:
                    raise AssertionError("compact called on an unfolded builder")
                trans[a] = [resolved.pop()]
            new_adj.append(trans)
        self.base = index[resolve(self.base)]
        self._adj = new_adj

    def _is_deterministic(self) -> bool:
        return all(len(t) == 1 for trans in self._adj for t in trans.values())

    def prune(self) -> None:
        """Iteratively delete non-base states incident to a single edge end."""
        if not self._is_deterministic():
            raise ValueError("prune requires a folded (deterministic) builder")
        adj = self._adj
        alive = [True] * len(adj)

        def degree(s: int) -> int:
            return sum(len(v) for v in adj[s].values())

        work = [s for s in range(len(adj)) if s != self.base and degree(s) == 1]
        while work:
            s = work.pop()
            if not alive[s] or degree(s) != 1:
                continue
            ((a, targets),) = adj[s].items()
            t = targets[0]
            alive[s] = False
            adj[s] = {}
            del adj[t][-a]
            if t != self.base and degree(t) == 1:
                work.append(t)
        self._compact(lambda s: alive[s], lambda s: s)

    def finish(self) -> InverseAutomaton:
        """Freeze into a canonically numbered automaton."""
        if not self._is_deterministic():
            raise ValueError("finish requires a folded (deterministic) builder")
        delta = [{a: t[0] for a, t in trans.items()} for trans in self._adj]
        return InverseAutomaton(self.alphabet, delta, self.base).canonicalize()


def bouquet(alphabet: Alphabet) -> InverseAutomaton:
    """The one-state automaton with a loop per positive letter; it
    represents the whole free group."""
    delta = [{a: 0 for a in range(-alphabet.size, alphabet.size + 1) if a != 0}]
    return InverseAutomaton(alphabet, delta, 0)


def stallings_graph(
    generators: Iterable[Word],
    alphabet: Alphabet,
    rng=None,
) -> InverseAutomaton:
    """The unique reduced inverse automaton representing the subgroup
    generated by ``generators``.

    Generators are reduced first and identity generators are dropped; an
    empty list yields the one-state automaton of the trivial subgroup.
    ``rng`` only varies the folding order, never the result.
    """
    builder = AutomatonBuilder(alphabet)
    for g in generators:
        if g.alphabet.size != alphabet.size:
            raise AlphabetMismatch(
                f"generator over alphabet of size {g.alphabet.size}, expected {alphabet.size}"
            )
        r = g.reduce()
        if r.letters:
            builder.expand(builder.base, r, builder.base)
    builder.fold(rng=rng)
    builder.prune()
    return builder.finish()


def prune(automaton: InverseAutomaton) -> InverseAutomaton:
    """Reduced copy of a deterministic automaton (hanging paths removed)."""
    b = AutomatonBuilder.from_automaton(automaton)
    b.prune()
    return b.finish()
