"""Reduced words over a symmetrized alphabet.

Letters are nonzero integers: ``k`` is the k-th positive generator and
``-k`` its formal inverse.  A word is reduced when it contains no adjacent
pair ``x, -x``.  All values here are immutable and all operations are pure.

Two text syntaxes are supported: compact (``a``-``z`` positive, ``A``-``Z``
inverse, empty string for the identity, alphabets up to size 26) and
numeric (space-separated signed integers, any alphabet size).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import AlphabetMismatch, WordParseError


@dataclass(frozen=True)
class Alphabet:
    """A finite set of free generators, identified by 1..size."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"alphabet size must be a positive integer, got {self.size!r}")

    def letters(self) -> range:
        """Positive letters 1..size."""
        return range(1, self.size + 1)

    def signed_letters(self) -> Iterator[int]:
        """All letters in the canonical exploration order +1, -1, +2, -2, ..."""
        for a in range(1, self.size + 1):
            yield a
            yield -a

    def contains(self, letter: int) -> bool:
        return letter != 0 and abs(letter) <= self.size


def free_reduce(letters) -> tuple[int, ...]:
    """One stack pass deleting adjacent x, -x pairs; confluent, so the
    result is the unique reduced form."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_letters(letters) -> tuple[int, ...]:
    return tuple(-x for x in reversed(letters))


@dataclass(frozen=True)
class Word:
    """A word over a symmetrized alphabet, not necessarily reduced."""

    letters: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        for x in self.letters:
            if x == 0 or abs(x) > self.alphabet.size:
                raise ValueError(f"letter {x} out of range for alphabet of size {self.alphabet.size}")

    @property
    def is_reduced(self) -> bool:
        return all(self.letters[i] != -self.letters[i + 1] for i in range(len(self.letters) - 1))

    def reduce(self) -> "Word":
        if self.is_reduced:
            return self
        return Word(free_reduce(self.letters), self.alphabet)

    def inverse(self) -> "Word":
        return Word(invert_letters(self.letters), self.alphabet)

    def __invert__(self) -> "Word":
        return self.inverse()

    def __mul__(self, other: "Word") -> "Word":
        """Group multiplication: concatenate, then reduce."""
        if not isinstance(other, Word):
            return NotImplemented
        if other.alphabet.size != self.alphabet.size:
            raise AlphabetMismatch(
                f"cannot multiply words over alphabets of size {self.alphabet.size} and {other.alphabet.size}"
            )
        return Word(free_reduce(self.letters + other.letters), self.alphabet)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self, numeric=self.alphabet.size > 26)!r}, size={self.alphabet.size})"


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a word in compact or numeric syntax (auto-detected).

    The word is returned as written; no reduction is applied.
    """
    s = text.strip()
    if not s:
        return Word((), alphabet)
    if all(c.isascii() and c.isalpha() for c in s):
        letters = []
        for c in s:
            idx = ord(c.lower()) - ord("a") + 1
            if idx > alphabet.size:
                raise WordParseError(f"letter {c!r} out of range for alphabet of size {alphabet.size}")
            letters.append(-idx if c.isupper() else idx)
        return Word(tuple(letters), alphabet)
    letters = []
    for tok in s.split():
        try:
            k = int(tok)
        except ValueError:
            raise WordParseError(f"cannot parse {tok!r} as a signed letter index") from None
        if k == 0:
            raise WordParseError("letter index 0 is not allowed")
        if abs(k) > alphabet.size:
            raise WordParseError(f"letter index {k} out of range for alphabet of size {alphabet.size}")
        letters.append(k)
    return Word(tuple(letters), alphabet)


def format_word(word: Word, numeric: bool = False) -> str:
    """Render a word in compact syntax, or numeric when requested or forced
    by an alphabet larger than 26."""
    if numeric or word.alphabet.size > 26:
        return " ".join(str(x) for x in word.letters)
    out = []
    for x in word.letters:
        c = chr(ord("a") + abs(x) - 1)
        out.append(c.upper() if x < 0 else c)
    return "".join(out)
