"""Finite words and ultimately periodic infinite words, with the prefix metric.

Every infinite word handled by the package has the shape u·v^ω. Instances of
UPWord are canonicalized on construction (primitive period, shortest
preperiod), so two instances denote the same infinite word exactly when their
fields are equal.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from itertools import product
from random import Random
from typing import Iterable, Iterator, Optional, Union

logger = logging.getLogger(__name__)

EMPTY_WORD_TEXT = "-"
_RESERVED = frozenset("-()")
_UPWORD_PATTERN = re.compile(r"^([^()]*)\(([^()]+)\)$")


class WordError(ValueError):
    """Base exception for malformed words and alphabet mismatches."""

    pass


class Extent(str, Enum):
    """Unbounded results."""

    INFINITE = "INFINITE"


INFINITE = Extent.INFINITE


@dataclass(frozen=True, slots=True)
class Alphabet:
    """Ordered set of single-character letters."""

    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise WordError("Alphabet must be non-empty")
        if len(set(self.letters)) != len(self.letters):
            raise WordError(f"Duplicate letters in alphabet {self.letters}")
        for letter in self.letters:
            if len(letter) != 1 or letter in _RESERVED or letter.isspace():
                raise WordError(
                    f"Invalid letter {letter!r}: letters are single characters "
                    f"other than whitespace and {''.join(sorted(_RESERVED))}"
                )

    @classmethod
    def of(cls, letters: Iterable[str]) -> Alphabet:
        return cls(tuple(letters))

    def __contains__(self, letter: object) -> bool:
        return letter in self.letters

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(self.letters)

    @property
    def is_binary(self) -> bool:
        return set(self.letters) == {"0", "1"}

    def check(self, letters: str) -> None:
        """Raise WordError unless every letter belongs to the alphabet."""
        foreign = set(letters).difference(self.letters)
        if foreign:
            raise WordError(
                f"Letters {''.join(sorted(foreign))!r} are not in alphabet {{{self}}}"
            )


BINARY = Alphabet(("0", "1"))


@dataclass(frozen=True, slots=True)
class FiniteWord:
    """A finite word; the empty word is written "-"."""

    letters: str = ""
    alphabet: Alphabet = BINARY

    def __post_init__(self) -> None:
        self.alphabet.check(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __str__(self) -> str:
        return self.letters or EMPTY_WORD_TEXT

    def __add__(self, other: FiniteWord) -> FiniteWord:
        _require_same_alphabet(self.alphabet, other.alphabet)
        return FiniteWord(self.letters + other.letters, self.alphabet)

    def __pow__(self, exponent: int) -> FiniteWord:
        return FiniteWord(self.letters * exponent, self.alphabet)

    def is_prefix_of(self, other: FiniteWord) -> bool:
        return other.letters.startswith(self.letters)


@dataclass(frozen=True, slots=True)
class UPWord:
    """The infinite word u·v^ω, held in canonical form."""

    u: str
    v: str
    alphabet: Alphabet = BINARY

    def __post_init__(self) -> None:
        if not self.v:
            raise WordError("The period of an infinite word must be non-empty")
        self.alphabet.check(self.u)
        self.alphabet.check(self.v)
        u, v = _canonical_fields(self.u, self.v)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __str__(self) -> str:
        return f"{self.u}({self.v})"

    @property
    def preperiod(self) -> FiniteWord:
        return FiniteWord(self.u, self.alphabet)

    @property
    def period(self) -> FiniteWord:
        return FiniteWord(self.v, self.alphabet)

    def letter_at(self, index: int) -> str:
        if index < 0:
            raise WordError(f"Letter index must be non-negative, got {index}")
        if index < len(self.u):
            return self.u[index]
        return self.v[(index - len(self.u)) % len(self.v)]

    def expand(self, n: int) -> str:
        """The first n letters as a plain string."""
        if n <= len(self.u):
            return self.u[:n]
        rest = n - len(self.u)
        repeats = -(-rest // len(self.v))
        return self.u + (self.v * repeats)[:rest]


def _primitive_root(v: str) -> str:
    # The first non-trivial occurrence of v in vv is at the primitive root length.
    return v[: (v + v).find(v, 1)]


def _canonical_fields(u: str, v: str) -> tuple[str, str]:
    v = _primitive_root(v)
    while u and u[-1] == v[-1]:
        u = u[:-1]
        v = v[-1] + v[:-1]
    return u, v


def _require_same_alphabet(first: Alphabet, second: Alphabet) -> None:
    if first != second:
        raise WordError(f"Alphabet mismatch: {{{first}}} vs {{{second}}}")


def canonicalize(u: FiniteWord, v: FiniteWord) -> UPWord:
    """Canonical representation of u·v^ω."""
    _require_same_alphabet(u.alphabet, v.alphabet)
    return UPWord(u.letters, v.letters, u.alphabet)


def prefix(x: UPWord, n: int) -> FiniteWord:
    """The first n letters of x."""
    if n < 0:
        raise WordError(f"Prefix length must be non-negative, got {n}")
    return FiniteWord(x.expand(n), x.alphabet)


def suffix(x: UPWord, n: int) -> UPWord:
    """The tail x[n, ∞)."""
    if n < 0:
        raise WordError(f"Suffix offset must be non-negative, got {n}")
    if n <= len(x.u):
        return UPWord(x.u[n:], x.v, x.alphabet)
    shift = (n - len(x.u)) % len(x.v)
    return UPWord("", x.v[shift:] + x.v[:shift], x.alphabet)


def concat(w: FiniteWord, x: UPWord) -> UPWord:
    """The infinite word w followed by x."""
    _require_same_alphabet(w.alphabet, x.alphabet)
    return UPWord(w.letters + x.u, x.v, x.alphabet)


def has_factor(w: FiniteWord, factor: FiniteWord) -> bool:
    """True when factor occurs in w."""
    return factor.letters in w.letters


def longest_common_prefix_len(x: UPWord, y: UPWord) -> Union[int, Extent]:
    """Length of the longest common prefix, INFINITE when x = y.

    Two distinct words differ within max(|u_x|, |u_y|) + lcm(|v_x|, |v_y|)
    letters: past that point both are periodic with a common period.
    """
    _require_same_alphabet(x.alphabet, y.alphabet)
    if x == y:
        return INFINITE
    bound = max(len(x.u), len(y.u)) + math.lcm(len(x.v), len(y.v))
    for index, (a, b) in enumerate(zip(x.expand(bound), y.expand(bound))):
        if a != b:
            return index
    raise AssertionError(f"Distinct canonical words {x} and {y} agree on {bound} letters")


@total_ordering
@dataclass(frozen=True, slots=True)
class DyadicDistance:
    """An exact prefix-metric value: 0, or 2^-exponent."""

    exponent: Optional[int] = None

    def __post_init__(self) -> None:
        if self.exponent is not None and self.exponent < 0:
            raise WordError(f"Distance exponent must be non-negative, got {self.exponent}")

    @classmethod
    def power(cls, exponent: int) -> DyadicDistance:
        return cls(exponent)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    @property
    def numerator(self) -> int:
        return 0 if self.exponent is None else 1

    def as_fraction(self) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        return Fraction(1, 2**self.exponent)

    def _sort_key(self) -> tuple[int, int]:
        if self.exponent is None:
            return (0, 0)
        return (1, -self.exponent)

    def __lt__(self, other: DyadicDistance) -> bool:
        if not isinstance(other, DyadicDistance):
            return NotImplemented
        return self._sort_key() < other._sort_key()

    def __str__(self) -> str:
        return "0" if self.exponent is None else f"2^-{self.exponent}"


ZERO = DyadicDistance()


def prefix_metric(x: UPWord, y: UPWord) -> DyadicDistance:
    """d(x, y) = 2^-m for the longest common prefix length m, 0 when x = y."""
    lcp = longest_common_prefix_len(x, y)
    if lcp is INFINITE:
        return ZERO
    return DyadicDistance.power(lcp)


def complement_letter(letter: str, alphabet: Alphabet = BINARY) -> str:
    """Swap 0 and 1."""
    if not alphabet.is_binary:
        raise WordError(f"Complement needs the binary alphabet, got {{{alphabet}}}")
    if letter == "0":
        return "1"
    if letter == "1":
        return "0"
    raise WordError(f"Not a binary letter: {letter!r}")


def parse_finite(text: str, alphabet: Alphabet = BINARY) -> FiniteWord:
    text = text.strip()
    if text == EMPTY_WORD_TEXT:
        text = ""
    return FiniteWord(text, alphabet)


def parse_upword(text: str, alphabet: Alphabet = BINARY) -> UPWord:
    """Parse the "u(v)" syntax; non-canonical input is accepted."""
    match = _UPWORD_PATTERN.match(text.strip())
    if match is None:
        raise WordError(f"Invalid infinite word {text!r}: expected u(v) with v non-empty")
    u = match.group(1)
    if u == EMPTY_WORD_TEXT:
        u = ""
    return UPWord(u, match.group(2), alphabet)


def all_words(alphabet: Alphabet, n: int) -> Iterator[str]:
    """All words of length n, in lexicographic order of the alphabet."""
    return ("".join(letters) for letters in product(alphabet.letters, repeat=n))


def random_upword(
    rng: Random,
    max_preperiod: int = 6,
    max_period: int = 6,
    alphabet: Alphabet = BINARY,
) -> UPWord:
    pre = "".join(rng.choice(alphabet.letters) for _ in range(rng.randint(0, max_preperiod)))
    per = "".join(rng.choice(alphabet.letters) for _ in range(rng.randint(1, max_period)))
    return UPWord(pre, per, alphabet)


ONES = UPWord("", "1")
