"""Elements of Γ(B4) as words over the generators p, q, α, ε.

A generator word s₁s₂…sₖ denotes the map x ↦ x s̄₁ s̄₂ … s̄ₖ. β is accepted
as shorthand for αq. All generators are involutions, so the inverse of a
word is its reversal.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Optional, Union

from app.models.schemas import KleinTableReport, VerificationReport
from app.services import b4
from app.services.b4 import ALPHA, EPSILON, P, Q
from app.services.mealy import (
    InitialMachine,
    canonical_key,
    equivalent,
    identity_machine,
    is_identity,
    minimize,
    serial_compose,
    transduce_up,
)
from app.services.words import EMPTY_WORD_TEXT, ONES, UPWord

logger = logging.getLogger(__name__)

BETA = "β"
GENERATORS = (P, Q, ALPHA, EPSILON)
SYMBOLS = GENERATORS + (BETA,)

# Klein letters as vectors over Z2: multiplication is xor.
KLEIN_BITS = {ALPHA: (1, 0), Q: (0, 1), BETA: (1, 1)}
_KLEIN_BY_BITS = {bits: letter for letter, bits in KLEIN_BITS.items()}

ASCII_NAMES = {P: "p", Q: "q", ALPHA: "a", EPSILON: "e", BETA: "b"}
_FROM_TEXT = {name: symbol for symbol, name in ASCII_NAMES.items()} | {s: s for s in SYMBOLS}


class GroupWordError(ValueError):
    """Malformed generator word or invalid group operation argument."""

    pass


class OrderStatus(str, Enum):
    """Order search outcomes that are not a number."""

    EXCEEDS_CAP = "EXCEEDS_CAP"


EXCEEDS_CAP = OrderStatus.EXCEEDS_CAP


@dataclass(frozen=True, slots=True)
class GroupWord:
    """A word over {p, q, α, ε, β}; the empty word is the identity."""

    symbols: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(self.symbols))
        foreign = [symbol for symbol in self.symbols if symbol not in SYMBOLS]
        if foreign:
            raise GroupWordError(f"Not generator symbols: {foreign}")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __add__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.symbols + other.symbols)

    def __pow__(self, exponent: int) -> GroupWord:
        return GroupWord(self.symbols * exponent)

    def __str__(self) -> str:
        return "".join(ASCII_NAMES[symbol] for symbol in self.symbols) or EMPTY_WORD_TEXT

    def pretty(self) -> str:
        return "".join(self.symbols) or "𝕀"

    def inverse(self) -> GroupWord:
        return GroupWord(self.symbols[::-1])

    def machine_states(self) -> tuple[str, ...]:
        """The B4 states to apply, with β expanded and ε dropped."""
        states: list[str] = []
        for symbol in self.symbols:
            if symbol == BETA:
                states.extend((ALPHA, Q))
            elif symbol != EPSILON:
                states.append(symbol)
        return tuple(states)


def parse_group_word(text: str) -> GroupWord:
    """Parse "paq"-style words; a = α, e = ε, b = β, "-" is the identity."""
    text = text.strip()
    if text in ("", EMPTY_WORD_TEXT):
        return GroupWord()
    symbols = []
    for character in text:
        symbol = _FROM_TEXT.get(character)
        if symbol is None:
            raise GroupWordError(
                f"Invalid generator {character!r} in {text!r}: use p, q, a (α), e (ε), b (β)"
            )
        symbols.append(symbol)
    return GroupWord(tuple(symbols))


def apply(word: GroupWord, x: UPWord) -> UPWord:
    """x w̄, applying the state maps left to right."""
    return b4.apply_states(word.machine_states(), x)


def realize(word: GroupWord, minimal: bool = False) -> InitialMachine:
    """A machine inducing w̄, by left-folding serial composition.

    With minimal=True every intermediate machine is minimized.
    """
    states = word.machine_states()
    name = str(word)
    if not states:
        return identity_machine(name="I")
    machine = b4.state_machine(states[0])
    if minimal:
        machine = minimize(machine)
    for state in states[1:]:
        machine = serial_compose(machine, b4.state_machine(state), name=name)
        if minimal:
            machine = minimize(machine)
    return machine


def element_key(word: GroupWord) -> tuple:
    """Hashable identity of the element w̄."""
    return canonical_key(realize(word, minimal=True))


def element_equal(first: GroupWord, second: GroupWord) -> bool:
    return equivalent(realize(first, minimal=True), realize(second, minimal=True))


def machine_power(base: InitialMachine, exponent: int) -> InitialMachine:
    """base composed with itself exponent times, minimized by squaring."""
    if exponent < 0:
        raise GroupWordError(f"Exponent must be non-negative, got {exponent}")
    result = identity_machine(base.input_alphabet, name=f"{base.name}^{exponent}")
    square = minimize(base)
    while exponent:
        if exponent & 1:
            result = minimize(serial_compose(result, square, name=result.name))
        exponent >>= 1
        if exponent:
            square = minimize(serial_compose(square, square, name=square.name))
    return result


def power(word: GroupWord, exponent: int) -> InitialMachine:
    """A minimal machine for w̄^n."""
    return machine_power(realize(word, minimal=True), exponent)


def _return_time(machine: InitialMachine, x: UPWord, cap: int) -> Optional[int]:
    point = x
    for steps in range(1, cap + 1):
        point = transduce_up(machine, point)
        if point == x:
            return steps
    return None


def order(word: GroupWord, cap: int) -> Union[int, OrderStatus]:
    """The smallest n ≤ cap with w̄^n = 𝕀, else EXCEEDS_CAP.

    The order is a multiple of the return time r of 1^ω, so only the powers
    r, 2r, … are tested; if 1^ω does not return within cap steps the order
    exceeds cap.
    """
    if cap < 1:
        raise GroupWordError(f"Order cap must be at least 1, got {cap}")
    base = realize(word, minimal=True)
    if is_identity(base):
        return 1
    stride = _return_time(base, ONES, cap)
    if stride is None:
        logger.info(f"1^ω does not return under {word} within {cap} steps")
        return EXCEEDS_CAP

    step_machine = machine_power(base, stride)
    current = step_machine
    exponent = stride
    while exponent <= cap:
        if is_identity(current):
            return exponent
        current = minimize(serial_compose(current, step_machine, name=str(word)))
        exponent += stride
    return EXCEEDS_CAP


def conjugate(word: GroupWord, by: GroupWord) -> GroupWord:
    """h w h⁻¹."""
    return by + word + by.inverse()


@dataclass(frozen=True, slots=True)
class NormalForm:
    """s a₁ p a₂ p … p aₙ σ with aᵢ ∈ {q, α, β} and s, σ ∈ {λ, p}."""

    lead: bool = False
    core: tuple[str, ...] = ()
    trail: bool = False

    def __post_init__(self) -> None:
        if any(letter not in KLEIN_BITS for letter in self.core):
            raise GroupWordError(f"Normal form core must use q, α, β only: {self.core}")
        if self.lead and self.trail and not self.core:
            raise GroupWordError("pp is not a normal form")

    @property
    def is_identity(self) -> bool:
        return not (self.lead or self.core or self.trail)

    def to_group_word(self) -> GroupWord:
        symbols = [P] if self.lead else []
        for index, letter in enumerate(self.core):
            if index:
                symbols.append(P)
            symbols.append(letter)
        if self.trail:
            symbols.append(P)
        return GroupWord(tuple(symbols))

    def __str__(self) -> str:
        return "IDENTITY" if self.is_identity else str(self.to_group_word())


def _klein_product(first: str, second: str) -> Optional[str]:
    a, b = KLEIN_BITS[first], KLEIN_BITS[second]
    return _KLEIN_BY_BITS.get((a[0] ^ b[0], a[1] ^ b[1]))


def normal_form(word: GroupWord) -> NormalForm:
    """Rewrite to the alternating shape: drop ε, cancel pp, multiply Klein neighbours."""
    stack: list[str] = []
    for symbol in word.symbols:
        if symbol == EPSILON:
            continue
        if symbol == P:
            if stack and stack[-1] == P:
                stack.pop()
            else:
                stack.append(P)
        elif stack and stack[-1] in KLEIN_BITS:
            product = _klein_product(stack.pop(), symbol)
            if product is not None:
                stack.append(product)
        else:
            stack.append(symbol)

    if not stack:
        return NormalForm()
    lead = stack[0] == P
    trail = stack[-1] == P and len(stack) > 1
    return NormalForm(lead, tuple(s for s in stack if s != P), trail)


KLEIN_ELEMENTS = (
    ("I", GroupWord()),
    ("α", GroupWord((ALPHA,))),
    ("q", GroupWord((Q,))),
    ("αq", GroupWord((ALPHA, Q))),
)


def klein_table() -> KleinTableReport:
    """⟨ᾱ, q̄⟩ = {𝕀, ᾱ, q̄, ᾱq̄} is the Klein four-group."""
    report = KleinTableReport(suite="lemma52", elements=[name for name, _ in KLEIN_ELEMENTS])
    identity = GroupWord()

    for i, (name_a, a) in enumerate(KLEIN_ELEMENTS):
        for name_b, b in KLEIN_ELEMENTS[i + 1:]:
            report.add(f"klein.distinct[{name_a},{name_b}]", not element_equal(a, b))
    for name, element in KLEIN_ELEMENTS[1:]:
        report.add(f"klein.involution[{name}]", element_equal(element + element, identity))
    report.add(
        "klein.commute[αq=qα]", element_equal(GroupWord((ALPHA, Q)), GroupWord((Q, ALPHA)))
    )

    names = {element_key(element): name for name, element in KLEIN_ELEMENTS}
    table = [
        [names.get(element_key(a + b), "?") for _, b in KLEIN_ELEMENTS] for _, a in KLEIN_ELEMENTS
    ]
    report.table = table
    closed = all(cell != "?" for row in table for cell in row)
    report.add("klein.closed", closed, " ".join("".join(row) for row in table))
    expected_diagonal = all(table[i][i] == "I" for i in range(len(table)))
    symmetric = all(table[i][j] == table[j][i] for i in range(4) for j in range(4))
    latin = all(len(set(row)) == 4 for row in table)
    report.add(
        "klein.structure",
        closed and expected_diagonal and symmetric and latin,
        "self-inverse, abelian, not cyclic",
    )
    return report


def enumerate_elements(max_len: int) -> list[tuple[int, int]]:
    """(L, number of distinct elements of word length ≤ L) for L = 0..max_len.

    Grows the ball sphere by sphere; ε is skipped since it adds no elements.
    """
    if max_len < 0:
        raise GroupWordError(f"Maximum length must be non-negative, got {max_len}")
    identity = identity_machine(name="I")
    seen = {canonical_key(identity)}
    sphere = [identity]
    generators = [b4.state_machine(state) for state in (P, Q, ALPHA)]
    growth = [(0, 1)]
    for length in range(1, max_len + 1):
        next_sphere = []
        for element in sphere:
            for generator in generators:
                product = minimize(serial_compose(element, generator, name=f"len{length}"))
                key = canonical_key(product)
                if key not in seen:
                    seen.add(key)
                    next_sphere.append(product)
        sphere = next_sphere
        growth.append((length, len(seen)))
        logger.info(f"Word length {length}: {len(seen)} elements, {len(sphere)} new")
    return growth


@lru_cache(maxsize=32)
def realize_eta_power(level: int) -> InitialMachine:
    """Minimal machine for η^ℓ, built as η^(ℓ-1) δ η^(ℓ-1)."""
    if level == 0:
        return minimize(b4.state_machine(P))
    half = realize_eta_power(level - 1)
    name = f"eta{level}"
    middle = serial_compose(half, b4.state_machine(b4.delta(level)), name=name)
    return minimize(serial_compose(minimize(middle), half, name=name))


ORDER_EXPECTATIONS = (
    ("p", 2),
    ("q", 2),
    ("a", 2),
    ("aq", 2),
    ("pq", 8),
    ("pa", 4),
    ("qp", 8),
    ("ap", 4),
)


def verify_lemma55(cap: int) -> VerificationReport:
    """Orders of the generators and their short products, and equal orders for p-conjugates."""
    report = VerificationReport(suite="lemma55")
    for text, expected in ORDER_EXPECTATIONS:
        actual = order(parse_group_word(text), cap)
        report.add(f"lemma55.order[{text}]", actual == expected, f"o = {actual}, expected {expected}")
    for text in ("pq", "pa"):
        word = parse_group_word(text)
        conjugated = conjugate(word, GroupWord((P,)))
        original, moved = order(word, cap), order(conjugated, cap)
        report.add(
            f"lemma54.conjugate[{text}]",
            original == moved,
            f"o({text}) = {original}, o({conjugated}) = {moved}",
        )
    return report


def verify_cor42(max_level: int) -> VerificationReport:
    """η̄^ℓ, ℓ ≤ L, are pairwise distinct: on 1^ω and as machines."""
    report = VerificationReport(suite="cor42")
    images = []
    keys = []
    for level in range(max_level + 1):
        image = b4.apply_states(b4.eta_power(level), ONES)
        images.append(image)
        machine = realize_eta_power(level)
        keys.append(canonical_key(machine))
        report.add(
            f"cor42[l={level}].machine",
            transduce_up(machine, ONES) == image == b4.ones_zero(level),
            f"1^ω η^{level} = {image}, {machine.state_count} states",
        )
    report.add("cor42.images_distinct", len(set(images)) == len(images), f"{len(images)} images")
    report.add("cor42.machines_distinct", len(set(keys)) == len(keys), f"{len(keys)} machines")
    return report


@lru_cache(maxsize=1)
def xi_machine() -> InitialMachine:
    """Minimal machine for ξ = p̄ᾱq̄."""
    return realize(b4.xi(), minimal=True)


def verify_cor57(max_level: int, max_power: int) -> VerificationReport:
    """ξ has infinite order: its powers differ as machines and on 1^ω.

    ξ^k, k ≤ max_power, must have pairwise distinct canonical keys, and
    1^ω ξ^(2^j) = 1^j 00 1^ω for every j ≤ max_level with 1^ω not revisited
    before step 2^max_level.
    """
    report = VerificationReport(suite="cor57")
    base = xi_machine()
    current = identity_machine(name="xi^0")
    keys = [canonical_key(current)]
    for exponent in range(1, max_power + 1):
        current = minimize(serial_compose(current, base, name=f"xi^{exponent}"))
        keys.append(canonical_key(current))
    report.add(
        "cor57.machines_distinct",
        len(set(keys)) == len(keys),
        f"{len(set(keys))} distinct of ξ^0..ξ^{max_power}, last has {current.state_count} states",
    )

    point = ONES
    returned_at = None
    for steps in range(1, 2**max_level + 1):
        point = transduce_up(base, point)
        if point == ONES and returned_at is None:
            returned_at = steps
        if steps & (steps - 1) == 0:
            level = steps.bit_length() - 1
            expected = UPWord("1" * level + "00", "1")
            report.add(f"cor57.separation[j={level}]", point == expected, f"1^ω ξ^{steps} = {point}")
    report.add(
        "cor57.no_return",
        returned_at is None,
        f"1^ω avoided for k ≤ {2**max_level}" if returned_at is None else f"returned at k = {returned_at}",
    )
    logger.info(f"ξ powers checked to {max_power}, 1^ω orbit to {2**max_level}")
    return report
