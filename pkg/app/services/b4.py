"""The machine B4, the maps of its states, and the morphism η.

B4 has states p, q, α, ε over the alphabet {0, 1}:

    p: 0 -> 1, ε     1 -> 0, ε
    q: 0 -> 0, p     1 -> 1, α
    α: 0 -> 0, ε     1 -> 1, q
    ε: a -> a, ε

Known identities about B4 are re-checked by the verify_* functions below.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Sequence

from app.models.schemas import VerificationReport
from app.services.mealy import InitialMachine, MealyMachine, run_finite, step, transduce_up
from app.services.words import BINARY, ONES, FiniteWord, UPWord, complement_letter

if TYPE_CHECKING:
    from app.services.group import GroupWord

logger = logging.getLogger(__name__)

P = "p"
Q = "q"
ALPHA = "α"
EPSILON = "ε"
STATES = (P, Q, ALPHA, EPSILON)

B4_TABLE = {
    P: {"0": (EPSILON, "1"), "1": (EPSILON, "0")},
    Q: {"0": (P, "0"), "1": (ALPHA, "1")},
    ALPHA: {"0": (EPSILON, "0"), "1": (Q, "1")},
    EPSILON: {"0": (EPSILON, "0"), "1": (EPSILON, "1")},
}

ETA_RULES = {P: (P, Q, P), Q: (ALPHA,), ALPHA: (Q,)}

MorphWord = tuple[str, ...]


class B4Error(ValueError):
    """Invalid argument to a B4 or η operation."""

    pass


@lru_cache
def b4_machine() -> MealyMachine:
    """The machine B4."""
    return MealyMachine("B4", STATES, BINARY, BINARY, B4_TABLE)


@lru_cache(maxsize=None)
def state_machine(state: str) -> InitialMachine:
    """B4 started in state, i.e. the map s̄."""
    if state not in B4_TABLE:
        raise B4Error(f"{state!r} is not a state of B4")
    return b4_machine().at(state)


def state_map(state: str, x: UPWord) -> UPWord:
    """x s̄ = s * x."""
    if state == EPSILON:
        return x
    return transduce_up(state_machine(state), x)


def apply_states(states: Iterable[str], x: UPWord) -> UPWord:
    """x s̄₁ s̄₂ … s̄ₖ, applied left to right."""
    for state in states:
        x = state_map(state, x)
    return x


def run_state(state: str, letters: str) -> tuple[str, str]:
    """(s ∘ u, s * u) as plain strings."""
    final, output = run_finite(b4_machine(), state, FiniteWord(letters))
    return final, output.letters


def eta(word: Sequence[str]) -> MorphWord:
    """Apply p -> pqp, q -> α, α -> q letterwise."""
    if not word:
        raise B4Error("η is defined on non-empty words only")
    image: list[str] = []
    for letter in word:
        rule = ETA_RULES.get(letter)
        if rule is None:
            raise B4Error(f"{letter!r} is outside the domain {{p, q, α}} of η")
        image.extend(rule)
    return tuple(image)


@lru_cache(maxsize=64)
def eta_power(level: int) -> MorphWord:
    """η^ℓ(p); it has 2^(ℓ+1) - 1 letters."""
    if level < 0:
        raise B4Error(f"η power must be non-negative, got {level}")
    word: MorphWord = (P,)
    for _ in range(level):
        word = eta(word)
    return word


def delta(level: int) -> str:
    """The middle letter of η^ℓ(p) for ℓ ≥ 1: q for odd ℓ, α for even ℓ."""
    if level < 1:
        raise B4Error(f"η^{level}(p) has no middle letter")
    return Q if level % 2 == 1 else ALPHA


def xi() -> GroupWord:
    """ξ = p̄ ᾱ q̄."""
    from app.services.group import GroupWord

    return GroupWord((P, ALPHA, Q))


def ones_zero(level: int, tail: str = "") -> UPWord:
    """1^ℓ 0 w 1^ω."""
    return UPWord("1" * level + "0" + tail, "1")


def verify_basis() -> VerificationReport:
    """Basis identities for the first levels of η, plus the table rows they pin."""
    report = VerificationReport(suite="basis")

    for state, letter, expected in (
        (P, "1", (EPSILON, "0")),
        (P, "0", (EPSILON, "1")),
        (Q, "0", (P, "0")),
        (EPSILON, "0", (EPSILON, "0")),
    ):
        actual = step(b4_machine(), state, letter)
        report.add(f"basis.step[{state},{letter}]", actual == expected, f"-> {actual[0]},{actual[1]}")

    one_zero_ones = UPWord("0", "1")
    for state, x, expected in (
        (P, ONES, one_zero_ones),
        (P, one_zero_ones, ONES),
        (Q, one_zero_ones, UPWord("00", "1")),
        (Q, UPWord("00", "1"), one_zero_ones),
        (P, UPWord("00", "1"), UPWord("10", "1")),
        (P, UPWord("10", "1"), UPWord("00", "1")),
    ):
        actual = state_map(state, x)
        report.add(f"basis.map[{state}*{x}]", actual == expected, f"= {actual}")

    for state, letters in ((P, "1"), (P, "0"), (P, "11"), (Q, "01"), (P, "00"), (P, "10"), (Q, "00"), (P, "01")):
        final, _ = run_state(state, letters)
        report.add(f"basis.reset[{state}∘{letters}]", final == EPSILON, f"= {final}")

    sample = UPWord("0110", "10")
    report.add("basis.identity[ε]", state_map(EPSILON, sample) == sample, f"ε*{sample}")
    report.add(
        "basis.identity[ε-table]",
        transduce_up(state_machine(EPSILON), sample) == sample,
        f"ε*{sample}",
    )
    return report


def verify_lemma31(level: int) -> VerificationReport:
    """η^ℓ(p) = η^(ℓ-1)(p) δ η^(ℓ-1)(p) with the stated δ parity, and its length."""
    report = VerificationReport(suite="lemma31")
    word = eta_power(level)
    expected_length = 2 ** (level + 1) - 1
    report.add(
        f"lemma31[l={level}].length",
        len(word) == expected_length,
        f"|η^{level}(p)| = {len(word)}",
    )
    if level == 0:
        report.add("lemma31[l=0].base", word == (P,), "η^0(p) = p")
        return report

    previous = eta_power(level - 1)
    middle = word[len(previous)] if len(word) > len(previous) else None
    expected_middle = Q if level % 2 == 1 else ALPHA
    report.add(
        f"lemma31[l={level}].split",
        word == previous + (middle,) + previous,
        f"η^{level}(p) = η^{level - 1}(p) {middle} η^{level - 1}(p)",
    )
    report.add(
        f"lemma31[l={level}].delta",
        middle == expected_middle,
        f"δ = {middle}, expected {expected_middle}",
    )
    return report


def verify_cor32(level: int) -> VerificationReport:
    """The middle letter δ swaps 1^ℓ0 and 1^ℓ00 under η^(ℓ+1)(p) = η^ℓ(p) δ η^ℓ(p)."""
    report = VerificationReport(suite="cor32")
    middle = Q if level % 2 == 0 else ALPHA
    power = eta_power(level)
    tag = f"cor32[l={level},δ={middle}]"
    report.add(
        f"{tag}.hypothesis",
        eta_power(level + 1) == power + (middle,) + power,
        f"η^{level + 1}(p) = η^{level}(p) {middle} η^{level}(p)",
    )

    once = ones_zero(level)
    twice = ones_zero(level, "0")
    left = apply_states((middle,) + power, once)
    right = apply_states(power, twice)
    report.add(f"{tag}.first", left == right, f"{left} vs {right}")
    left = apply_states((middle,) + power, twice)
    right = apply_states(power, once)
    report.add(f"{tag}.second", left == right, f"{left} vs {right}")

    for ending in ("00", "01"):
        letters = "1" * level + ending
        final, _ = run_state(middle, letters)
        report.add(f"{tag}.reset[{ending}]", final == EPSILON, f"{middle}∘1^{level}{ending} = {final}")
    return report


def verify_lemma41(level: int) -> VerificationReport:
    """η^ℓ(p) swaps 1^ω and 1^ℓ0 1^ω, and its prefix maps stay in step, at one level ℓ.

    The prefix maps η_j are evaluated incrementally: u_(j+1) = p_(j+1) * u_j.
    """
    report = VerificationReport(suite="lemma41")
    power = eta_power(level)
    tag = f"lemma41[l={level}]"
    target = ones_zero(level)

    image = apply_states(power, ONES)
    report.add(f"{tag}.i.ones", image == target, f"1^ω η^{level} = {image}")
    image = apply_states(power, target)
    report.add(f"{tag}.i.back", image == ONES, f"{target} η^{level} = {image}")

    u = "1" * (level + 1)
    v = "1" * level + "0"
    seen_u = {u}
    seen_v = {v}
    first_bad_reset = None
    for index, state in enumerate(power):
        reached_u, u = run_state(state, u)
        reached_v, v = run_state(state, v)
        if first_bad_reset is None and (reached_u != EPSILON or reached_v != EPSILON):
            first_bad_reset = index
        seen_u.add(u)
        seen_v.add(v)

    size = 2 ** (level + 1)
    report.add(f"{tag}.ii.u", len(seen_u) == size, f"{len(seen_u)} of {size} words")
    report.add(f"{tag}.ii.v", len(seen_v) == size, f"{len(seen_v)} of {size} words")
    report.add(
        f"{tag}.iii",
        first_bad_reset is None,
        "all resets reach ε" if first_bad_reset is None else f"j = {first_bad_reset}",
    )
    return report


def verify_lemma52_parity(level: int) -> VerificationReport:
    """ᾱ flips x₁ in 1^ℓ 0 x₁ … exactly for odd ℓ, q̄ exactly for even ℓ, ᾱq̄ always."""
    report = VerificationReport(suite="lemma52")
    for letter in "01":
        x = UPWord("1" * level + "0" + letter, "01")
        flipped = UPWord("1" * level + "0" + complement_letter(letter), "01")
        tag = f"lemma52[l={level},x1={letter}]"
        for states, flips in (
            ((ALPHA,), level % 2 == 1),
            ((Q,), level % 2 == 0),
            ((ALPHA, Q), True),
            ((Q, ALPHA), True),
        ):
            actual = apply_states(states, x)
            expected = flipped if flips else x
            report.add(f"{tag}.{''.join(states)}", actual == expected, f"= {actual}")
    return report
