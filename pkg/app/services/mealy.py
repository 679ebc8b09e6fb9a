"""Mealy machines and the maps they induce on finite and infinite words."""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from random import Random
from typing import Hashable, Mapping, Optional

from app.services.words import BINARY, Alphabet, FiniteWord, UPWord, all_words

logger = logging.getLogger(__name__)

# state -> input letter -> (next state, output letter)
Transitions = Mapping[str, Mapping[str, tuple[str, str]]]

IDENTITY_STATE = "ε"


class MachineError(ValueError):
    """Invalid machine, or an operation applied to incompatible machines."""

    pass


@dataclass(frozen=True)
class MealyMachine:
    """A Mealy machine ⟨Q, A, B, ∘, *⟩ with total tables."""

    name: str
    states: tuple[str, ...]
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    transitions: Transitions

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "transitions", {state: dict(row) for state, row in self.transitions.items()}
        )
        if not self.states:
            raise MachineError(f"Machine {self.name} has no states")
        if len(set(self.states)) != len(self.states):
            raise MachineError(f"Machine {self.name} declares a state twice")
        known = set(self.states)
        if set(self.transitions) != known:
            missing = sorted(known.difference(self.transitions))
            extra = sorted(set(self.transitions).difference(known))
            raise MachineError(
                f"Machine {self.name}: transitions missing for {missing}, undeclared states {extra}"
            )

        letters = set(self.input_alphabet.letters)
        produced: set[str] = set()
        for state in self.states:
            row = self.transitions[state]
            if set(row) != letters:
                raise MachineError(
                    f"Machine {self.name}: state {state} must have exactly one transition "
                    f"per letter of {{{self.input_alphabet}}}"
                )
            for letter, (target, output) in row.items():
                if target not in known:
                    raise MachineError(
                        f"Machine {self.name}: {state} --{letter}--> unknown state {target}"
                    )
                if output not in self.output_alphabet:
                    raise MachineError(
                        f"Machine {self.name}: output {output!r} is not in {{{self.output_alphabet}}}"
                    )
                produced.add(output)

        # Surjectivity is only required when the alphabets differ.
        if letters != set(self.output_alphabet.letters) and produced != set(
            self.output_alphabet.letters
        ):
            raise MachineError(
                f"Machine {self.name}: output function is not onto {{{self.output_alphabet}}}"
            )

    @property
    def state_count(self) -> int:
        return len(self.states)

    def at(self, start: str) -> InitialMachine:
        return InitialMachine(self, start)


@dataclass(frozen=True)
class InitialMachine:
    """A Mealy machine with a start state."""

    machine: MealyMachine
    start: str

    def __post_init__(self) -> None:
        if self.start not in self.machine.transitions:
            raise MachineError(f"Start state {self.start!r} is not a state of {self.machine.name}")

    @property
    def name(self) -> str:
        return self.machine.name

    @property
    def input_alphabet(self) -> Alphabet:
        return self.machine.input_alphabet

    @property
    def output_alphabet(self) -> Alphabet:
        return self.machine.output_alphabet

    @property
    def state_count(self) -> int:
        return self.machine.state_count


def _check_input(machine: MealyMachine, letters: str) -> None:
    foreign = set(letters).difference(machine.input_alphabet.letters)
    if foreign:
        raise MachineError(
            f"Letters {''.join(sorted(foreign))!r} are not in the input alphabet of {machine.name}"
        )


def _run(transitions: Transitions, state: str, letters: str) -> tuple[str, str]:
    emitted = []
    for letter in letters:
        state, output = transitions[state][letter]
        emitted.append(output)
    return state, "".join(emitted)


def _restricted_output(
    input_alphabet: Alphabet, output_alphabet: Alphabet, produced: set[str]
) -> Alphabet:
    if set(input_alphabet.letters) == set(output_alphabet.letters):
        return output_alphabet
    return Alphabet.of(letter for letter in output_alphabet.letters if letter in produced)


def identity_machine(alphabet: Alphabet = BINARY, name: str = "I") -> InitialMachine:
    """The one-state machine inducing the identity map."""
    rows = {IDENTITY_STATE: {letter: (IDENTITY_STATE, letter) for letter in alphabet}}
    return InitialMachine(
        MealyMachine(name, (IDENTITY_STATE,), alphabet, alphabet, rows), IDENTITY_STATE
    )


def step(machine: MealyMachine, state: str, letter: str) -> tuple[str, str]:
    """(q ∘ a, q * a)."""
    row = machine.transitions.get(state)
    if row is None:
        raise MachineError(f"Unknown state {state!r} in machine {machine.name}")
    if letter not in row:
        raise MachineError(f"Letter {letter!r} is not in the input alphabet of {machine.name}")
    return row[letter]


def run_finite(machine: MealyMachine, state: str, word: FiniteWord) -> tuple[str, FiniteWord]:
    """(q ∘ u, q * u) for a finite word u."""
    if state not in machine.transitions:
        raise MachineError(f"Unknown state {state!r} in machine {machine.name}")
    _check_input(machine, word.letters)
    final, output = _run(machine.transitions, state, word.letters)
    return final, FiniteWord(output, machine.output_alphabet)


def transduce_finite(machine: InitialMachine, word: FiniteWord) -> FiniteWord:
    return run_finite(machine.machine, machine.start, word)[1]


def transduce_up(machine: InitialMachine, x: UPWord) -> UPWord:
    """The image q₀ * x of an ultimately periodic word, computed exactly.

    After the preperiod the period is fed block by block; the output becomes
    periodic as soon as the state at a block boundary repeats.
    """
    inner = machine.machine
    if x.alphabet != inner.input_alphabet:
        _check_input(inner, x.u + x.v)
    transitions = inner.transitions
    state, head = _run(transitions, machine.start, x.u)
    seen: dict[str, int] = {}
    blocks: list[str] = []
    while state not in seen:
        seen[state] = len(blocks)
        state, block = _run(transitions, state, x.v)
        blocks.append(block)
    loop = seen[state]
    return UPWord(head + "".join(blocks[:loop]), "".join(blocks[loop:]), inner.output_alphabet)


def serial_compose(
    first: InitialMachine, second: InitialMachine, name: Optional[str] = None
) -> InitialMachine:
    """Feed the output of first into second.

    Only the part of the product Q×Q′ reachable from (q₀, q′₀) is built; it
    induces the same map as the full product.
    """
    if not set(first.output_alphabet.letters) <= set(second.input_alphabet.letters):
        raise MachineError(
            f"Cannot compose {first.name} with {second.name}: outputs "
            f"{{{first.output_alphabet}}} are not inputs {{{second.input_alphabet}}}"
        )
    t1 = first.machine.transitions
    t2 = second.machine.transitions
    letters = first.input_alphabet.letters

    start = (first.start, second.start)
    ids: dict[tuple[str, str], str] = {start: f"{start[0]}|{start[1]}"}
    used = {ids[start]}
    queue = deque([start])
    rows: dict[str, dict[str, tuple[str, str]]] = {}
    produced: set[str] = set()
    while queue:
        pair = queue.popleft()
        q1, q2 = pair
        row = {}
        for letter in letters:
            n1, middle = t1[q1][letter]
            n2, output = t2[q2][middle]
            target = (n1, n2)
            if target not in ids:
                label = f"{n1}|{n2}"
                if label in used:
                    label = f"{label}#{len(ids)}"
                ids[target] = label
                used.add(label)
                queue.append(target)
            row[letter] = (ids[target], output)
            produced.add(output)
        rows[ids[pair]] = row

    machine = MealyMachine(
        name or f"{first.name};{second.name}",
        tuple(rows),
        first.input_alphabet,
        _restricted_output(first.input_alphabet, second.output_alphabet, produced),
        rows,
    )
    return InitialMachine(machine, ids[start])


def reachable_states(machine: InitialMachine) -> list[str]:
    """States reachable from the start, in breadth-first order."""
    transitions = machine.machine.transitions
    letters = machine.input_alphabet.letters
    order = [machine.start]
    seen = {machine.start}
    queue = deque(order)
    while queue:
        state = queue.popleft()
        for letter in letters:
            target = transitions[state][letter][0]
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
    return order


def _refine(
    states: list[Hashable],
    letters: tuple[str, ...],
    transitions: Mapping[Hashable, Mapping[str, tuple[Hashable, str]]],
) -> dict[Hashable, int]:
    """Coarsest partition of states into blocks with identical behaviour.

    Starts from the output rows and splits blocks by the blocks of the
    transition targets until the number of blocks stops growing.
    """
    signatures: dict[tuple, int] = {}
    block = {}
    for state in states:
        key = tuple(transitions[state][letter][1] for letter in letters)
        block[state] = signatures.setdefault(key, len(signatures))
    count = len(signatures)

    while True:
        signatures = {}
        refined = {}
        for state in states:
            key = (block[state],) + tuple(
                block[transitions[state][letter][0]] for letter in letters
            )
            refined[state] = signatures.setdefault(key, len(signatures))
        if len(signatures) == count:
            return refined
        block, count = refined, len(signatures)


def minimize(machine: InitialMachine) -> InitialMachine:
    """The minimal machine inducing the same map; states keep representative names."""
    transitions = machine.machine.transitions
    letters = machine.input_alphabet.letters
    reachable = reachable_states(machine)
    block = _refine(reachable, letters, transitions)

    representative: dict[int, str] = {}
    for state in reachable:
        representative.setdefault(block[state], state)

    rows = {}
    produced: set[str] = set()
    for state in representative.values():
        rows[state] = {
            letter: (representative[block[target]], output)
            for letter, (target, output) in transitions[state].items()
        }
        produced.update(output for _, output in rows[state].values())

    minimal = MealyMachine(
        machine.name,
        tuple(rows),
        machine.input_alphabet,
        _restricted_output(machine.input_alphabet, machine.output_alphabet, produced),
        rows,
    )
    logger.debug(f"Minimized {machine.name}: {machine.state_count} -> {minimal.state_count} states")
    return InitialMachine(minimal, representative[block[machine.start]])


def canonical_key(machine: InitialMachine) -> tuple:
    """Hashable identity of the induced map: equal keys iff equivalent machines."""
    minimal = minimize(machine)
    order = reachable_states(minimal)
    index = {state: position for position, state in enumerate(order)}
    transitions = minimal.machine.transitions
    letters = minimal.input_alphabet.letters
    rows = tuple(
        tuple(
            (transitions[state][letter][1], index[transitions[state][letter][0]])
            for letter in letters
        )
        for state in order
    )
    return (letters, rows)


def _require_same_input(first: InitialMachine, second: InitialMachine) -> None:
    if set(first.input_alphabet.letters) != set(second.input_alphabet.letters):
        raise MachineError(
            f"Machines {first.name} and {second.name} read different alphabets: "
            f"{{{first.input_alphabet}}} vs {{{second.input_alphabet}}}"
        )


def equivalent(first: InitialMachine, second: InitialMachine) -> bool:
    """True iff both machines induce the same map on A^ω.

    Refines the disjoint union of both reachable parts and checks whether the
    start states land in the same block.
    """
    _require_same_input(first, second)
    letters = first.input_alphabet.letters
    union: dict[Hashable, dict[str, tuple[Hashable, str]]] = {}
    for tag, machine in ((1, first), (2, second)):
        transitions = machine.machine.transitions
        for state in reachable_states(machine):
            union[(tag, state)] = {
                letter: ((tag, target), output)
                for letter, (target, output) in transitions[state].items()
            }
    block = _refine(list(union), letters, union)
    return block[(1, first.start)] == block[(2, second.start)]


def equivalent_by_enumeration(
    first: InitialMachine, second: InitialMachine, length: Optional[int] = None
) -> bool:
    """Brute-force equivalence oracle.

    Compares outputs on every word of length |Q₁|·|Q₂|; shorter words are
    prefixes of those, and outputs preserve prefixes.
    """
    _require_same_input(first, second)
    if length is None:
        length = first.state_count * second.state_count
    t1, t2 = first.machine.transitions, second.machine.transitions
    for word in all_words(first.input_alphabet, length):
        if _run(t1, first.start, word)[1] != _run(t2, second.start, word)[1]:
            return False
    return True


def is_identity(machine: InitialMachine) -> bool:
    """True iff every reachable state copies its input letter."""
    transitions = machine.machine.transitions
    return all(
        output == letter
        for state in reachable_states(machine)
        for letter, (_, output) in transitions[state].items()
    )


def is_sequential_consistent(machine: InitialMachine, word: FiniteWord) -> bool:
    """Length and prefix preservation along every prefix of word."""
    inner = machine.machine
    _check_input(inner, word.letters)
    _, full = _run(inner.transitions, machine.start, word.letters)
    for length in range(len(word) + 1):
        _, partial = _run(inner.transitions, machine.start, word.letters[:length])
        if len(partial) != length or not full.startswith(partial):
            return False
    return True


def random_machine(
    rng: Random, n_states: int, alphabet: Alphabet = BINARY, name: str = "random"
) -> MealyMachine:
    """A machine with uniformly random tables over one alphabet."""
    states = tuple(f"s{index}" for index in range(n_states))
    rows = {
        state: {letter: (rng.choice(states), rng.choice(alphabet.letters)) for letter in alphabet}
        for state in states
    }
    return MealyMachine(name, states, alphabet, alphabet, rows)
