"""Reading and writing machine description files.

Grammar, one directive per line:

    machine <name>
    input <letter> <letter> ...
    output <letter> <letter> ...      (optional, defaults to input)
    states <id> <id> ...
    start <id>                        (optional)
    t <state> <in-letter> <out-letter> <next-state>

A "#" at the start of a line or after whitespace starts a comment.
"""
from __future__ import annotations

import logging
import re
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from app.services.mealy import InitialMachine, MachineError, MealyMachine
from app.services.words import Alphabet, WordError

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
_BUILTIN_FILES = {"b4": "b4.machine"}
_COMMENT = re.compile(r"(^|\s)#.*$")

# ASCII spellings accepted wherever a state id is typed on a command line.
STATE_ALIASES = {"a": "α", "alpha": "α", "e": "ε", "epsilon": "ε", "b": "β", "beta": "β"}

AnyMachine = Union[MealyMachine, InitialMachine]


class MachineFormatError(MachineError):
    """Malformed machine description."""

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")


def _expect(args: list[str], count: Optional[int], directive: str, line_number: int) -> None:
    if count is None and not args:
        raise MachineFormatError(f"'{directive}' needs at least one argument", line_number)
    if count is not None and len(args) != count:
        raise MachineFormatError(
            f"'{directive}' takes {count} argument(s), got {len(args)}", line_number
        )


def _alphabet(args: list[str], line_number: int) -> Alphabet:
    try:
        return Alphabet.of(args)
    except WordError as exc:
        raise MachineFormatError(str(exc), line_number) from exc


def parse_machine(text: str) -> AnyMachine:
    """Parse a description; an InitialMachine is returned when it names a start."""
    name: Optional[str] = None
    input_alphabet: Optional[Alphabet] = None
    output_alphabet: Optional[Alphabet] = None
    states: Optional[tuple[str, ...]] = None
    start: Optional[str] = None
    rows: dict[str, dict[str, tuple[str, str]]] = {}
    seen: set[str] = set()

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        directive, *args = line.split()
        if directive != "t":
            if directive in seen:
                raise MachineFormatError(f"Duplicate '{directive}' directive", line_number)
            seen.add(directive)

        if directive == "machine":
            _expect(args, 1, directive, line_number)
            name = args[0]
        elif directive == "input":
            _expect(args, None, directive, line_number)
            input_alphabet = _alphabet(args, line_number)
        elif directive == "output":
            _expect(args, None, directive, line_number)
            output_alphabet = _alphabet(args, line_number)
        elif directive == "states":
            _expect(args, None, directive, line_number)
            states = tuple(args)
        elif directive == "start":
            _expect(args, 1, directive, line_number)
            start = args[0]
        elif directive == "t":
            _expect(args, 4, directive, line_number)
            state, letter, output, target = args
            row = rows.setdefault(state, {})
            if letter in row:
                raise MachineFormatError(
                    f"Second transition for state {state} on letter {letter}", line_number
                )
            row[letter] = (target, output)
        else:
            raise MachineFormatError(f"Unknown directive {directive!r}", line_number)

    for directive, value in (("machine", name), ("input", input_alphabet), ("states", states)):
        if value is None:
            raise MachineFormatError(f"Missing '{directive}' directive")

    try:
        machine = MealyMachine(
            name, states, input_alphabet, output_alphabet or input_alphabet, rows
        )
        if start is None:
            return machine
        return InitialMachine(machine, start)
    except MachineFormatError:
        raise
    except MachineError as exc:
        raise MachineFormatError(str(exc)) from exc


def dump_machine(machine: AnyMachine) -> str:
    """Render a machine in the description format."""
    inner = machine.machine if isinstance(machine, InitialMachine) else machine
    name = re.sub(r"\s+", "_", inner.name)
    lines = [
        f"machine {name}",
        f"input {inner.input_alphabet}",
    ]
    if inner.output_alphabet != inner.input_alphabet:
        lines.append(f"output {inner.output_alphabet}")
    lines.append(f"states {' '.join(inner.states)}")
    if isinstance(machine, InitialMachine):
        lines.append(f"start {machine.start}")
    for state in inner.states:
        for letter in inner.input_alphabet:
            target, output = inner.transitions[state][letter]
            lines.append(f"t {state} {letter} {output} {target}")
    return "\n".join(lines) + "\n"


def resolve_state(machine: MealyMachine, state: str) -> str:
    """Accept ASCII aliases for the Greek state ids."""
    if state in machine.transitions:
        return state
    alias = STATE_ALIASES.get(state)
    if alias is not None and alias in machine.transitions:
        return alias
    raise MachineError(f"Unknown state {state!r} in machine {machine.name}")


def _is_file(reference: str) -> bool:
    return not reference.startswith(BUILTIN_PREFIX) and Path(reference).is_file()


def _read_source(reference: str) -> str:
    if reference.startswith(BUILTIN_PREFIX):
        key = reference[len(BUILTIN_PREFIX):]
        filename = _BUILTIN_FILES.get(key)
        if filename is None:
            raise MachineFormatError(f"Unknown builtin machine {key!r}")
        return resources.files("app.data").joinpath(filename).read_text(encoding="utf-8")
    try:
        return Path(reference).read_text(encoding="utf-8")
    except OSError as exc:
        raise MachineFormatError(f"Cannot read machine file {reference}: {exc}") from exc


def load_machine(reference: str) -> AnyMachine:
    """Load "<path>" or "builtin:<name>", optionally suffixed "@<state>".

    An existing file whose name contains "@" is read as-is.
    """
    start: Optional[str] = None
    head, separator, tail = reference.rpartition("@")
    if separator and tail and "/" not in tail and not _is_file(reference):
        reference, start = head, tail

    logger.debug(f"Loading machine {reference}")
    machine = parse_machine(_read_source(reference))
    if start is None:
        return machine
    inner = machine.machine if isinstance(machine, InitialMachine) else machine
    return InitialMachine(inner, resolve_state(inner, start))


def write_machine(machine: AnyMachine, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(dump_machine(machine), encoding="utf-8")
    except OSError as exc:
        raise MachineFormatError(f"Cannot write machine file {path}: {exc}") from exc
