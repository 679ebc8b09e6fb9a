"""Command-line front end: ``b4 <command> [options]``.

Results go to stdout, logging to stderr. Exit status is 2 for usage and
input errors, 1 when a verification check fails and 0 otherwise.
"""
import argparse
import logging
import sys
from typing import Optional

from app.core.config import get_cli_settings
from app.services import group, orbit
from app.services.b4 import B4Error
from app.services.group import GroupWordError, parse_group_word
from app.services.machine_file import load_machine, resolve_state, write_machine
from app.services.mealy import InitialMachine, MachineError, minimize, serial_compose, transduce_up
from app.services.orbit import OrbitError
from app.services.verification import SUITE_NAMES, SuiteError, run_suite
from app.services.words import WordError, parse_upword, prefix_metric

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

INPUT_ERRORS = (WordError, MachineError, B4Error, GroupWordError, OrbitError, SuiteError)


def _initial(reference: str, state: Optional[str] = None) -> InitialMachine:
    machine = load_machine(reference)
    inner = machine.machine if isinstance(machine, InitialMachine) else machine
    if state is not None:
        return InitialMachine(inner, resolve_state(inner, state))
    if isinstance(machine, InitialMachine):
        return machine
    raise MachineError(f"{reference}: no start state; add 'start', '@<state>' or --state")


def cmd_transduce(args: argparse.Namespace) -> int:
    machine = _initial(args.machine, args.state)
    word = parse_upword(args.word, machine.input_alphabet)
    print(transduce_up(machine, word))
    return 0


def cmd_compose(args: argparse.Namespace) -> int:
    references = [reference for reference in args.machines.split(",") if reference]
    if len(references) < 2:
        raise MachineError("compose needs at least two machines")
    machines = [_initial(reference) for reference in references]
    composed = machines[0]
    for machine in machines[1:]:
        composed = serial_compose(composed, machine)
    write_machine(composed, args.out)
    print(f"{composed.state_count} states -> {args.out}")
    return 0


def cmd_minimize(args: argparse.Namespace) -> int:
    machine = _initial(args.machine, args.state)
    minimal = minimize(machine)
    write_machine(minimal, args.out)
    print(f"{machine.state_count} -> {minimal.state_count} states")
    return 0


def cmd_order(args: argparse.Namespace) -> int:
    cap = args.cap if args.cap is not None else get_cli_settings().order_cap
    found = group.order(parse_group_word(args.element), cap)
    print(found.value if isinstance(found, group.OrderStatus) else found)
    return 0


def cmd_normalform(args: argparse.Namespace) -> int:
    print(group.normal_form(parse_group_word(args.element)))
    return 0


def cmd_orbit(args: argparse.Namespace) -> int:
    start = parse_upword(args.start)
    for record in orbit.sweep(start, args.steps, args.prefix):
        if args.csv:
            print(orbit.format_record(record))
        else:
            print(f"k={record.k} u={record.u_k} x={record.x_k}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(args.suite, args.max, get_cli_settings())
    for line in report.lines():
        print(line)
    failed = len(report.failures())
    print(f"RESULT {'PASS' if report.passed else 'FAIL'} {len(report.checks)} checks, {failed} failed")
    return 0 if report.passed else 1


def cmd_enumerate(args: argparse.Namespace) -> int:
    for length, count in group.enumerate_elements(args.max_len):
        print(f"{length},{count}")
    return 0


def cmd_metric(args: argparse.Namespace) -> int:
    print(prefix_metric(parse_upword(args.x), parse_upword(args.y)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="b4", description="Mealy machines, the machine B4 and the group it generates."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    transduce = commands.add_parser("transduce", help="image of an infinite word u(v)")
    transduce.add_argument("--machine", required=True, help="file, builtin:b4, optionally @state")
    transduce.add_argument("--state", help="start state (a = α, e = ε)")
    transduce.add_argument("--word", required=True, help='infinite word, e.g. "0(1)"')
    transduce.set_defaults(handler=cmd_transduce)

    compose = commands.add_parser("compose", help="serial composition, left to right")
    compose.add_argument("--machines", required=True, help="comma-separated machine references")
    compose.add_argument("--out", required=True)
    compose.set_defaults(handler=cmd_compose)

    minimize_cmd = commands.add_parser("minimize", help="minimal equivalent machine")
    minimize_cmd.add_argument("--machine", required=True)
    minimize_cmd.add_argument("--state")
    minimize_cmd.add_argument("--out", required=True)
    minimize_cmd.set_defaults(handler=cmd_minimize)

    order = commands.add_parser("order", help="order of a group element")
    order.add_argument("--element", required=True, help='generator word over p q a e, e.g. "pq"')
    order.add_argument("--cap", type=int, help="largest order tried (default 4096)")
    order.set_defaults(handler=cmd_order)

    normalform = commands.add_parser("normalform", help="alternating normal form")
    normalform.add_argument("--element", required=True)
    normalform.set_defaults(handler=cmd_normalform)

    orbit_cmd = commands.add_parser("orbit", help="iterate ξ = paq")
    orbit_cmd.add_argument("--start", required=True)
    orbit_cmd.add_argument("--steps", type=int, required=True)
    orbit_cmd.add_argument("--prefix", type=int, default=0, help="split each point after N letters")
    orbit_cmd.add_argument("--csv", action="store_true", help='emit "k,u_k,x_k" lines')
    orbit_cmd.set_defaults(handler=cmd_orbit)

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    verify.add_argument("--max", type=int, help="suite size parameter")
    verify.set_defaults(handler=cmd_verify)

    enumerate_cmd = commands.add_parser("enumerate", help="growth of the group, as CSV")
    enumerate_cmd.add_argument("--max-len", type=int, required=True)
    enumerate_cmd.set_defaults(handler=cmd_enumerate)

    metric = commands.add_parser("metric", help="prefix distance of two infinite words")
    metric.add_argument("--x", required=True)
    metric.add_argument("--y", required=True)
    metric.set_defaults(handler=cmd_metric)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    level = logging.DEBUG if args.verbose else get_cli_settings().log_level.upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        return args.handler(args)
    except INPUT_ERRORS as exc:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"b4 {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
