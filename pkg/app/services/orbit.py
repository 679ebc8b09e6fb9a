"""The orbit of ξ = p̄ᾱq̄ on ultimately periodic words.

ξ acts on the n-letter prefixes as a single cycle of length 2^n, which is what
makes every orbit dense. The sweeps here walk that cycle one transduction at a
time and check it against the stated structure.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import islice
from random import Random
from typing import Iterable, Iterator, Optional

from app.models.schemas import VerificationReport, WitnessReport
from app.services import b4
from app.services.group import GENERATORS, GroupWord, realize, xi_machine
from app.services.mealy import is_sequential_consistent, random_machine, transduce_finite, transduce_up
from app.services.words import (
    BINARY,
    ONES,
    DyadicDistance,
    FiniteWord,
    UPWord,
    all_words,
    concat,
    has_factor,
    prefix,
    prefix_metric,
    random_upword,
    suffix,
)

logger = logging.getLogger(__name__)

ZERO_ONES = UPWord("0", "1")
_ZERO = FiniteWord("0")


class OrbitError(ValueError):
    """Invalid sweep or witness parameters."""

    pass


@dataclass(frozen=True, slots=True)
class OrbitRecord:
    """1^ω ξ^k split as u_k x_k with |u_k| fixed for the sweep."""

    k: int
    u_k: FiniteWord
    x_k: UPWord

    @property
    def point(self) -> UPWord:
        return concat(self.u_k, self.x_k)


def iterate(x: UPWord, k: int) -> UPWord:
    """x ξ^k."""
    if k < 0:
        raise OrbitError(f"Iteration count must be non-negative, got {k}")
    machine = xi_machine()
    for _ in range(k):
        x = transduce_up(machine, x)
    return x


def orbit(x: UPWord) -> Iterator[UPWord]:
    """x ξ, x ξ², … without end."""
    machine = xi_machine()
    while True:
        x = transduce_up(machine, x)
        yield x


def sweep(start: UPWord, steps: int, prefix_length: int = 0) -> Iterator[OrbitRecord]:
    """Records for k = 1..steps, split after prefix_length letters."""
    if steps < 0 or prefix_length < 0:
        raise OrbitError(f"Steps and prefix length must be non-negative, got {steps}, {prefix_length}")
    for k, point in enumerate(islice(orbit(start), steps), start=1):
        yield OrbitRecord(k, prefix(point, prefix_length), suffix(point, prefix_length))


def records(start: UPWord, n: int) -> list[OrbitRecord]:
    """The full sweep k = 1..2^n with |u_k| = n."""
    if n < 1:
        raise OrbitError(f"Sweep size must be at least 1, got {n}")
    return list(sweep(start, 2**n, n))


def format_record(record: OrbitRecord) -> str:
    return f"{record.k},{record.u_k},{record.x_k}"


def format_csv(rows: Iterable[OrbitRecord]) -> str:
    return "".join(f"{format_record(record)}\n" for record in rows)


def verify_lemma56(n: int) -> VerificationReport:
    """Orbit of 1^ω under ξ over one full period 2^n, split after n letters."""
    report = VerificationReport(suite="lemma56")
    rows = records(ONES, n)
    full, half = 2**n, 2 ** (n - 1)
    tag = f"lemma56[n={n}]"

    zero_free = [row.k for row in rows[:-1] if not has_factor(row.u_k, _ZERO)]
    report.add(
        f"{tag}.i",
        not zero_free,
        "0 occurs in every u_l, l < 2^n" if not zero_free else f"no 0 in u_{zero_free[0]}",
    )

    prefixes = {row.u_k.letters for row in rows}
    report.add(f"{tag}.ii", len(prefixes) == full, f"{len(prefixes)} of {full} words")

    early = [row.k for row in rows if row.k < half and row.x_k != ONES]
    report.add(
        f"{tag}.iii",
        not early,
        f"x_l = (1) for l < {half}" if not early else f"x_{early[0]} = {rows[early[0] - 1].x_k}",
    )
    late = [row.k for row in rows if half <= row.k < full and row.x_k != ZERO_ONES]
    report.add(
        f"{tag}.iv",
        not late,
        f"x_l = 0(1) for {half} <= l < {full}" if not late else f"x_{late[0]} = {rows[late[0] - 1].x_k}",
    )

    last = rows[-1].point
    expected = UPWord("1" * n + "00", "1")
    report.add(f"{tag}.v", last == expected, f"1^ω ξ^{full} = {last}")

    machine = xi_machine()
    broken = [
        row.k
        for row, following in zip(rows, rows[1:] + rows[:1])
        if transduce_finite(machine, row.u_k) != following.u_k
    ]
    report.add(
        f"{tag}.single_cycle",
        not broken,
        f"ξ permutes {{0,1}}^{n} in one cycle" if not broken else f"breaks after k = {broken[0]}",
    )

    longest = max(len(row.point.u) for row in rows)
    report.add(f"{tag}.bounded", longest <= n + 2, f"longest preperiod {longest}")
    logger.info(f"Orbit sweep n={n}: {full} iterations, passed={report.passed}")
    return report


def _witness(
    start: UPWord, target: UPWord, m: int, hit: Optional[tuple[int, UPWord]], iterations: int
) -> WitnessReport:
    bound = DyadicDistance.power(m - 1)
    if hit is None:
        logger.warning(f"No orbit point of {start} within {bound} of {target}")
        return WitnessReport(
            start=str(start),
            target=str(target),
            prefix_length=m,
            found=False,
            bound=str(bound),
            iterations=iterations,
        )
    index, point = hit
    distance = prefix_metric(point, target)
    return WitnessReport(
        start=str(start),
        target=str(target),
        prefix_length=m,
        found=True,
        index=index,
        distance=str(distance),
        bound=str(bound),
        within_bound=distance < bound,
        iterations=index,
    )


def density_witness(start: UPWord, target: UPWord, m: int) -> WitnessReport:
    """The first k ≤ 2^m with start ξ^k agreeing with target on m letters."""
    if m < 1:
        raise OrbitError(f"Prefix length must be at least 1, got {m}")
    wanted = target.expand(m)
    for k, point in enumerate(islice(orbit(start), 2**m), start=1):
        if point.expand(m) == wanted:
            return _witness(start, target, m, (k, point), k)
    return _witness(start, target, m, None, 2**m)


def transitivity_witness(x: UPWord, y: UPWord, eps_exp: int) -> WitnessReport:
    """z = x and n with d(z ξ^n, y) < 2^-eps_exp."""
    if eps_exp < 1:
        raise OrbitError(f"ε exponent must be at least 1, got {eps_exp}")
    return density_witness(x, y, eps_exp + 1)


def _first_visits(start: UPWord, m: int) -> dict[str, tuple[int, UPWord]]:
    visits: dict[str, tuple[int, UPWord]] = {}
    for k, point in enumerate(islice(orbit(start), 2**m), start=1):
        visits.setdefault(point.expand(m), (k, point))
    return visits


def _nontrivial_start(rng: Random) -> UPWord:
    while True:
        start = random_upword(rng)
        if start != ONES:
            return start


def verify_density(
    max_n: int,
    random_starts: int = 20,
    random_targets: int = 100,
    random_n: int = 8,
    seed: int = 0,
) -> VerificationReport:
    """Every prefix of length ≤ max_n is reached from 1^ω, and random targets from random starts."""
    report = VerificationReport(suite="prop63")
    for m in range(1, max_n + 1):
        visits = _first_visits(ONES, m)
        witnesses = [
            _witness(ONES, UPWord(word, "1"), m, visits.get(word), 2**m)
            for word in all_words(BINARY, m)
        ]
        missed = [w.target for w in witnesses if not (w.found and w.within_bound)]
        report.add(
            f"prop63.exhaustive[m={m}]",
            not missed,
            f"{len(witnesses) - len(missed)} of {2**m} targets" if not missed else f"missed {missed[0]}",
        )

    rng = Random(seed)
    reached = 0
    total = 0
    first_miss = ""
    for _ in range(random_starts):
        start = _nontrivial_start(rng)
        visits = _first_visits(start, random_n)
        for _ in range(random_targets):
            target = random_upword(rng)
            witness = _witness(start, target, random_n, visits.get(target.expand(random_n)), 2**random_n)
            total += 1
            if witness.found and witness.within_bound:
                reached += 1
            elif not first_miss:
                first_miss = f"{start} -> {target}"
    report.add(
        f"prop63.random[m={random_n}]",
        reached == total,
        f"{reached} of {total} targets" + (f", first miss {first_miss}" if first_miss else ""),
    )

    witness = density_witness(ONES, UPWord("110", "1"), 3)
    report.add("prop63.example[110]", witness.index == 4, f"k = {witness.index}")
    return report


def verify_transitivity(samples: int, max_exp: int, seed: int = 0) -> VerificationReport:
    """Random (x, y, ε) triples all have an orbit witness."""
    report = VerificationReport(suite="cor72")
    witness = transitivity_witness(ONES, UPWord("00", "1"), 2)
    report.add(
        "cor72.example",
        witness.found and witness.index == 1 and witness.within_bound,
        f"n = {witness.index}, d = {witness.distance}",
    )

    rng = Random(seed)
    failures = []
    for _ in range(samples):
        x, y = random_upword(rng), random_upword(rng)
        eps_exp = rng.randint(1, max_exp)
        witness = transitivity_witness(x, y, eps_exp)
        if not (witness.found and witness.within_bound):
            failures.append(f"{x} -> {y} at 2^-{eps_exp}")
    report.add(
        "cor72.random",
        not failures,
        f"{samples - len(failures)} of {samples} triples" + (f", first {failures[0]}" if failures else ""),
    )
    return report


def lipschitz_check(word: GroupWord, x: UPWord, y: UPWord, n_max: int) -> VerificationReport:
    """d(x w̄^n, y w̄^n) ≤ d(x, y) for n ≤ n_max."""
    report = VerificationReport(suite="lipschitz")
    machine = realize(word, minimal=True)
    start_distance = prefix_metric(x, y)
    violations = []
    for n in range(1, n_max + 1):
        x = transduce_up(machine, x)
        y = transduce_up(machine, y)
        if prefix_metric(x, y) > start_distance:
            violations.append(n)
    report.add(
        f"lipschitz[{word}]",
        not violations,
        f"d = {start_distance} dominates n <= {n_max}" if not violations else f"exceeded at n = {violations[0]}",
    )
    return report


def random_group_word(rng: Random, max_length: int) -> GroupWord:
    return GroupWord(tuple(rng.choice(GENERATORS) for _ in range(rng.randint(0, max_length))))


def verify_lipschitz(
    samples: int,
    steps: int,
    word_len: int,
    seed: int = 0,
    machine_samples: int = 1000,
) -> VerificationReport:
    """Non-expansiveness on random inputs, and prefix preservation of random machines."""
    report = VerificationReport(suite="lipschitz")
    xi = b4.xi()
    report.merge(lipschitz_check(xi, ONES, ZERO_ONES, steps))
    report.merge(lipschitz_check(xi, UPWord("111110", "1"), ONES, 64))

    rng = Random(seed)
    failures = []
    for _ in range(samples):
        word = random_group_word(rng, word_len)
        x, y = random_upword(rng), random_upword(rng)
        if not lipschitz_check(word, x, y, steps).passed:
            failures.append(f"{word} on {x}, {y}")
    report.add(
        "lipschitz.random",
        not failures,
        f"{samples - len(failures)} of {samples} triples" + (f", first {failures[0]}" if failures else ""),
    )

    inconsistent = 0
    for _ in range(machine_samples):
        machine = random_machine(rng, rng.randint(1, 6)).at("s0")
        letters = "".join(rng.choice("01") for _ in range(rng.randint(0, 12)))
        if not is_sequential_consistent(machine, FiniteWord(letters)):
            inconsistent += 1
    report.add(
        "lipschitz.prefix_preservation",
        inconsistent == 0,
        f"{machine_samples - inconsistent} of {machine_samples} machines",
    )
    return report
