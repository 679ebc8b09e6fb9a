"""Named verification suites.

Each suite turns one size parameter (the CLI's --max) into a
VerificationReport. Suites without a natural size read their sample sizes
from Settings instead.
"""
import logging
from typing import Callable, Optional

from app.core.config import Settings, get_settings
from app.models.schemas import VerificationReport
from app.services import b4, group, orbit

logger = logging.getLogger(__name__)

SuiteRunner = Callable[[int, Settings], VerificationReport]


class SuiteError(ValueError):
    """Unknown suite name or invalid size parameter."""

    pass


def _per_level(suite: str, check: Callable[[int], VerificationReport], levels: range) -> VerificationReport:
    report = VerificationReport(suite=suite)
    for level in levels:
        report.merge(check(level))
    return report


def _basis(size: int, settings: Settings) -> VerificationReport:
    return b4.verify_basis()


def _lemma31(size: int, settings: Settings) -> VerificationReport:
    return _per_level("lemma31", b4.verify_lemma31, range(size + 1))


def _cor32(size: int, settings: Settings) -> VerificationReport:
    return _per_level("cor32", b4.verify_cor32, range(size + 1))


def _lemma41(size: int, settings: Settings) -> VerificationReport:
    return _per_level("lemma41", b4.verify_lemma41, range(size + 1))


def _lemma52(size: int, settings: Settings) -> VerificationReport:
    report = VerificationReport(suite="lemma52")
    report.merge(group.klein_table())
    report.merge(_per_level("lemma52", b4.verify_lemma52_parity, range(size + 1)))
    return report


def _cor42(size: int, settings: Settings) -> VerificationReport:
    return group.verify_cor42(size)


def _lemma55(size: int, settings: Settings) -> VerificationReport:
    return group.verify_lemma55(settings.order_cap)


def _lemma56(size: int, settings: Settings) -> VerificationReport:
    return _per_level("lemma56", orbit.verify_lemma56, range(1, size + 1))


def _cor57(size: int, settings: Settings) -> VerificationReport:
    report = group.verify_cor57(size, settings.xi_power_limit)
    found = group.order(b4.xi(), settings.order_cap)
    report.add(
        f"cor57.order[paq,cap={settings.order_cap}]",
        found == group.EXCEEDS_CAP,
        f"o = {found.value if isinstance(found, group.OrderStatus) else found}",
    )
    return report


def _prop63(size: int, settings: Settings) -> VerificationReport:
    return orbit.verify_density(
        size,
        random_starts=settings.density_random_starts,
        random_targets=settings.density_random_targets,
        random_n=settings.density_random_n,
        seed=settings.random_seed,
    )


def _cor72(size: int, settings: Settings) -> VerificationReport:
    return orbit.verify_transitivity(
        settings.transitivity_samples, settings.transitivity_max_exp, seed=settings.random_seed
    )


def _lipschitz(size: int, settings: Settings) -> VerificationReport:
    return orbit.verify_lipschitz(
        settings.lipschitz_samples,
        settings.lipschitz_steps,
        settings.lipschitz_word_len,
        seed=settings.random_seed,
    )


# Insertion order is the order of the "all" suite.
SUITES: dict[str, SuiteRunner] = {
    "basis": _basis,
    "lemma31": _lemma31,
    "cor32": _cor32,
    "lemma41": _lemma41,
    "cor42": _cor42,
    "lemma52": _lemma52,
    "lemma55": _lemma55,
    "lemma56": _lemma56,
    "cor57": _cor57,
    "prop63": _prop63,
    "cor72": _cor72,
    "lipschitz": _lipschitz,
}

ALL = "all"
SUITE_NAMES = tuple(SUITES) + (ALL,)


def run_suite(
    name: str, size: Optional[int] = None, settings: Optional[Settings] = None
) -> VerificationReport:
    """Run one suite, or every suite in registry order for "all"."""
    settings = settings or get_settings()
    if size is None:
        size = settings.verify_max
    if size < 0:
        raise SuiteError(f"Suite size must be non-negative, got {size}")
    if name != ALL and name not in SUITES:
        raise SuiteError(f"Unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")

    names = list(SUITES) if name == ALL else [name]
    report = VerificationReport(suite=name)
    for suite in names:
        logger.info(f"Running suite {suite} with size {size}")
        result = SUITES[suite](size, settings)
        for failure in result.failures():
            logger.warning(f"Check failed: {failure.line()}")
        report.merge(result)
    logger.info(f"Suite {name}: {len(report.checks)} checks, passed={report.passed}")
    return report
