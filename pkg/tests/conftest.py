"""Pytest configuration and fixtures."""
from random import Random
from typing import Callable

import pytest

from app.core.config import Settings
from app.services.b4 import b4_machine
from app.services.mealy import MealyMachine, random_machine

SEED = 20180125


@pytest.fixture
def rng() -> Random:
    """Seeded random source; every test gets a fresh one."""
    return Random(SEED)


@pytest.fixture
def b4() -> MealyMachine:
    """The machine B4."""
    return b4_machine()


@pytest.fixture
def machine_factory(rng: Random) -> Callable[[int], MealyMachine]:
    """Random binary machines with n states, drawn from the test's rng."""

    def make(n_states: int) -> MealyMachine:
        return random_machine(rng, n_states)

    return make


@pytest.fixture
def small_settings() -> Settings:
    """Settings with sample sizes small enough for unit tests."""
    return Settings(
        verify_max=4,
        order_cap=512,
        xi_power_limit=16,
        lipschitz_samples=20,
        lipschitz_steps=8,
        lipschitz_word_len=4,
        density_random_starts=3,
        density_random_targets=10,
        density_random_n=5,
        transitivity_samples=10,
        transitivity_max_exp=4,
    )


@pytest.fixture
def sample_machine_text() -> str:
    """A two-state machine description with comments and a start state."""
    return (
        "# flips every other letter\n"
        "machine toggle\n"
        "input 0 1\n"
        "states even odd\n"
        "start even\n"
        "t even 0 1 odd   # flip\n"
        "t even 1 0 odd\n"
        "t odd 0 0 even\n"
        "t odd 1 1 even\n"
    )
