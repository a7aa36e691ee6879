"""
Shared fixtures for the oscillab test suite.
"""

import os

import pytest
from hypothesis import settings

from oscillab.measure import bernoulli_measure
from oscillab.oscillator import build_oscillator, schedule_finite

settings.register_profile("default", deadline=None, max_examples=50)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Keep OSCILLAB_* variables and stray .env files out of every test."""
    for key in list(os.environ):
        if key.startswith("OSCILLAB_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def fair_coin():
    return bernoulli_measure(0.5)


@pytest.fixture
def third():
    """Bernoulli(1/3): symbol 1 with probability 1/3."""
    return bernoulli_measure(1.0 / 3.0)


@pytest.fixture
def two_thirds():
    return bernoulli_measure(2.0 / 3.0)


@pytest.fixture
def finite_schedule():
    return schedule_finite(0.2, 3)


@pytest.fixture
def oscillator(third, finite_schedule):
    return build_oscillator(third, finite_schedule)
