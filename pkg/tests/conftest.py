from pathlib import Path

import pytest

from ctakit.catalog import bounded_context_example, example_two_chain
from ctakit.counter_machine import load_counter_machine
from ctakit.semantics import Discrete, Elapse

FIXTURES_DIR = Path(__file__).parent / "fixtures"
PROGRAMS_DIR = FIXTURES_DIR / "programs"


@pytest.fixture
def two_chain():
    return example_two_chain()


@pytest.fixture
def bounded_context():
    return bounded_context_example()


@pytest.fixture
def example_path():
    return FIXTURES_DIR / "example.json"


@pytest.fixture
def transfer_machine():
    return load_counter_machine(PROGRAMS_DIR / "transfer.json")


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture
def programs_dir():
    return PROGRAMS_DIR


@pytest.fixture
def round_trip():
    """A run of the bounded-context example with two context switches."""
    return [
        Discrete("A2", 0),
        Discrete("A2", 0),
        Elapse(1),
        Discrete("A1", 0),
        Discrete("A2", 1),
        Discrete("A1", 1),
        Discrete("A1", 2),
        Elapse(1),
        Discrete("A1", 3),
        Discrete("A2", 2),
        Discrete("A2", 3),
        Discrete("A2", 0),
        Discrete("A1", 0),
        Discrete("A2", 1),
        Elapse(1),
        Discrete("A2", 4),
    ]
