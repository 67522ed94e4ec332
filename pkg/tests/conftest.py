import json
from pathlib import Path

import pytest

from unfold_synth.automaton import Automaton
from unfold_synth.encoding import encode

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

CONSCIOUS_LABELS = {
    "A": "000", "B": "110", "C": "010", "D": "101",
    "E": "111", "F": "011", "G": "001", "H": "100",
}
HIERARCHICAL_LABELS = {
    "A": "000", "B": "100", "C": "010", "D": "110",
    "E": "001", "F": "101", "G": "011", "H": "111",
}


def cycle_automaton(names) -> Automaton:
    names = tuple(names)
    nxt = {s: names[(i + 1) % len(names)] for i, s in enumerate(names)}
    return Automaton(names, nxt)


def automaton_from_code_table(table: dict[str, str]) -> Automaton:
    """Treat bit codes themselves as state names; identity encoding then
    reproduces any desired per-bit update tables exactly."""
    states = tuple(sorted(table))
    return Automaton(states, dict(table))


def identity_encoding(a: Automaton):
    return encode(a, {s: s for s in a.states})


@pytest.fixture
def tollbooth() -> Automaton:
    return Automaton(
        tuple("ABCDEFGH"),
        {s: "ABCDEFGH"[(i + 1) % 8] for i, s in enumerate("ABCDEFGH")},
        {"A": "LIFT"},
        "A",
    )


@pytest.fixture
def conscious_encoding(tollbooth):
    return encode(tollbooth, CONSCIOUS_LABELS)


@pytest.fixture
def hierarchical_encoding(tollbooth):
    return encode(tollbooth, HIERARCHICAL_LABELS)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture(name: str):
    return json.loads((FIXTURES / name).read_text())
