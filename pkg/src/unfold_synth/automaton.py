"""Deterministic autonomous finite-state automata.

An automaton here is a finite set of named states with one successor per
state (the clock tick is the only input).  Optional output labels ride
along but play no part in the dynamics.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .errors import FormatError, UnknownState

__all__ = [
    "Automaton",
    "ValidationReport",
    "validate",
    "orbit",
    "are_isomorphic",
    "automaton_from_json",
    "automaton_to_json",
]


@dataclass(frozen=True)
class ValidationReport:
    """A list of invariant violations; empty means well-formed."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self) -> Iterator[str]:
        return iter(self.violations)


@dataclass(frozen=True)
class Automaton:
    """States in declaration order, a successor map, optional outputs.

    The constructor is permissive so that malformed inputs can be loaded
    and then reported on via :func:`validate`; operations that walk the
    dynamics assume a valid automaton.
    """

    states: tuple[str, ...]
    next: Mapping[str, str]
    outputs: Optional[Mapping[str, str]] = None
    initial: Optional[str] = None
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {s: i for i, s in enumerate(self.states)}
        )

    def __len__(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        """Declaration-order index of a state (ties are broken with this)."""
        try:
            return self._index[state]
        except KeyError:
            raise UnknownState(f"unknown state {state!r}") from None

    def successor(self, state: str) -> str:
        if state not in self._index:
            raise UnknownState(f"unknown state {state!r}")
        target = self.next.get(state)
        if target is None or target not in self._index:
            raise UnknownState(f"successor of {state!r} is undefined or dangling")
        return target


def validate(a: Automaton) -> ValidationReport:
    """Report every invariant violation of an automaton (empty = valid)."""
    problems = []
    seen = set()
    for s in a.states:
        if s in seen:
            problems.append(f"state {s!r} declared more than once")
        seen.add(s)
    for s in a.states:
        if s not in a.next:
            problems.append(f"state {s!r} has no successor")
    for src, dst in a.next.items():
        if src not in seen:
            problems.append(f"successor map mentions unknown state {src!r}")
        if dst not in seen:
            problems.append(f"successor of {src!r} is {dst!r}, not a state")
    if a.outputs:
        for s in a.outputs:
            if s not in seen:
                problems.append(f"output label on unknown state {s!r}")
    if a.initial is not None and a.initial not in seen:
        problems.append(f"initial state {a.initial!r} is not a state")
    return ValidationReport(tuple(problems))


def orbit(a: Automaton, start: str, steps: int) -> list[str]:
    """Trajectory of length ``steps + 1`` starting at ``start``."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    trajectory = [start]
    current = start
    if start not in a.states:
        raise UnknownState(f"unknown state {start!r}")
    for _ in range(steps):
        current = a.successor(current)
        trajectory.append(current)
    return trajectory


def _in_degrees(a: Automaton) -> dict[str, int]:
    deg = {s: 0 for s in a.states}
    for s in a.states:
        deg[a.next[s]] += 1
    return deg


def are_isomorphic(a: Automaton, b: Automaton) -> Optional[dict[str, str]]:
    """Find a successor-preserving bijection from ``a``'s states to ``b``'s.

    Returns the lexicographically smallest bijection (states of ``a`` in
    declaration order, candidate images in ``b``'s declaration order), or
    None when the automata are not isomorphic.  Output labels are compared
    only when both automata carry them.
    """
    if len(a.states) != len(b.states):
        return None
    match_outputs = bool(a.outputs) and bool(b.outputs)
    deg_a, deg_b = _in_degrees(a), _in_degrees(b)
    if sorted(deg_a.values()) != sorted(deg_b.values()):
        return None

    def compatible(s: str, t: str) -> bool:
        if deg_a[s] != deg_b[t]:
            return False
        if match_outputs and a.outputs.get(s) != b.outputs.get(t):
            return False
        return True

    n = len(a.states)
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(s: str, t: str) -> Optional[list[str]]:
        """Assign h(s)=t and propagate along the forced successor chain."""
        added = []
        stack = [(s, t)]
        while stack:
            u, v = stack.pop()
            if u in mapping:
                if mapping[u] != v:
                    break
                continue
            if v in used or not compatible(u, v):
                break
            mapping[u] = v
            used.add(v)
            added.append(u)
            stack.append((a.next[u], b.next[v]))
        else:
            return added
        for u in added:
            used.discard(mapping.pop(u))
        return None

    def search(i: int) -> bool:
        while i < n and a.states[i] in mapping:
            i += 1
        if i == n:
            return True
        s = a.states[i]
        for t in b.states:
            if t in used:
                continue
            added = extend(s, t)
            if added is None:
                continue
            if search(i + 1):
                return True
            for u in added:
                used.discard(mapping.pop(u))
        return False

    if search(0):
        return dict(mapping)
    return None


_FSA_KEYS = {"states", "next", "outputs", "initial"}


def automaton_from_json(data) -> Automaton:
    """Parse the FSA file format; unknown keys are rejected."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise FormatError("FSA file must be a JSON object")
    unknown = set(data) - _FSA_KEYS
    if unknown:
        raise FormatError(f"unknown FSA keys: {sorted(unknown)}")
    if "states" not in data or "next" not in data:
        raise FormatError("FSA file needs 'states' and 'next'")
    states = data["states"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise FormatError("'states' must be a list of strings")
    nxt = data["next"]
    if not isinstance(nxt, dict):
        raise FormatError("'next' must be an object")
    outputs = data.get("outputs")
    if outputs is not None and not isinstance(outputs, dict):
        raise FormatError("'outputs' must be an object")
    initial = data.get("initial")
    if initial is not None and not isinstance(initial, str):
        raise FormatError("'initial' must be a string")
    return Automaton(tuple(states), dict(nxt), outputs and dict(outputs), initial)


def automaton_to_json(a: Automaton) -> dict:
    doc: dict = {"states": list(a.states), "next": dict(a.next)}
    if a.outputs:
        doc["outputs"] = dict(a.outputs)
    if a.initial is not None:
        doc["initial"] = a.initial
    return doc


def digest(a: Automaton) -> str:
    """Stable content hash of an automaton, used in pipeline reports."""
    canonical = json.dumps(automaton_to_json(a), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()
