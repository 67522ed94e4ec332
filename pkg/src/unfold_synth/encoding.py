"""Binary state labellings and the per-bit dynamics they induce.

Assigning a bitstring to every state turns the automaton's global
successor map into one Boolean update table per bit.  Which bits each
table genuinely reads (its minimal support, with don't-cares resolved
favorably) determines the dependency structure that the integrated-
information analysis ultimately consumes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional

from .automaton import Automaton
from .errors import (
    ConflictingFixedLabels,
    DuplicateLabel,
    FormatError,
    InsufficientWidth,
    MissingState,
    WidthMismatch,
)

__all__ = [
    "Encoding",
    "Csa",
    "DependencyGraph",
    "encode",
    "random_encoding",
    "derive_csa",
    "dependency_graph",
    "is_feed_forward",
    "encoding_from_json",
    "encoding_to_json",
    "dependency_graph_to_dot",
]


@dataclass(frozen=True)
class Encoding:
    """Bijective state -> bitstring map; leftmost character is Q1."""

    width: int
    labels: Mapping[str, str]

    def code(self, state: str) -> str:
        return self.labels[state]

    def state_of(self) -> dict[str, str]:
        """Inverse map, code -> state."""
        return {c: s for s, c in self.labels.items()}


@dataclass(frozen=True)
class Csa:
    """Per-bit next-value tables over the encoded (care-set) states.

    ``tables[i]`` maps each care code to the next value of bit ``i``
    (0-based; bit 0 is Q1).  Codes outside ``care`` are don't-cares.
    """

    width: int
    tables: tuple[Mapping[str, int], ...]
    care: frozenset[str]

    def successor_code(self, code: str) -> str:
        return "".join(str(t[code]) for t in self.tables)


@dataclass(frozen=True)
class DependencyGraph:
    """Edges (j, i) meaning bit i's minimized update reads bit j (1-based)."""

    width: int
    edges: frozenset[tuple[int, int]]


def encode(a: Automaton, labels: Mapping[str, str]) -> Encoding:
    """Validate an explicit labelling and wrap it as an Encoding."""
    missing = [s for s in a.states if s not in labels]
    if missing:
        raise MissingState(f"no label for states {missing}")
    extra = [s for s in labels if s not in a.states]
    if extra:
        raise MissingState(f"labels for unknown states {extra}")
    widths = {len(c) for c in labels.values()}
    if len(widths) != 1:
        raise WidthMismatch(f"labels of mixed widths {sorted(widths)}")
    width = widths.pop()
    for code in labels.values():
        if set(code) - {"0", "1"}:
            raise FormatError(f"label {code!r} is not binary")
    seen: dict[str, str] = {}
    for s in a.states:
        c = labels[s]
        if c in seen:
            raise DuplicateLabel(f"states {seen[c]!r} and {s!r} share label {c}")
        seen[c] = s
    return Encoding(width, {s: labels[s] for s in a.states})


def random_encoding(
    a: Automaton,
    width: int,
    seed: int,
    fixed: Optional[Mapping[str, str]] = None,
) -> Encoding:
    """Seed-reproducible random bijection extending ``fixed``."""
    fixed = dict(fixed or {})
    if 2**width < len(a.states):
        raise InsufficientWidth(
            f"width {width} gives {2**width} codes for {len(a.states)} states"
        )
    for s, c in fixed.items():
        if s not in a.states:
            raise ConflictingFixedLabels(f"pinned label for unknown state {s!r}")
        if len(c) != width or set(c) - {"0", "1"}:
            raise ConflictingFixedLabels(f"pinned label {c!r} is not a {width}-bit code")
    if len(set(fixed.values())) != len(fixed):
        raise ConflictingFixedLabels("two states pinned to the same code")
    rng = random.Random(seed)
    free_codes = [
        format(v, f"0{width}b") for v in range(2**width)
    ]
    free_codes = [c for c in free_codes if c not in set(fixed.values())]
    rng.shuffle(free_codes)
    labels = dict(fixed)
    for s in a.states:
        if s not in labels:
            labels[s] = free_codes.pop()
    return encode(a, labels)


def derive_csa(a: Automaton, e: Encoding) -> Csa:
    """Per-bit truth tables of the encoded successor map."""
    # Re-validate so a stale Encoding cannot silently misalign.
    e = encode(a, e.labels)
    tables: list[dict[str, int]] = [{} for _ in range(e.width)]
    for s in a.states:
        code = e.labels[s]
        nxt = e.labels[a.next[s]]
        for i in range(e.width):
            tables[i][code] = int(nxt[i])
    care = frozenset(e.labels.values())
    return Csa(e.width, tuple(tables), care)


def _minimal_support(table: Mapping[str, int], width: int) -> frozenset[int]:
    """Smallest set of input bits some don't-care completion depends on.

    Every pair of care codes with different outputs must differ in at
    least one supported bit, and any bit set hitting all such pairs
    admits a completion using only those bits; so this is an exact
    minimum hitting set, searched smallest-first then lexicographically.
    """
    care = sorted(table)
    diff_sets: set[frozenset[int]] = set()
    for x, y in combinations(care, 2):
        if table[x] == table[y]:
            continue
        d = frozenset(i for i in range(width) if x[i] != y[i])
        diff_sets.add(d)
    # Keep only minimal difference sets; supersets are hit for free.
    minimal = [
        d for d in diff_sets if not any(o < d for o in diff_sets)
    ]
    if not minimal:
        return frozenset()
    forced = {next(iter(d)) for d in minimal if len(d) == 1}
    rest = [d for d in minimal if not (d & forced)]
    if not rest:
        return frozenset(forced)
    candidates_pool = sorted(set().union(*rest))
    for extra in range(len(candidates_pool) + 1):
        for combo in combinations(candidates_pool, extra):
            chosen = forced | set(combo)
            if all(d & chosen for d in rest):
                return frozenset(chosen)
    raise AssertionError("hitting-set search cannot fail")


def dependency_graph(c: Csa) -> DependencyGraph:
    """Minimal-support dependency edges between bits (1-based Q indices)."""
    edges = set()
    for i, table in enumerate(c.tables):
        for j in _minimal_support(table, c.width):
            edges.add((j + 1, i + 1))
    return DependencyGraph(c.width, frozenset(edges))


def is_feed_forward(g: DependencyGraph) -> bool:
    """True iff there is no directed cycle through two or more bits.

    Self-loops are allowed: a bit may read its own previous value (the
    perpetual toggle does) without creating feedback between components.
    """
    adj: dict[int, set[int]] = {i: set() for i in range(1, g.width + 1)}
    for j, i in g.edges:
        if j != i:
            adj[j].add(i)
    state: dict[int, int] = {}  # 0 visiting, 1 done

    def dfs(u: int) -> bool:
        state[u] = 0
        for v in adj[u]:
            if v not in state:
                if not dfs(v):
                    return False
            elif state[v] == 0:
                return False
        state[u] = 1
        return True

    return all(dfs(u) for u in adj if u not in state)


_ENCODING_KEYS = {"width", "labels"}


def encoding_from_json(data) -> Encoding:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise FormatError("encoding file must be a JSON object")
    unknown = set(data) - _ENCODING_KEYS
    if unknown:
        raise FormatError(f"unknown encoding keys: {sorted(unknown)}")
    if "width" not in data or "labels" not in data:
        raise FormatError("encoding file needs 'width' and 'labels'")
    width, labels = data["width"], data["labels"]
    if not isinstance(width, int) or not isinstance(labels, dict):
        raise FormatError("'width' must be an int and 'labels' an object")
    for s, c in labels.items():
        if not isinstance(c, str) or len(c) != width:
            raise WidthMismatch(f"label {c!r} for {s!r} is not {width} bits")
    return Encoding(width, dict(labels))


def encoding_to_json(e: Encoding) -> dict:
    return {"width": e.width, "labels": dict(e.labels)}


def dependency_graph_to_dot(g: DependencyGraph) -> str:
    lines = ["digraph {"]
    for i in range(1, g.width + 1):
        lines.append(f"  Q{i};")
    for j, i in sorted(g.edges):
        lines.append(f"  Q{j} -> Q{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
