"""Preserved partitions and hierarchical (feed-forward) encodings.

A partition of the state set is preserved when every block maps wholly
into a single block under the successor map.  A nested sequence of
preserved partitions that halves every block at each level induces a
binary encoding in which bit ``i`` depends only on bits ``1..i`` — the
encoding that unfolds a recurrent implementation into a feed-forward one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .automaton import Automaton, ValidationReport
from .encoding import Encoding
from .errors import (
    BlockNotInPartition,
    FormatError,
    NoIsomorphicDecomposition,
    NotPowerOfTwo,
    PartitionMismatch,
)

__all__ = [
    "Partition",
    "NestedSequence",
    "is_preserved",
    "is_preserved_block",
    "find_nested_sequence",
    "encoding_from_sequence",
    "validate_sequence",
    "sequence_from_encoding",
    "sequence_to_json",
    "sequence_from_json",
]

Block = tuple[str, ...]


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering the state set.

    Blocks and the states inside them are kept in state-declaration order
    so that searches and child labelling are deterministic.
    """

    blocks: tuple[Block, ...]

    @staticmethod
    def of(blocks: Sequence[Sequence[str]], a: Automaton) -> "Partition":
        """Canonicalize raw block lists against an automaton's state order."""
        idx = a.index
        ordered = tuple(
            tuple(sorted(b, key=idx)) for b in blocks
        )
        return Partition(tuple(sorted(ordered, key=lambda b: idx(b[0]))))

    def block_of(self) -> dict[str, int]:
        """Map each state to the index of its block."""
        owner: dict[str, int] = {}
        for i, b in enumerate(self.blocks):
            for s in b:
                owner[s] = i
        return owner

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class NestedSequence:
    """A refinement chain of even-split preserved partitions.

    ``states`` records the declaration order used for deterministic child
    labelling; ``levels[-1]`` consists of singletons.
    """

    states: tuple[str, ...]
    levels: tuple[Partition, ...]


def _check_partition(p: Partition, a: Automaton) -> None:
    seen: list[str] = []
    for b in p.blocks:
        if not b:
            raise PartitionMismatch("empty block")
        seen.extend(b)
    if len(seen) != len(set(seen)):
        raise PartitionMismatch("blocks overlap")
    if set(seen) != set(a.states):
        raise PartitionMismatch("blocks do not cover the state set")


def is_preserved(p: Partition, a: Automaton) -> bool:
    """True iff every block's successors land in a single block."""
    _check_partition(p, a)
    owner = p.block_of()
    for b in p.blocks:
        targets = {owner[a.next[s]] for s in b}
        if len(targets) > 1:
            return False
    return True


def is_preserved_block(b: Sequence[str], p: Partition, a: Automaton) -> bool:
    """True iff one specific block of ``p`` maps into a single block."""
    key = tuple(sorted(b, key=a.index))
    if key not in p.blocks:
        raise BlockNotInPartition(f"block {list(b)} is not a block of the partition")
    owner = p.block_of()
    return len({owner[a.next[s]] for s in key}) <= 1


def _even_splits(block: Block, a: Automaton) -> Iterator[tuple[Block, Block]]:
    """All halvings of a block, first half pinned to contain block[0].

    Pinning the earliest-declared state into the first half enumerates
    each unordered split exactly once, in a deterministic order, and makes
    the first half the child that receives bit value 0.
    """
    head, rest = block[0], block[1:]
    half = len(block) // 2
    for chosen in combinations(rest, half - 1):
        first = (head,) + chosen
        second = tuple(s for s in rest if s not in chosen)
        yield first, second


def _refinements(p: Partition, a: Automaton) -> Iterator[Partition]:
    """Preserved even-split refinements of ``p``, deterministically ordered.

    Splits are chosen block by block in declaration order.  Once some
    blocks are split, the choices for later blocks are constrained: the
    two children of any split block must each map into a single child of
    their (possibly split) image block.  When a block's image is already
    split, its own split is forced by where its states' successors went.
    """
    owner = p.block_of()
    blocks = p.blocks
    k = len(blocks)
    image = [owner[a.next[b[0]]] for b in blocks]
    splits: list[Optional[tuple[Block, Block]]] = [None] * k

    def side(i: int, s: str) -> int:
        return 0 if s in splits[i][0] else 1

    def consistent(i: int) -> bool:
        """Check every constraint that touches block i and is decidable."""
        for j in range(k):
            if splits[j] is None or splits[image[j]] is None:
                continue
            if j != i and image[j] != i:
                continue
            for child in splits[j]:
                if len({side(image[j], a.next[s]) for s in child}) > 1:
                    return False
        return True

    def candidates(i: int) -> Iterator[tuple[Block, Block]]:
        img = image[i]
        if splits[img] is not None and img != i:
            zero = tuple(s for s in blocks[i] if side(img, a.next[s]) == 0)
            one = tuple(s for s in blocks[i] if side(img, a.next[s]) == 1)
            if zero and one:
                # Split forced by where the block's successors already landed.
                if len(zero) == len(one):
                    yield (zero, one) if blocks[i][0] in zero else (one, zero)
                return
            # Successors all land on one side: any even split will do.
        yield from _even_splits(blocks[i], a)

    def solve(i: int) -> Iterator[Partition]:
        if i == k:
            children = []
            for sp in splits:
                children.extend(sp)
            children.sort(key=lambda b: a.index(b[0]))
            yield Partition(tuple(children))
            return
        for sp in candidates(i):
            splits[i] = sp
            if consistent(i):
                yield from solve(i + 1)
            splits[i] = None

    yield from solve(0)


def find_nested_sequence(a: Automaton) -> NestedSequence:
    """Depth-first search for a nested sequence of even-split preserved
    partitions, returning the first one found in canonical order.

    Raises NotPowerOfTwo for impossible sizes and
    NoIsomorphicDecomposition when the exhaustive search comes up empty.
    """
    n = len(a.states)
    if n == 0 or n & (n - 1):
        raise NotPowerOfTwo(f"{n} states; need a power of two")
    top = Partition((tuple(a.states),))

    def descend(p: Partition, acc: list[Partition]) -> Optional[list[Partition]]:
        if all(len(b) == 1 for b in p.blocks):
            return acc
        for refined in _refinements(p, a):
            result = descend(refined, acc + [refined])
            if result is not None:
                return result
        return None

    found = descend(top, [])
    if found is None:
        raise NoIsomorphicDecomposition(
            "no even-split preserved partition chain exists for this automaton"
        )
    return NestedSequence(tuple(a.states), tuple(found))


def encoding_from_sequence(ns: NestedSequence) -> Encoding:
    """Hierarchical encoding induced by a nested sequence.

    Bit ``i`` of a state's code says which child of its level-``i-1``
    block the state belongs to; the child containing the parent's
    earliest-declared state is child 0.
    """
    width = len(ns.levels)
    order = {s: i for i, s in enumerate(ns.states)}
    codes = {s: [] for s in ns.states}
    parent = Partition((tuple(ns.states),))
    for level in ns.levels:
        owner = level.block_of()
        for pb in parent.blocks:
            zero_block = level.blocks[owner[pb[0]]]
            for s in pb:
                codes[s].append("0" if s in zero_block else "1")
        parent = level
    labels = {s: "".join(bits) for s, bits in codes.items()}
    return Encoding(width, labels)


def validate_sequence(ns: NestedSequence, a: Automaton) -> ValidationReport:
    """Check refinement, even splits, singleton bottom, and preservation."""
    problems: list[str] = []
    if set(ns.states) != set(a.states):
        problems.append("sequence states differ from the automaton's")
        return ValidationReport(tuple(problems))
    parent = Partition((tuple(a.states),))
    for li, level in enumerate(ns.levels, start=1):
        try:
            _check_partition(level, a)
        except PartitionMismatch as e:
            problems.append(f"level {li}: {e}")
            continue
        owner = {s: i for i, b in enumerate(parent.blocks) for s in b}
        for b in level.blocks:
            parents = {owner[s] for s in b}
            if len(parents) > 1:
                problems.append(f"level {li}: block {list(b)} straddles parent blocks")
            else:
                psize = len(parent.blocks[parents.pop()])
                if 2 * len(b) != psize:
                    problems.append(
                        f"level {li}: block {list(b)} is not half of its parent"
                    )
        block_owner = level.block_of()
        for b in level.blocks:
            if len({block_owner[a.next[s]] for s in b}) > 1:
                problems.append(f"level {li}: block {list(b)} is not preserved")
        parent = level
    if not ns.levels:
        if len(a.states) != 1:
            problems.append("empty sequence on a multi-state automaton")
    elif any(len(b) != 1 for b in ns.levels[-1].blocks):
        problems.append("last level is not all singletons")
    return ValidationReport(tuple(problems))


def sequence_from_encoding(e: Encoding, a: Automaton) -> NestedSequence:
    """Reconstruct the partition chain whose induced codes are ``e``.

    Level ``i`` groups states by their first ``i`` label bits.  Useful for
    validating an externally supplied hierarchical labelling.
    """
    levels = []
    for i in range(1, e.width + 1):
        groups: dict[str, list[str]] = {}
        for s in a.states:
            groups.setdefault(e.labels[s][:i], []).append(s)
        levels.append(Partition.of(list(groups.values()), a))
    return NestedSequence(tuple(a.states), tuple(levels))


def sequence_to_json(ns: NestedSequence) -> dict:
    return {"levels": [[list(b) for b in p.blocks] for p in ns.levels]}


def sequence_from_json(data, a: Automaton) -> NestedSequence:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "levels" not in data:
        raise FormatError("nested-sequence file needs a 'levels' list")
    levels = tuple(Partition.of(level, a) for level in data["levels"])
    return NestedSequence(tuple(a.states), levels)
