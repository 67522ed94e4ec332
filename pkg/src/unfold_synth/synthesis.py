"""JK excitation synthesis and two-level logic minimization.

The path from a per-bit truth table to hardware: derive the J/K input
each flip-flop needs for every global state (with generous don't-cares,
since each transition pins only one of the two channels), minimize each
channel's table into a sum-of-products, and realize the expressions as a
gate netlist in either an AND/OR/NOT/XOR or a NAND-only basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Mapping, Optional, Sequence

from .encoding import Csa, Encoding
from .automaton import Automaton
from .errors import FormatError

__all__ = [
    "ExcitationTable",
    "BooleanExpr",
    "Gate",
    "Netlist",
    "Basis",
    "excitation_from_csa",
    "minimize",
    "build_netlist",
    "netlist_to_json",
    "netlist_from_json",
    "netlist_to_dot",
]

Literal = tuple[int, bool]  # (variable index, True = positive)


@dataclass(frozen=True)
class ExcitationTable:
    """Required J/K values per bit and global code; None is a don't-care."""

    width: int
    j: tuple[Mapping[str, Optional[int]], ...]
    k: tuple[Mapping[str, Optional[int]], ...]


@dataclass(frozen=True)
class BooleanExpr:
    """A sum-of-products with an optional recognized special form.

    ``terms`` is the semantic object: a canonically ordered tuple of
    product terms, each a tuple of literals.  No terms means constant 0;
    one empty term means constant 1.  ``form`` is advisory (reporting
    and gate selection): ("const", v), ("lit", var, positive),
    ("xor", a, b) or ("xnor", a, b).
    """

    width: int
    terms: tuple[tuple[Literal, ...], ...]
    form: Optional[tuple] = None

    def evaluate(self, code: str) -> int:
        for term in self.terms:
            if all((code[var] == "1") == positive for var, positive in term):
                return 1
        return 0

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        if self.terms == ((),):
            return "1"
        rendered = []
        for term in self.terms:
            rendered.append(
                "".join(f"Q{v + 1}" if pos else f"~Q{v + 1}" for v, pos in term)
            )
        return " + ".join(rendered)


class Basis(Enum):
    AND_OR_NOT_XOR = "and"
    NAND_ONLY = "nand"


@dataclass(frozen=True)
class Gate:
    id: str
    op: str
    inputs: tuple[str, ...]


@dataclass(frozen=True)
class Netlist:
    """JK flip-flops plus an acyclic combinational gate list.

    Wire names are flip-flop outputs ("Q1"...), gate ids ("g1"...), or
    the constants "ONE"/"ZERO".  Gates appear in evaluation order.
    """

    flipflops: tuple[str, ...]
    gates: tuple[Gate, ...]
    drive: Mapping[str, Mapping[str, str]]


def excitation_from_csa(c: Csa, e: Encoding, a: Automaton) -> ExcitationTable:
    """Translate per-bit transitions into JK channel requirements.

    For each care code and bit: 0->0 pins J=0, 0->1 pins J=1, 1->0 pins
    K=1, 1->1 pins K=0; the other channel is free either way.  Codes off
    the care set are free in both channels.
    """
    if c.care != frozenset(e.labels[s] for s in a.states) or c.width != e.width:
        raise FormatError("CSA was not derived from this automaton and encoding")
    all_codes = [format(v, f"0{c.width}b") for v in range(2**c.width)]
    j_tables: list[dict[str, Optional[int]]] = []
    k_tables: list[dict[str, Optional[int]]] = []
    for i in range(c.width):
        j: dict[str, Optional[int]] = {}
        k: dict[str, Optional[int]] = {}
        for code in all_codes:
            if code not in c.care:
                j[code] = None
                k[code] = None
                continue
            cur = int(code[i])
            nxt = c.tables[i][code]
            if cur == 0:
                j[code] = nxt
                k[code] = None
            else:
                j[code] = None
                k[code] = 1 - nxt
        j_tables.append(j)
        k_tables.append(k)
    return ExcitationTable(c.width, tuple(j_tables), tuple(k_tables))


# ---------------------------------------------------------------------------
# Quine-McCluskey with Petrick-style exact cover.


def _combine(p: str, q: str) -> Optional[str]:
    """Merge two implicant patterns differing in exactly one fixed bit."""
    diff = -1
    for i, (x, y) in enumerate(zip(p, q)):
        if x != y:
            if x == "-" or y == "-" or diff >= 0:
                return None
            diff = i
    if diff < 0:
        return None
    return p[:diff] + "-" + p[diff + 1 :]


def _prime_implicants(patterns: set[str]) -> set[str]:
    primes: set[str] = set()
    current = set(patterns)
    while current:
        merged: set[str] = set()
        used: set[str] = set()
        items = sorted(current)
        for p, q in combinations(items, 2):
            m = _combine(p, q)
            if m is not None:
                merged.add(m)
                used.add(p)
                used.add(q)
        primes |= current - used
        current = merged
    return primes


def _matches(pattern: str, code: str) -> bool:
    return all(p == "-" or p == c for p, c in zip(pattern, code))


def _pattern_term(pattern: str) -> tuple[Literal, ...]:
    return tuple((i, ch == "1") for i, ch in enumerate(pattern) if ch != "-")


def _petrick(clauses: list[frozenset[str]]) -> list[frozenset[str]]:
    """All irredundant covers for the uncovered minterms (with absorption)."""
    covers: set[frozenset[str]] = {frozenset()}
    for clause in clauses:
        grown = {cover | {p} for cover in covers for p in sorted(clause)}
        pruned: set[frozenset[str]] = set()
        for c in sorted(grown, key=len):
            if not any(kept <= c for kept in pruned):
                pruned.add(c)
        covers = pruned
    return sorted(covers, key=lambda c: (len(c), sorted(c)))


def _cover_key(patterns: Sequence[str]) -> tuple:
    terms = sorted(_pattern_term(p) for p in patterns)
    literals = sum(len(t) for t in terms)
    return (len(terms), literals, terms)


def _detect_form(expr_terms: tuple, width: int) -> Optional[tuple]:
    if not expr_terms:
        return ("const", 0)
    if expr_terms == ((),):
        return ("const", 1)
    probe = BooleanExpr(width, expr_terms)
    values = [probe.evaluate(format(v, f"0{width}b")) for v in range(2**width)]
    if len(expr_terms) == 1 and len(expr_terms[0]) == 1:
        (var, pos) = expr_terms[0][0]
        return ("lit", var, pos)
    for a, b in combinations(range(width), 2):
        xors = [
            (int(format(v, f"0{width}b")[a]) ^ int(format(v, f"0{width}b")[b]))
            for v in range(2**width)
        ]
        if values == xors:
            return ("xor", a, b)
        if values == [1 - x for x in xors]:
            return ("xnor", a, b)
    return None


def minimize(table: Mapping[str, Optional[int]], width: int) -> BooleanExpr:
    """Exact two-level minimization of a three-valued truth table.

    Produces a minimum-term-count sum-of-products agreeing with every
    care entry; ties are broken by fewest total literals, then by
    canonical term order.  Entries that are None (or absent) are
    don't-cares and may be covered or not, whichever helps.
    """
    all_codes = [format(v, f"0{width}b") for v in range(2**width)]
    on = [c for c in all_codes if table.get(c) == 1]
    off = [c for c in all_codes if table.get(c) == 0]
    if not on:
        return BooleanExpr(width, (), ("const", 0))
    if not off:
        return BooleanExpr(width, ((),), ("const", 1))
    dc = [c for c in all_codes if table.get(c) not in (0, 1)]
    primes = _prime_implicants(set(on) | set(dc))

    coverage = {m: sorted(p for p in primes if _matches(p, m)) for m in on}
    essential: set[str] = set()
    for m, ps in coverage.items():
        if len(ps) == 1:
            essential.add(ps[0])
    uncovered = [
        m for m in on if not any(_matches(p, m) for p in essential)
    ]
    best: Optional[list[str]] = None
    if uncovered:
        clauses = [frozenset(coverage[m]) for m in uncovered]
        best_key = None
        for extra in _petrick(clauses):
            key = _cover_key(sorted(essential | extra))
            if best_key is None or key < best_key:
                best_key = key
                best = sorted(essential | extra)
    else:
        best = sorted(essential)
    terms = tuple(sorted(_pattern_term(p) for p in best))
    return BooleanExpr(width, terms, _detect_form(terms, width))


# ---------------------------------------------------------------------------
# Netlist construction.


class _GateBuilder:
    """Emits gates with structural dedup; ids follow creation order."""

    def __init__(self):
        self.gates: list[Gate] = []
        self._cache: dict[tuple[str, tuple[str, ...]], str] = {}

    def emit(self, op: str, inputs: Sequence[str]) -> str:
        key = (op, tuple(inputs))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        gid = f"g{len(self.gates) + 1}"
        self.gates.append(Gate(gid, op, tuple(inputs)))
        self._cache[key] = gid
        return gid


def _build_plain(b: _GateBuilder, expr: BooleanExpr) -> str:
    if expr.form and expr.form[0] == "const":
        return "ONE" if expr.form[1] else "ZERO"
    if expr.form and expr.form[0] == "lit":
        _, var, pos = expr.form
        wire = f"Q{var + 1}"
        return wire if pos else b.emit("NOT", [wire])
    if expr.form and expr.form[0] in ("xor", "xnor"):
        _, va, vb = expr.form
        x = b.emit("XOR", [f"Q{va + 1}", f"Q{vb + 1}"])
        return x if expr.form[0] == "xor" else b.emit("NOT", [x])
    term_wires = []
    for term in expr.terms:
        lits = [
            f"Q{v + 1}" if pos else b.emit("NOT", [f"Q{v + 1}"])
            for v, pos in term
        ]
        term_wires.append(lits[0] if len(lits) == 1 else b.emit("AND", lits))
    return term_wires[0] if len(term_wires) == 1 else b.emit("OR", term_wires)


def _build_nand(b: _GateBuilder, expr: BooleanExpr) -> str:
    def inv(w: str) -> str:
        return b.emit("NAND", [w, w])

    def nand(x: str, y: str) -> str:
        return b.emit("NAND", [x, y])

    def and_fold(wires: list[str]) -> str:
        acc = wires[0]
        for w in wires[1:]:
            acc = inv(nand(acc, w))
        return acc

    def or_fold(wires: list[str]) -> str:
        acc = wires[0]
        for w in wires[1:]:
            acc = nand(inv(acc), inv(w))
        return acc

    if expr.form and expr.form[0] == "const":
        return "ONE" if expr.form[1] else "ZERO"
    if expr.form and expr.form[0] == "lit":
        _, var, pos = expr.form
        wire = f"Q{var + 1}"
        return wire if pos else inv(wire)
    if expr.form and expr.form[0] in ("xor", "xnor"):
        _, va, vb = expr.form
        a, c = f"Q{va + 1}", f"Q{vb + 1}"
        m = nand(a, c)
        x = nand(nand(a, m), nand(c, m))
        return x if expr.form[0] == "xor" else inv(x)
    term_wires = []
    for term in expr.terms:
        lits = [f"Q{v + 1}" if pos else inv(f"Q{v + 1}") for v, pos in term]
        term_wires.append(and_fold(lits))
    return or_fold(term_wires)


def build_netlist(ex: ExcitationTable, basis: Basis = Basis.AND_OR_NOT_XOR) -> Netlist:
    """One minimized gate subtree per J/K channel, shared where identical."""
    builder = _GateBuilder()
    realize = _build_plain if basis is Basis.AND_OR_NOT_XOR else _build_nand
    drive: dict[str, dict[str, str]] = {}
    for i in range(ex.width):
        ff = f"Q{i + 1}"
        j_expr = minimize(ex.j[i], ex.width)
        k_expr = minimize(ex.k[i], ex.width)
        drive[ff] = {
            "J": realize(builder, j_expr),
            "K": realize(builder, k_expr),
        }
    flipflops = tuple(f"Q{i + 1}" for i in range(ex.width))
    return Netlist(flipflops, tuple(builder.gates), drive)


_NETLIST_KEYS = {"flipflops", "gates", "drive"}
_OPS = {"AND", "OR", "NOT", "XOR", "NAND"}


def netlist_to_json(n: Netlist) -> dict:
    return {
        "flipflops": list(n.flipflops),
        "gates": [{"id": g.id, "op": g.op, "in": list(g.inputs)} for g in n.gates],
        "drive": {ff: dict(ch) for ff, ch in n.drive.items()},
    }


def netlist_from_json(data) -> Netlist:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise FormatError("netlist file must be a JSON object")
    unknown = set(data) - _NETLIST_KEYS
    if unknown:
        raise FormatError(f"unknown netlist keys: {sorted(unknown)}")
    try:
        flipflops = tuple(data["flipflops"])
        gates = tuple(
            Gate(g["id"], g["op"], tuple(g["in"])) for g in data["gates"]
        )
        drive = {
            ff: {"J": ch["J"], "K": ch["K"]} for ff, ch in data["drive"].items()
        }
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed netlist: {exc}") from exc
    for g in gates:
        if g.op not in _OPS:
            raise FormatError(f"unknown gate op {g.op!r}")
    return Netlist(flipflops, gates, drive)


def netlist_to_dot(n: Netlist) -> str:
    lines = ["digraph {", "  rankdir=LR;"]
    for ff in n.flipflops:
        lines.append(f'  {ff} [shape=box,label="{ff} (JK)"];')
    for g in n.gates:
        lines.append(f'  {g.id} [label="{g.op}"];')
        for w in g.inputs:
            lines.append(f"  {w} -> {g.id};")
    for ff, channels in sorted(n.drive.items()):
        for ch in ("J", "K"):
            wire = channels[ch]
            if wire in ("ONE", "ZERO"):
                const_id = f"{ff}_{ch}_{wire}"
                lines.append(f'  {const_id} [shape=plaintext,label="{wire}"];')
                lines.append(f'  {const_id} -> {ff} [label="{ch}"];')
            else:
                lines.append(f'  {wire} -> {ff} [label="{ch}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
