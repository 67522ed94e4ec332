"""Clock-synchronous netlist simulation and FSA-equivalence checking."""

from __future__ import annotations

from typing import Mapping

from .automaton import Automaton, ValidationReport
from .encoding import Encoding
from .errors import DanglingWire
from .synthesis import Netlist

__all__ = ["step", "run", "verify_against_fsa", "state_from_code", "code_from_state"]

CircuitState = dict[str, int]


def state_from_code(n: Netlist, code: str) -> CircuitState:
    if len(code) != len(n.flipflops):
        raise ValueError(f"code {code!r} does not fit {len(n.flipflops)} flip-flops")
    return {ff: int(bit) for ff, bit in zip(n.flipflops, code)}


def code_from_state(n: Netlist, s: Mapping[str, int]) -> str:
    return "".join(str(s[ff]) for ff in n.flipflops)


def _evaluate_gates(n: Netlist, s: Mapping[str, int]) -> dict[str, int]:
    wires: dict[str, int] = {"ONE": 1, "ZERO": 0}
    wires.update(s)
    for g in n.gates:
        try:
            vals = [wires[w] for w in g.inputs]
        except KeyError as missing:
            raise DanglingWire(f"gate {g.id} reads undriven wire {missing}") from None
        if g.op == "AND":
            out = int(all(vals))
        elif g.op == "OR":
            out = int(any(vals))
        elif g.op == "NOT":
            out = 1 - vals[0]
        elif g.op == "XOR":
            out = vals[0] ^ vals[1]
        elif g.op == "NAND":
            out = 1 - int(all(vals))
        else:
            raise DanglingWire(f"gate {g.id} has unknown op {g.op!r}")
        wires[g.id] = out
    return wires


def step(n: Netlist, s: CircuitState) -> CircuitState:
    """One clock tick: evaluate the combinational part, then every
    flip-flop applies JK semantics (00 latch, 01 reset, 10 set, 11 toggle)
    simultaneously.
    """
    if set(s) != set(n.flipflops):
        raise DanglingWire("circuit state does not match the netlist's flip-flops")
    wires = _evaluate_gates(n, s)
    out: CircuitState = {}
    for ff in n.flipflops:
        channels = n.drive.get(ff)
        if channels is None or "J" not in channels or "K" not in channels:
            raise DanglingWire(f"flip-flop {ff} has an undriven channel")
        try:
            j, k = wires[channels["J"]], wires[channels["K"]]
        except KeyError as missing:
            raise DanglingWire(f"{ff} channel reads undriven wire {missing}") from None
        q = s[ff]
        if j == 0 and k == 0:
            out[ff] = q
        elif j == 0 and k == 1:
            out[ff] = 0
        elif j == 1 and k == 0:
            out[ff] = 1
        else:
            out[ff] = 1 - q
    return out


def run(n: Netlist, s0: CircuitState, steps: int) -> list[CircuitState]:
    """Iterate ``step``; returns the ``steps + 1`` visited states."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    trace = [dict(s0)]
    current = s0
    for _ in range(steps):
        current = step(n, current)
        trace.append(current)
    return trace


def verify_against_fsa(n: Netlist, a: Automaton, e: Encoding) -> ValidationReport:
    """Check that one tick of the netlist tracks the automaton's successor
    map under the encoding, for every state; empty report = isomorphic.
    """
    mismatches = []
    for s in a.states:
        want = e.labels[a.next[s]]
        got = code_from_state(n, step(n, state_from_code(n, e.labels[s])))
        if got != want:
            mismatches.append(
                f"state {s!r} ({e.labels[s]}): circuit steps to {got}, FSA needs {want}"
            )
    return ValidationReport(tuple(mismatches))
