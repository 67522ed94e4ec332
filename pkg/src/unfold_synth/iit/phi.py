"""Per-state integrated information for small deterministic node systems.

The computation follows the standard three-stage scheme:

1. For every mechanism (node subset in its current state), find the
   maximally irreducible cause and effect: over every purview, compare
   the constrained repertoire against its best factorization across all
   bipartitions of the mechanism/purview pair (small phi = earth-mover
   distance, Hamming ground metric on the cause side, analytic product
   form on the effect side).  A mechanism with irreducible cause AND
   effect contributes a concept.
2. The set of concepts forms the cause-effect structure of the state.
3. For every unidirectional bipartition of the node set, sever the
   connections from one part to the other (severed inputs are replaced
   by uniform noise), rebuild the structure, and measure how far it
   moved (an EMD between structures, with concept-to-concept ground
   distances and the unconstrained "null concept" absorbing any excess).
   Big Phi is the minimum over cuts.

Distances are rounded to six decimals before comparisons, which makes
tie handling exact; enumeration orders are fixed, so results are fully
deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from ..errors import SystemTooLarge
from .emd import effect_emd, hamming_emd, transport
from .tpm import Tpm, index_to_code

__all__ = [
    "CAUSE",
    "EFFECT",
    "MAX_NODES",
    "PhiResult",
    "SystemCut",
    "Concept",
    "compute_phi",
    "phi_all_states",
    "phi_report_json",
]

CAUSE = "cause"
EFFECT = "effect"
PRECISION = 6
MAX_NODES = 5

Nodes = tuple[int, ...]


def _round(x: float) -> float:
    r = round(x, PRECISION)
    return 0.0 if r == 0 else r


@dataclass(frozen=True)
class SystemCut:
    """Sever every connection from ``frm`` into ``to`` (unidirectional)."""

    frm: Nodes
    to: Nodes

    def severs(self, u: int, v: int) -> bool:
        return u in self.frm and v in self.to

    def splits(self, mechanism: Nodes) -> bool:
        return bool(set(mechanism) & set(self.frm)) and bool(
            set(mechanism) & set(self.to)
        )

    def render(self) -> str:
        lhs = ",".join(f"Q{i + 1}" for i in self.frm)
        rhs = ",".join(f"Q{i + 1}" for i in self.to)
        return f"{lhs} -/-> {rhs}"


@dataclass(frozen=True)
class Mice:
    """Maximally irreducible cause or effect of one mechanism."""

    direction: str
    mechanism: Nodes
    purview: Nodes
    phi: float
    repertoire: np.ndarray
    partition: Optional[tuple] = None


@dataclass(frozen=True)
class Concept:
    mechanism: Nodes
    phi: float
    cause: Mice
    effect: Mice


@dataclass(frozen=True)
class PhiResult:
    state: str
    big_phi: float
    mip: Optional[SystemCut]
    concepts: tuple[tuple[Nodes, float], ...]


def _powerset(items: Sequence[int], nonempty: bool = True):
    out = []
    for size in range(0 if not nonempty else 1, len(items) + 1):
        out.extend(combinations(items, size))
    return out


def _mechanism_bipartitions(mechanism: Nodes):
    """Unordered two-way splits of a mechanism, one part possibly empty."""
    rest = mechanism[1:]
    for mask in range(2 ** len(rest)):
        part = tuple(rest[i] for i in range(len(rest)) if mask >> i & 1)
        other = tuple(m for m in mechanism if m not in part)
        yield part, other


def _purview_bipartitions(purview: Nodes):
    """Ordered two-way splits of a purview, either part possibly empty."""
    for mask in range(2 ** len(purview)):
        part = tuple(purview[i] for i in range(len(purview)) if mask >> i & 1)
        other = tuple(z for z in purview if z not in part)
        yield part, other


class _System:
    """One node system at one current state, under one (or no) cut."""

    def __init__(self, tpm: Tpm, state: tuple[int, ...], cut: Optional[SystemCut]):
        self.n = tpm.n
        self.state = state
        self.cut = cut
        shape = [2] * self.n
        base = [
            tpm.on_probabilities[:, v].reshape(shape, order="F")
            for v in range(self.n)
        ]
        if cut is None:
            self.cpt = base
        else:
            self.cpt = []
            for v in range(self.n):
                t = base[v]
                for u in range(self.n):
                    if cut.severs(u, v):
                        t = t.mean(axis=u, keepdims=True)
                        t = np.broadcast_to(t, shape)
                self.cpt.append(t)
        self._effect_factor: dict = {}
        self._cause_factor: dict = {}
        self._repertoires: dict = {}
        self._mips: dict = {}

    # -- repertoires --------------------------------------------------

    def _node_effect(self, z: int, mechanism: Nodes) -> np.ndarray:
        """Distribution of node z at t+1 given the mechanism's state."""
        key = (z, mechanism)
        got = self._effect_factor.get(key)
        if got is None:
            t = self.cpt[z]
            for axis in range(self.n):
                if axis in mechanism:
                    t = np.take(t, [self.state[axis]], axis=axis)
                else:
                    t = t.mean(axis=axis, keepdims=True)
            p = float(t.reshape(()))
            shape = [1] * self.n
            shape[z] = 2
            got = np.array([1.0 - p, p]).reshape(shape)
            self._effect_factor[key] = got
        return got

    def _node_cause(self, m: int, purview: Nodes) -> np.ndarray:
        """Likelihood of node m's current state as a function of the
        purview's previous state (other inputs uniformly averaged)."""
        key = (m, purview)
        got = self._cause_factor.get(key)
        if got is None:
            t = self.cpt[m]
            lik = t if self.state[m] == 1 else 1.0 - t
            for axis in range(self.n):
                if axis not in purview:
                    lik = lik.mean(axis=axis, keepdims=True)
            got = lik
            self._cause_factor[key] = got
        return got

    def repertoire(self, direction: str, mechanism: Nodes, purview: Nodes) -> np.ndarray:
        key = (direction, mechanism, purview)
        got = self._repertoires.get(key)
        if got is not None:
            return got
        if not purview:
            rep = np.ones([1] * self.n)
        elif direction == EFFECT:
            rep = np.ones([1] * self.n)
            for z in purview:
                rep = rep * self._node_effect(z, mechanism)
        else:
            if not mechanism:
                shape = [2 if i in purview else 1 for i in range(self.n)]
                rep = np.full(shape, 1.0 / 2 ** len(purview))
            else:
                rep = np.ones([1] * self.n)
                for m in mechanism:
                    rep = rep * self._node_cause(m, purview)
                total = rep.sum()
                if total > 0:
                    rep = rep / total
                else:
                    shape = [2 if i in purview else 1 for i in range(self.n)]
                    rep = np.zeros(shape)
        self._repertoires[key] = rep
        return rep

    def unconstrained(self, direction: str, purview: Nodes) -> np.ndarray:
        return self.repertoire(direction, (), purview)

    def expand(self, direction: str, rep: np.ndarray, purview: Nodes, target: Nodes) -> np.ndarray:
        """Distribute a repertoire over a larger purview, filling the new
        nodes with their unconstrained distribution."""
        extra = tuple(sorted(set(target) - set(purview)))
        if not extra:
            return rep
        out = rep * self.unconstrained(direction, extra)
        total = out.sum()
        return out / total if total > 0 else out

    # -- small phi ----------------------------------------------------

    def find_mip(self, direction: str, mechanism: Nodes, purview: Nodes):
        key = (direction, mechanism, purview)
        got = self._mips.get(key)
        if got is not None:
            return got
        whole = self.repertoire(direction, mechanism, purview)
        distance = hamming_emd if direction == CAUSE else effect_emd
        result = None
        if direction == CAUSE and not whole.any():
            # The mechanism's state is unreachable: nothing to integrate.
            result = (0.0, None)
        else:
            best = np.inf
            best_partition = None
            for m1, m2 in _mechanism_bipartitions(mechanism):
                for z1, z2 in _purview_bipartitions(purview):
                    if not (m1 or z1) or not (m2 or z2):
                        continue
                    partitioned = self.repertoire(direction, m1, z1) * self.repertoire(
                        direction, m2, z2
                    )
                    phi = _round(distance(whole, partitioned))
                    if phi == 0.0:
                        best, best_partition = 0.0, ((m1, z1), (m2, z2))
                        break
                    if phi < best:
                        best, best_partition = phi, ((m1, z1), (m2, z2))
                if best == 0.0:
                    break
            result = (best if np.isfinite(best) else 0.0, best_partition)
        self._mips[key] = result
        return result

    def find_mice(self, direction: str, mechanism: Nodes) -> Mice:
        best = None
        best_key = None
        for purview in _powerset(range(self.n)):
            phi, partition = self.find_mip(direction, mechanism, purview)
            key = (phi, len(purview))
            if best_key is None or key > best_key:
                best_key = key
                best = Mice(
                    direction,
                    mechanism,
                    purview,
                    phi,
                    self.repertoire(direction, mechanism, purview),
                    partition,
                )
        return best

    def concept(self, mechanism: Nodes) -> Optional[Concept]:
        cause = self.find_mice(CAUSE, mechanism)
        if cause.phi == 0.0:
            return None
        effect = self.find_mice(EFFECT, mechanism)
        phi = min(cause.phi, effect.phi)
        if phi == 0.0:
            return None
        return Concept(mechanism, phi, cause, effect)

    def ces(self, mechanisms: Sequence[Nodes]) -> list[Concept]:
        out = []
        for m in mechanisms:
            c = self.concept(m)
            if c is not None:
                out.append(c)
        return out

    def null_concept_repertoires(self) -> tuple[np.ndarray, np.ndarray]:
        full = tuple(range(self.n))
        return self.unconstrained(CAUSE, full), self.unconstrained(EFFECT, full)


# ---------------------------------------------------------------------------
# Distances between cause-effect structures.


def _concept_reps(sys: _System, concept: Optional[Concept], cause_target: Nodes, effect_target: Nodes):
    if concept is None:  # the null concept
        cause = sys.unconstrained(CAUSE, cause_target)
        effect = sys.unconstrained(EFFECT, effect_target)
        return cause, effect
    cause = sys.expand(CAUSE, concept.cause.repertoire, concept.cause.purview, cause_target)
    effect = sys.expand(
        EFFECT, concept.effect.repertoire, concept.effect.purview, effect_target
    )
    return cause, effect


def _concept_distance(sys: _System, c1: Optional[Concept], c2: Optional[Concept]) -> float:
    """Ground distance between two concepts (either may be the null one):
    cause-side EMD plus effect-side EMD over the joined purviews."""
    cause_target = tuple(
        sorted(
            set(c1.cause.purview if c1 else ())
            | set(c2.cause.purview if c2 else ())
        )
    )
    effect_target = tuple(
        sorted(
            set(c1.effect.purview if c1 else ())
            | set(c2.effect.purview if c2 else ())
        )
    )
    cause1, effect1 = _concept_reps(sys, c1, cause_target, effect_target)
    cause2, effect2 = _concept_reps(sys, c2, cause_target, effect_target)
    return hamming_emd(cause1, cause2) + effect_emd(effect1, effect2)


def _emd_eq(a: Concept, b: Concept) -> bool:
    return (
        a.mechanism == b.mechanism
        and a.phi == b.phi
        and a.cause.purview == b.cause.purview
        and a.effect.purview == b.effect.purview
        and np.array_equal(a.cause.repertoire, b.cause.repertoire)
        and np.array_equal(a.effect.repertoire, b.effect.repertoire)
    )


def _ces_distance(sys: _System, ces_a: list[Concept], ces_b: list[Concept]) -> float:
    """EMD between two cause-effect structures.

    Matching concepts cancel.  If leftovers exist on only one side, each
    simply decays to the null concept; otherwise mass flows between the
    leftover concepts, with the null concept absorbing/supplying the
    difference in total small phi.
    """
    only_a = [c for c in ces_a if not any(_emd_eq(c, d) for d in ces_b)]
    only_b = [d for d in ces_b if not any(_emd_eq(d, c) for c in ces_a)]
    if not only_a or not only_b:
        total = sum(
            c.phi * _concept_distance(sys, c, None) for c in only_a + only_b
        )
        return _round(total)
    na, nb = len(only_a), len(only_b)
    cost = np.zeros((na + 1, nb + 1))
    for i, c in enumerate(only_a):
        for j, d in enumerate(only_b):
            cost[i, j] = _concept_distance(sys, c, d)
        cost[i, nb] = _concept_distance(sys, c, None)
    for j, d in enumerate(only_b):
        cost[na, j] = _concept_distance(sys, None, d)
    supply = np.array([c.phi for c in only_a] + [0.0])
    demand = np.array([d.phi for d in only_b] + [0.0])
    residual = supply.sum() - demand.sum()
    if residual > 0:
        demand[-1] = residual
    elif residual < 0:
        supply[-1] = -residual
    return _round(transport(supply, demand, cost))


# ---------------------------------------------------------------------------
# Big phi.


def _system_cuts(n: int) -> list[SystemCut]:
    nodes = tuple(range(n))
    cuts = []
    for mask in range(1, 2**n - 1):
        frm = tuple(i for i in nodes if mask >> i & 1)
        to = tuple(i for i in nodes if not mask >> i & 1)
        cuts.append(SystemCut(frm, to))
    return cuts


def _parse_state(tpm: Tpm, state) -> tuple[int, ...]:
    if isinstance(state, str):
        if len(state) != tpm.n or set(state) - {"0", "1"}:
            raise ValueError(f"state {state!r} is not a {tpm.n}-bit code")
        return tuple(int(b) for b in state)
    bits = tuple(int(b) for b in state)
    if len(bits) != tpm.n or set(bits) - {0, 1}:
        raise ValueError(f"state {state!r} is not a {tpm.n}-bit assignment")
    return bits


def compute_phi(tpm: Tpm, state, exhaustive: bool = False) -> PhiResult:
    """Big Phi of one global state, with the minimizing cut.

    With ``exhaustive`` set, every cut is evaluated by full
    recomputation; by default, cuts that sever no actual connection are
    credited with distance zero outright (the severed inputs were never
    read, so the rebuilt structure is bit-identical), and the cut loop
    stops early once the minimum cannot drop further.
    """
    if tpm.n > MAX_NODES:
        raise SystemTooLarge(
            f"{tpm.n} nodes; exhaustive analysis is capped at {MAX_NODES}"
        )
    bits = _parse_state(tpm, state)
    code = "".join(str(b) for b in bits)
    uncut = _System(tpm, bits, None)
    mechanisms = _powerset(range(tpm.n))
    ces = uncut.ces(mechanisms)
    concepts = tuple((c.mechanism, c.phi) for c in ces)
    cuts = _system_cuts(tpm.n)
    if not ces or not cuts:
        return PhiResult(code, 0.0, None, concepts)
    ces_mechs = {c.mechanism for c in ces}
    best: Optional[tuple[float, SystemCut]] = None
    for cut in cuts:
        severs_real_edge = any(
            tpm.cm[u, v] and cut.severs(u, v)
            for u in cut.frm
            for v in cut.to
        )
        if not severs_real_edge and not exhaustive:
            dist = 0.0
        else:
            cut_sys = _System(tpm, bits, cut)
            candidates = sorted(
                ces_mechs | {m for m in mechanisms if cut.splits(m)},
                key=lambda m: (len(m), m),
            )
            cut_ces = cut_sys.ces(candidates)
            dist = _ces_distance(uncut, ces, cut_ces)
        if best is None or dist < best[0]:
            best = (dist, cut)
        if best[0] == 0.0 and not exhaustive:
            break
    return PhiResult(code, best[0], best[1], concepts)


def phi_all_states(tpm: Tpm, exhaustive: bool = False) -> list[PhiResult]:
    """``compute_phi`` for every global state, in state-index order."""
    codes = [index_to_code(i, tpm.n) for i in range(2**tpm.n)]
    workers = os.environ.get("UNFOLD_SYNTH_THREADS")
    if workers and int(workers) > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            return list(pool.map(lambda c: compute_phi(tpm, c, exhaustive), codes))
    return [compute_phi(tpm, c, exhaustive) for c in codes]


def phi_report_json(results: Sequence[PhiResult]) -> dict:
    states = {}
    for r in results:
        states[r.state] = {
            "phi": r.big_phi,
            "cut": r.mip.render() if r.mip else None,
            "concepts": [
                {
                    "mechanism": [f"Q{i + 1}" for i in mech],
                    "phi": phi,
                }
                for mech, phi in r.concepts
            ],
        }
    return {"states": states}
