"""Transition probability matrices in state-by-node form.

Row ``r`` holds, for global state ``r``, the probability of each node
being ON at the next tick.  State indexing is little-endian: the
lowest-index node (Q1) varies fastest, so code string "110" (Q1=1,
Q2=1, Q3=0) is row 3.  The connectivity matrix records which nodes
genuinely feed which (``cm[u][v] = 1`` means u is read by v's update).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..encoding import Csa, dependency_graph
from ..errors import FormatError, NonIsomorphicCsa

__all__ = ["Tpm", "tpm_from_csa", "tpm_to_json", "tpm_from_json", "code_to_index", "index_to_code"]

CONVENTION = "little-endian"


def code_to_index(code: str) -> int:
    return sum(int(bit) << i for i, bit in enumerate(code))


def index_to_code(idx: int, n: int) -> str:
    return "".join(str((idx >> i) & 1) for i in range(n))


@dataclass(frozen=True, eq=False)
class Tpm:
    n: int
    on_probabilities: np.ndarray  # shape (2**n, n), values in [0, 1]
    cm: np.ndarray  # shape (n, n), cm[u, v] = 1 iff node u feeds node v

    def __post_init__(self):
        if self.on_probabilities.shape != (2**self.n, self.n):
            raise FormatError("TPM must be state-by-node: 2^n rows, n columns")
        if self.cm.shape != (self.n, self.n):
            raise FormatError("connectivity matrix must be n x n")
        self.on_probabilities.setflags(write=False)
        self.cm.setflags(write=False)

    @property
    def deterministic(self) -> bool:
        p = self.on_probabilities
        return bool(np.all((p == 0) | (p == 1)))


def tpm_from_csa(c: Csa) -> Tpm:
    """Node-level TPM of an isomorphic CSA (care set = all codes)."""
    full = {format(v, f"0{c.width}b") for v in range(2**c.width)}
    if frozenset(full) != c.care:
        raise NonIsomorphicCsa(
            f"care set covers {len(c.care)} of {2**c.width} codes; "
            "integrated-information analysis needs all of them"
        )
    n = c.width
    rows = np.zeros((2**n, n))
    for idx in range(2**n):
        code = index_to_code(idx, n)
        for v in range(n):
            rows[idx, v] = c.tables[v][code]
    g = dependency_graph(c)
    cm = np.zeros((n, n), dtype=int)
    for j, i in g.edges:
        cm[j - 1, i - 1] = 1
    return Tpm(n, rows, cm)


def _support_of_column(rows: np.ndarray, v: int, n: int) -> set[int]:
    """Bits the column genuinely varies with (full care set, so exact)."""
    support = set()
    col = rows[:, v]
    for u in range(n):
        flipped = np.arange(2**n) ^ (1 << u)
        if np.any(col != col[flipped]):
            support.add(u)
    return support


def tpm_to_json(t: Tpm) -> dict:
    return {
        "nodes": [f"Q{i + 1}" for i in range(t.n)],
        "convention": CONVENTION,
        "tpm": [[float(x) for x in row] for row in t.on_probabilities],
        "cm": [[int(x) for x in row] for row in t.cm],
    }


def tpm_from_json(data) -> Tpm:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise FormatError("TPM file must be a JSON object")
    if data.get("convention", CONVENTION) != CONVENTION:
        raise FormatError(
            f"unsupported state-index convention {data.get('convention')!r}"
        )
    try:
        rows = np.array(data["tpm"], dtype=float)
        nodes = list(data["nodes"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed TPM file: {exc}") from exc
    n = len(nodes)
    if rows.shape != (2**n, n):
        raise FormatError("TPM shape does not match the node list")
    if "cm" in data:
        cm = np.array(data["cm"], dtype=int)
        if cm.shape != (n, n):
            raise FormatError("connectivity matrix shape mismatch")
    else:
        cm = np.ones((n, n), dtype=int)
    # An understated connectivity matrix would silently change the
    # analysis (declared non-inputs get marginalized away); refuse it.
    for v in range(n):
        declared = {u for u in range(n) if cm[u, v]}
        actual = _support_of_column(rows, v, n)
        if not actual <= declared:
            raise FormatError(
                f"cm says node {v + 1} ignores nodes "
                f"{sorted(x + 1 for x in actual - declared)}, but its table reads them"
            )
    return Tpm(n, rows, cm)
