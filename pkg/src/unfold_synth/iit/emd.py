"""Exact earth-mover distances for small discrete distributions.

Cause-side repertoires need the full transport problem over hypercube
states with Hamming ground distance; it is solved exactly as a linear
program (the instances here have at most a few dozen atoms).  Effect
repertoires are products of independent per-node marginals, for which
the Hamming EMD factorizes into a per-node sum of absolute marginal
differences, so no solver is needed on that side.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

__all__ = ["hamming_emd", "effect_emd", "transport"]

_hamming_cache: dict[int, np.ndarray] = {}
_emd_cache: dict[tuple[bytes, bytes], float] = {}


def _hamming_matrix(k: int) -> np.ndarray:
    got = _hamming_cache.get(k)
    if got is None:
        idx = np.arange(2**k)
        xor = idx[:, None] ^ idx[None, :]
        got = np.zeros((2**k, 2**k))
        for b in range(k):
            got += (xor >> b) & 1
        _hamming_cache[k] = got
    return got


def transport(p: np.ndarray, q: np.ndarray, cost: np.ndarray) -> float:
    """Minimum-cost transport from p to q under a cost matrix.

    Total masses may differ: the surplus on either side is penalized at
    the largest cost in the matrix per unit, which keeps the value
    finite and matches the usual unbalanced-EMD convention.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    cost = np.asarray(cost, dtype=float)
    mp, mq = p.sum(), q.sum()
    if abs(mp - mq) > 1e-12:
        ceiling = cost.max() if cost.size else 0.0
        if mp > mq:
            q = np.append(q, mp - mq)
            cost = np.hstack([cost, np.full((len(p), 1), ceiling)])
        else:
            p = np.append(p, mq - mp)
            cost = np.vstack([cost, np.full((1, len(q)), ceiling)])
    keep_p = p > 0
    keep_q = q > 0
    p, q = p[keep_p], q[keep_q]
    cost = cost[np.ix_(keep_p, keep_q)]
    if len(p) == 0 or len(q) == 0:
        return 0.0
    if len(p) == 1:
        return float(np.dot(q, cost[0]))
    if len(q) == 1:
        return float(np.dot(p, cost[:, 0]))
    rows, cols = len(p), len(q)
    # One equality per row marginal and per column marginal; the last
    # column constraint is implied by mass conservation and dropped.
    a_eq = np.zeros((rows + cols - 1, rows * cols))
    for i in range(rows):
        a_eq[i, i * cols : (i + 1) * cols] = 1.0
    for j in range(cols - 1):
        a_eq[rows + j, j::cols] = 1.0
    b_eq = np.concatenate([p, q[:-1]])
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, method="highs")
    if not res.success:
        raise RuntimeError(f"transport LP failed: {res.message}")
    return float(res.fun)


def _flat(d: np.ndarray) -> np.ndarray:
    # Fortran order keeps the little-endian convention: the first
    # remaining (lowest-index) node varies fastest in the flat vector.
    return np.asarray(d).squeeze().ravel(order="F")


def hamming_emd(d1: np.ndarray, d2: np.ndarray) -> float:
    """EMD between distributions over the same set of binary nodes."""
    f1, f2 = _flat(d1), _flat(d2)
    if f1.shape != f2.shape:
        raise ValueError("distributions live on different purviews")
    if np.array_equal(f1, f2):
        return 0.0
    key = (f1.tobytes(), f2.tobytes())
    got = _emd_cache.get(key)
    if got is None:
        k = int(np.log2(len(f1))) if len(f1) > 1 else 0
        got = transport(f1, f2, _hamming_matrix(k))
        _emd_cache[key] = got
    return got


def effect_emd(d1: np.ndarray, d2: np.ndarray) -> float:
    """Analytic Hamming EMD for product (per-node independent) repertoires:
    the sum over nodes of the absolute difference in ON-probability.
    """
    a = np.asarray(d1).squeeze()
    b = np.asarray(d2).squeeze()
    if a.shape != b.shape:
        raise ValueError("distributions live on different purviews")
    if a.ndim == 0:
        return 0.0
    total = 0.0
    for axis in range(a.ndim):
        other = tuple(i for i in range(a.ndim) if i != axis)
        total += abs(float(a.sum(axis=other)[1] - b.sum(axis=other)[1]))
    return total
