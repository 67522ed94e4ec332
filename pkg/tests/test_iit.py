import random

import numpy as np
import pytest

from unfold_synth.encoding import dependency_graph, derive_csa, is_feed_forward
from unfold_synth.errors import FormatError, NonIsomorphicCsa, SystemTooLarge
from unfold_synth.iit import (
    Tpm,
    compute_phi,
    phi_all_states,
    phi_report_json,
    tpm_from_csa,
    tpm_from_json,
    tpm_to_json,
)
from unfold_synth.iit.phi import _System
from unfold_synth.iit.tpm import code_to_index

from .conftest import (
    CONSCIOUS_LABELS,
    HIERARCHICAL_LABELS,
    automaton_from_code_table,
    identity_encoding,
)
from unfold_synth.encoding import Csa, encode


def tollbooth_tpm(tollbooth, labels):
    return tpm_from_csa(derive_csa(tollbooth, encode(tollbooth, labels)))


def random_feed_forward_table(seed: int, n: int = 3) -> dict[str, str]:
    """Random bit-update tables where some node ordering makes every node
    read only itself and earlier nodes; feed-forward by construction."""
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    allowed = {}
    for pos, v in enumerate(order):
        allowed[v] = [order[j] for j in range(pos + 1)]
    funcs = []
    for v in range(n):
        table = {}
        for mask in range(2 ** len(allowed[v])):
            table[mask] = rng.randint(0, 1)
        funcs.append(table)
    out = {}
    for idx in range(2**n):
        bits = [(idx >> i) & 1 for i in range(n)]
        nxt = []
        for v in range(n):
            key = 0
            for pos, u in enumerate(allowed[v]):
                key |= bits[u] << pos
            nxt.append(str(funcs[v][key]))
        out["".join(str(b) for b in bits)] = "".join(nxt)
    return out


def csa_from_table(table: dict[str, str]) -> Csa:
    a = automaton_from_code_table(table)
    return derive_csa(a, identity_encoding(a))


# -- tpm_from_csa ---------------------------------------------------------------


def test_hierarchical_tpm_row_for_000(tollbooth):
    t = tollbooth_tpm(tollbooth, HIERARCHICAL_LABELS)
    assert list(t.on_probabilities[code_to_index("000")]) == [1, 0, 0]


def test_conscious_tpm_row_for_000(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    assert list(t.on_probabilities[code_to_index("000")]) == [1, 1, 0]


def test_single_toggle_node_tpm():
    csa = csa_from_table({"0": "1", "1": "0"})
    t = tpm_from_csa(csa)
    assert t.on_probabilities.tolist() == [[1.0], [0.0]]


def test_non_isomorphic_care_set_rejected(tollbooth):
    csa = derive_csa(tollbooth, encode(tollbooth, CONSCIOUS_LABELS))
    partial = Csa(3, tuple(dict(list(t.items())[:4]) for t in csa.tables),
                  frozenset(list(csa.care)[:4]))
    with pytest.raises(NonIsomorphicCsa):
        tpm_from_csa(partial)


def test_tpm_rows_are_deterministic(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    assert t.deterministic


# -- compute_phi ----------------------------------------------------------------


def test_hierarchical_phi_vanishes_everywhere(tollbooth):
    t = tollbooth_tpm(tollbooth, HIERARCHICAL_LABELS)
    for r in phi_all_states(t):
        assert r.big_phi == 0.0


def test_conscious_phi_positive_sample_states(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    for code in ("000", "110", "111"):
        r = compute_phi(t, code)
        assert r.big_phi > 1e-9
        assert r.mip is not None


def test_exhaustive_and_shortcut_paths_agree(tollbooth):
    t = tollbooth_tpm(tollbooth, HIERARCHICAL_LABELS)
    for code in ("000", "110"):
        assert compute_phi(t, code).big_phi == compute_phi(t, code, exhaustive=True).big_phi
    t2 = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    assert (
        compute_phi(t2, "000").big_phi
        == compute_phi(t2, "000", exhaustive=True).big_phi
    )


def test_feed_forward_systems_have_zero_phi_exhaustively():
    # Full cut evaluation, no structural shortcuts: the zero comes out of
    # the arithmetic, not out of the connectivity check.
    for seed in range(8):
        csa = csa_from_table(random_feed_forward_table(seed))
        assert is_feed_forward(dependency_graph(csa))
        t = tpm_from_csa(csa)
        for r in phi_all_states(t, exhaustive=True):
            assert abs(r.big_phi) <= 1e-9


def test_determinism_bit_identical(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    a = compute_phi(t, "010")
    b = compute_phi(t, "010")
    assert a == b
    assert repr(a.big_phi) == repr(b.big_phi)


def test_single_node_system_has_zero_phi():
    t = tpm_from_csa(csa_from_table({"0": "1", "1": "0"}))
    results = phi_all_states(t)
    assert [r.big_phi for r in results] == [0.0, 0.0]


def test_worker_cap_does_not_change_results(tollbooth, monkeypatch):
    t = tollbooth_tpm(tollbooth, HIERARCHICAL_LABELS)
    serial = phi_all_states(t)
    monkeypatch.setenv("UNFOLD_SYNTH_THREADS", "3")
    assert phi_all_states(t) == serial


def test_node_cap_enforced():
    rng = random.Random(0)
    n = 6
    rows = np.array([[rng.randint(0, 1) for _ in range(n)] for _ in range(2**n)], dtype=float)
    t = Tpm(n, rows, np.ones((n, n), dtype=int))
    with pytest.raises(SystemTooLarge):
        compute_phi(t, "0" * n)


# -- cross-implementation anchors ------------------------------------------------
# Two standard three-node gate networks with well-known integrated-
# information values; frozen here as regression guards for the whole
# mechanism/partition/cut pipeline.


def test_anchor_or_copy_xor_network():
    rows = np.array(
        [
            [0, 0, 0],
            [0, 0, 1],
            [1, 0, 1],
            [1, 0, 0],
            [1, 1, 0],
            [1, 1, 1],
            [1, 1, 1],
            [1, 1, 0],
        ],
        dtype=float,
    )
    cm = np.array([[0, 0, 1], [1, 0, 1], [1, 1, 0]])
    r = compute_phi(Tpm(3, rows, cm), (1, 0, 0))
    assert r.big_phi == pytest.approx(2.3125, abs=2e-6)
    assert dict((m, p) for m, p in r.concepts) == {
        (1,): 0.25,
        (2,): 0.5,
        (0, 1): pytest.approx(1 / 3, abs=1e-6),
        (0, 1, 2): 0.5,
    }


def test_anchor_triple_xor_network():
    table = {}
    for idx in range(8):
        b = [(idx >> i) & 1 for i in range(3)]
        table["".join(map(str, b))] = f"{b[1] ^ b[2]}{b[0] ^ b[2]}{b[0] ^ b[1]}"
    r = compute_phi(tpm_from_csa(csa_from_table(table)), (0, 0, 0))
    assert r.big_phi == pytest.approx(1.875, abs=1e-9)
    assert [p for _, p in r.concepts] == [0.5, 0.5, 0.5]


# -- invariants -------------------------------------------------------------------


def test_repertoires_normalize(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    sys = _System(t, (0, 0, 0), None)
    for mech in [(), (0,), (1, 2), (0, 1, 2)]:
        for purview in [(0,), (0, 1), (0, 1, 2)]:
            for direction in ("cause", "effect"):
                rep = sys.repertoire(direction, mech, purview)
                assert rep.sum() == pytest.approx(1.0, abs=1e-12)


def permuted_tpm(t: Tpm, perm: list[int]) -> Tpm:
    n = t.n
    rows = np.zeros_like(t.on_probabilities)
    cm = np.zeros_like(t.cm)
    for idx in range(2**n):
        bits = [(idx >> i) & 1 for i in range(n)]
        new_idx = sum(bits[i] << perm[i] for i in range(n))
        for v in range(n):
            rows[new_idx, perm[v]] = t.on_probabilities[idx, v]
    for u in range(n):
        for v in range(n):
            cm[perm[u], perm[v]] = t.cm[u, v]
    return Tpm(n, rows, cm)


def test_phi_invariant_under_node_relabelling(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    perm = [2, 0, 1]
    t2 = permuted_tpm(t, perm)
    for code in ("000", "110"):
        bits = [int(c) for c in code]
        new_bits = [0, 0, 0]
        for i in range(3):
            new_bits[perm[i]] = bits[i]
        assert compute_phi(t, bits).big_phi == compute_phi(t2, new_bits).big_phi


def test_phi_never_negative():
    rng = random.Random(31)
    for seed in range(6):
        table = {}
        for idx in range(8):
            bits = "".join(str((idx >> i) & 1) for i in range(3))
            table[bits] = "".join(str(rng.randint(0, 1)) for _ in range(3))
        t = tpm_from_csa(csa_from_table(table))
        for r in phi_all_states(t):
            assert r.big_phi >= 0.0


# -- JSON -------------------------------------------------------------------------


def test_tpm_json_roundtrip(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    doc = tpm_to_json(t)
    assert doc["convention"] == "little-endian"
    back = tpm_from_json(doc)
    assert np.array_equal(back.on_probabilities, t.on_probabilities)
    assert np.array_equal(back.cm, t.cm)


def test_tpm_json_rejects_understated_connectivity(tollbooth):
    t = tollbooth_tpm(tollbooth, CONSCIOUS_LABELS)
    doc = tpm_to_json(t)
    doc["cm"] = [[0] * 3 for _ in range(3)]
    with pytest.raises(FormatError):
        tpm_from_json(doc)


def test_phi_report_shape(tollbooth):
    t = tollbooth_tpm(tollbooth, HIERARCHICAL_LABELS)
    report = phi_report_json(phi_all_states(t))
    assert set(report["states"]) == {format(v, "03b")[::-1] for v in range(8)}
    assert report["states"]["000"]["phi"] == 0.0
