#!/usr/bin/env python3
"""Write the node-level TPM fixtures consumed by the golden-file oracle.

Produces, under fixtures/tpms/:
  - tollbooth_conscious.json / tollbooth_hierarchical.json
  - random3_seed000.json .. random3_seed049.json (seeded deterministic
    3-node systems for fuzz cross-validation)

Run from the repository root:  python scripts/export_tpm_fixtures.py
"""

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from unfold_synth.automaton import Automaton, automaton_from_json
from unfold_synth.encoding import derive_csa, encode, encoding_from_json
from unfold_synth.iit import tpm_from_csa, tpm_to_json

FIXTURES = ROOT / "fixtures"
OUT = FIXTURES / "tpms"

RANDOM_SEED_BASE = 1000
RANDOM_COUNT = 50


def random_code_table(seed: int, n: int = 3) -> dict[str, str]:
    rng = random.Random(RANDOM_SEED_BASE + seed)
    table = {}
    for idx in range(2**n):
        code = "".join(str((idx >> i) & 1) for i in range(n))
        table[code] = "".join(str(rng.randint(0, 1)) for _ in range(n))
    return table


def dump(name: str, doc: dict) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path.relative_to(ROOT)}")


def main() -> int:
    tollbooth = automaton_from_json((FIXTURES / "tollbooth.json").read_text())
    for tag, labels_file in [
        ("conscious", "conscious_labels.json"),
        ("hierarchical", "hierarchical_labels.json"),
    ]:
        e = encoding_from_json((FIXTURES / labels_file).read_text())
        csa = derive_csa(tollbooth, encode(tollbooth, e.labels))
        dump(f"tollbooth_{tag}.json", tpm_to_json(tpm_from_csa(csa)))
    for seed in range(RANDOM_COUNT):
        table = random_code_table(seed)
        states = tuple(sorted(table))
        a = Automaton(states, dict(table))
        csa = derive_csa(a, encode(a, {s: s for s in states}))
        dump(f"random3_seed{seed:03d}.json", tpm_to_json(tpm_from_csa(csa)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
