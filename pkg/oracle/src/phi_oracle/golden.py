"""Golden-file generation against a reference phi implementation.

A golden file freezes, for one TPM, the per-state big-phi values produced
by the pinned reference tool, together with enough metadata (tool name,
version, settings digest, state-index convention) for a consumer to
decide whether the numbers are comparable.  Serialization is canonical,
so regeneration with the same tool version is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

CONVENTION = "little-endian"


class OracleError(Exception):
    """Base class for golden-file generation failures."""


class ToolUnavailable(OracleError):
    """The reference implementation is not importable."""


class ConventionMismatch(OracleError):
    """The TPM file declares a different state-index convention."""


class SignMismatch(OracleError):
    """Computed values contradict the expected sign verdict."""


@dataclass(frozen=True)
class Backend:
    """A phi computation service plus its identifying metadata.

    ``compute(tpm_rows, cm, state) -> float | None`` returns None for
    states the tool refuses to evaluate (e.g. unreachable ones).
    """

    tool: str
    version: str
    settings_digest: str
    compute: Callable[[list, list, tuple], Optional[float]]


@dataclass(frozen=True)
class GoldenFile:
    tool: str
    version: str
    settings_digest: str
    convention: str
    phi: dict[str, Optional[float]]

    def to_json(self) -> dict:
        return {
            "tool": self.tool,
            "version": self.version,
            "settings_digest": self.settings_digest,
            "convention": self.convention,
            "phi": dict(sorted(self.phi.items())),
        }


def pyphi_backend() -> Backend:
    """Wrap the PyPhi package (with its default settings) as a backend."""
    try:
        import pyphi
    except ImportError as exc:
        raise ToolUnavailable(
            "the 'pyphi' package is not installed; install the [pyphi] extra"
        ) from exc
    import numpy as np

    try:
        settings = str(pyphi.config.snapshot())
    except AttributeError:
        settings = str(
            {k: getattr(pyphi.config, k) for k in dir(pyphi.config) if k.isupper()}
        )
    digest = "sha256:" + hashlib.sha256(settings.encode()).hexdigest()

    def compute(tpm_rows, cm, state):
        network = pyphi.Network(np.array(tpm_rows), cm=np.array(cm))
        try:
            subsystem = pyphi.Subsystem(network, state, network.node_indices)
        except pyphi.exceptions.StateUnreachableError:
            return None
        return float(pyphi.compute.phi(subsystem))

    return Backend("pyphi", pyphi.__version__, digest, compute)


def read_tpm(path: Path) -> tuple[list, list, int]:
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict) or "tpm" not in doc or "nodes" not in doc:
        raise OracleError(f"{path} is not a TPM file")
    if doc.get("convention", CONVENTION) != CONVENTION:
        raise ConventionMismatch(
            f"{path} declares convention {doc.get('convention')!r}, need {CONVENTION!r}"
        )
    n = len(doc["nodes"])
    rows = doc["tpm"]
    if len(rows) != 2**n or any(len(r) != n for r in rows):
        raise OracleError(f"{path}: TPM shape does not match the node list")
    cm = doc.get("cm") or [[1] * n for _ in range(n)]
    return rows, cm, n


def _code(idx: int, n: int) -> str:
    return "".join(str((idx >> i) & 1) for i in range(n))


def generate_golden(
    tpm_path: Path,
    output_path: Path,
    backend: Optional[Backend] = None,
    expect_sign: Optional[str] = None,
) -> GoldenFile:
    """Compute per-state phi for one TPM file and write the golden file.

    ``expect_sign`` ("positive" or "zero") guards paper-anchored systems:
    a golden file contradicting the known verdict is refused rather than
    recorded.
    """
    if backend is None:
        backend = pyphi_backend()
    rows, cm, n = read_tpm(tpm_path)
    phi: dict[str, Optional[float]] = {}
    for idx in range(2**n):
        state = tuple((idx >> i) & 1 for i in range(n))
        phi[_code(idx, n)] = backend.compute(rows, cm, state)
    values = [v for v in phi.values() if v is not None]
    if expect_sign == "positive" and any(v <= 0 for v in values):
        raise SignMismatch(f"{tpm_path}: expected phi > 0 for all states")
    if expect_sign == "zero" and any(abs(v) > 1e-9 for v in values):
        raise SignMismatch(f"{tpm_path}: expected phi = 0 for all states")
    golden = GoldenFile(
        backend.tool, backend.version, backend.settings_digest, CONVENTION, phi
    )
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(json.dumps(golden.to_json(), indent=2, sort_keys=True) + "\n")
    return golden


EXPECTATIONS = {
    "tollbooth_conscious": "positive",
    "tollbooth_hierarchical": "zero",
}


def generate_batch(
    tpm_dir: Path, output_dir: Path, backend: Optional[Backend] = None
) -> list[Path]:
    """Golden files for every TPM in a directory (same file names).

    Paper-anchored systems are recognized by name and sign-checked
    before their fixtures are accepted.
    """
    if backend is None:
        backend = pyphi_backend()
    written = []
    for tpm_path in sorted(Path(tpm_dir).glob("*.json")):
        out = Path(output_dir) / tpm_path.name
        expect = EXPECTATIONS.get(tpm_path.stem)
        generate_golden(tpm_path, out, backend, expect)
        written.append(out)
    return written
