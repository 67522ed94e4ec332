"""State-by-node dynamics and integrated-information (big Phi) analysis."""

from .tpm import Tpm, tpm_from_csa, tpm_from_json, tpm_to_json
from .phi import PhiResult, SystemCut, compute_phi, phi_all_states, phi_report_json

__all__ = [
    "Tpm",
    "tpm_from_csa",
    "tpm_from_json",
    "tpm_to_json",
    "PhiResult",
    "SystemCut",
    "compute_phi",
    "phi_all_states",
    "phi_report_json",
]
