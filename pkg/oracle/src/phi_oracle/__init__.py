"""Golden-file harness around a reference integrated-information tool."""

from .golden import (
    Backend,
    ConventionMismatch,
    GoldenFile,
    OracleError,
    SignMismatch,
    ToolUnavailable,
    generate_batch,
    generate_golden,
    pyphi_backend,
    read_tpm,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "GoldenFile",
    "OracleError",
    "ToolUnavailable",
    "ConventionMismatch",
    "SignMismatch",
    "generate_golden",
    "generate_batch",
    "pyphi_backend",
    "read_tpm",
    "__version__",
]
