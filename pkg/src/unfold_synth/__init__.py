"""Sequential-circuit synthesis from finite-state automata, isomorphic
unfolding into feed-forward form, and integrated-information analysis
of the resulting node-level dynamics."""

from .automaton import Automaton, are_isomorphic, orbit, validate
from .partitions import (
    NestedSequence,
    Partition,
    encoding_from_sequence,
    find_nested_sequence,
    is_preserved,
    is_preserved_block,
    validate_sequence,
)
from .encoding import (
    Csa,
    DependencyGraph,
    Encoding,
    dependency_graph,
    derive_csa,
    encode,
    is_feed_forward,
    random_encoding,
)
from .synthesis import (
    Basis,
    BooleanExpr,
    ExcitationTable,
    Netlist,
    build_netlist,
    excitation_from_csa,
    minimize,
)
from .circuit import run, step, verify_against_fsa
from .iit import Tpm, compute_phi, phi_all_states, tpm_from_csa

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "validate",
    "orbit",
    "are_isomorphic",
    "Partition",
    "NestedSequence",
    "is_preserved",
    "is_preserved_block",
    "find_nested_sequence",
    "encoding_from_sequence",
    "validate_sequence",
    "Encoding",
    "Csa",
    "DependencyGraph",
    "encode",
    "random_encoding",
    "derive_csa",
    "dependency_graph",
    "is_feed_forward",
    "ExcitationTable",
    "BooleanExpr",
    "Netlist",
    "Basis",
    "excitation_from_csa",
    "minimize",
    "build_netlist",
    "step",
    "run",
    "verify_against_fsa",
    "Tpm",
    "tpm_from_csa",
    "compute_phi",
    "phi_all_states",
    "__version__",
]
