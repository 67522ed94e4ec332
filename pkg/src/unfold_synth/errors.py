"""Exception hierarchy shared across the toolkit."""


class UnfoldSynthError(Exception):
    """Base class for all toolkit errors."""


class FormatError(UnfoldSynthError):
    """Malformed or unrecognized JSON input."""


class UnknownState(UnfoldSynthError):
    """A state name that is not part of the automaton."""


class PartitionMismatch(UnfoldSynthError):
    """A partition whose blocks do not cover the automaton's state set."""


class BlockNotInPartition(UnfoldSynthError):
    """A block lookup against a partition that does not contain it."""


class NotPowerOfTwo(UnfoldSynthError):
    """The automaton's state count is not a power of two."""


class NoIsomorphicDecomposition(UnfoldSynthError):
    """No nested sequence of even-split preserved partitions exists."""


class DuplicateLabel(UnfoldSynthError):
    """Two states assigned the same binary label."""


class WidthMismatch(UnfoldSynthError):
    """A binary label whose length differs from the declared width."""


class MissingState(UnfoldSynthError):
    """A label mapping that does not line up with the automaton's states."""


class InsufficientWidth(UnfoldSynthError):
    """Fewer codes than states: 2^width < |states|."""


class ConflictingFixedLabels(UnfoldSynthError):
    """Pinned label assignments that cannot be satisfied."""


class NonIsomorphicCsa(UnfoldSynthError):
    """A CSA whose care set does not cover all 2^width codes."""


class DanglingWire(UnfoldSynthError):
    """A netlist wire reference with no driver."""


class SystemTooLarge(UnfoldSynthError):
    """Node count beyond the exhaustive-enumeration cap."""
