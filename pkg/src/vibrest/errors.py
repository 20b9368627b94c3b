"""Exception hierarchy shared by all vibrest modules."""


class VibrestError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(VibrestError, ValueError):
    """Operands act on different numbers of qubits."""


class ValidationError(VibrestError, ValueError):
    """Input data violates a schema or a physical constraint."""


class ResourceLimitError(VibrestError, RuntimeError):
    """A computation would exceed its configured work budget."""


class DegenerateInputError(VibrestError, ValueError):
    """Input is well-formed but too degenerate to cost (e.g. zero norm)."""
