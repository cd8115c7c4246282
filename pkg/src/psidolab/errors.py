"""Exception types raised across the package."""


class PsidolabError(Exception):
    """Base class for all package errors."""


class TagError(PsidolabError, TypeError):
    """A sampled function lives on the wrong space (X, Xstar or Phase)."""


class ShapeError(PsidolabError, ValueError):
    """Grids, tags or array shapes do not match."""


class DomainError(PsidolabError, ValueError):
    """A scalar argument lies outside the admissible range."""


class NonFiniteError(PsidolabError, ValueError):
    """An evaluator produced NaN or infinity on the lattice."""


class PreconditionError(PsidolabError, ValueError):
    """An operator argument violates a structural precondition."""


class ResourceError(PsidolabError, MemoryError):
    """A dense computation would exceed its configured budget."""


class NumericalError(PsidolabError, ArithmeticError):
    """A linear-algebra routine failed to converge."""
