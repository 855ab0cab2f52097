"""Exception types shared across the package."""


class ToricFloerError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(ToricFloerError):
    """Malformed polytope input (bad JSON shape, floats, unknown name)."""


class InvalidPolytope(ToricFloerError):
    """Structurally valid input that fails the polytope requirements."""


class NotInterior(ToricFloerError):
    """A fiber point that does not lie strictly inside the polytope."""


class NotBalanced(ToricFloerError):
    """An operation that needs a balanced fiber got an unbalanced one."""


class NoConvergence(ToricFloerError):
    """The critical point search ran out of iterations or step damping."""


class DimensionMismatch(ToricFloerError):
    """Operands built over different underlying dimensions."""
