"""Exceptions raised by the groupoid-galois library."""

from typing import List


class GroupoidError(Exception):
    """Base class for all library errors."""


class NotASubgroupError(GroupoidError):
    """A set of automorphisms or morphisms is not closed under composition."""


class NotBlockExpressible(GroupoidError):
    """A constraint system has no twisted block solution space."""


class SizeGuardExceeded(GroupoidError):
    """Enumeration refused because the input is too large."""


class PreconditionError(GroupoidError):
    """An operation was called outside its documented domain."""


class NonGlobalActionError(PreconditionError):
    """A construction that needs a global action received a partial one."""


class GroupTypeRequired(PreconditionError):
    """A group-type witness is needed but none exists."""


class HypothesisUnmet(PreconditionError):
    """The extension is not (known to be) a partial Galois extension."""


class InconsistencyError(GroupoidError):
    """Two computations that must agree did not."""


class SpecError(GroupoidError):
    """A .gpd document could not be turned into a SpecDocument."""

    def __init__(self, diagnostics: List):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first else "invalid document")
