"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class StructuralError(DomainError):
    """A family or certificate violates a structural invariant."""


class FamilyFormatError(DomainError):
    """A family or certificate file is malformed."""


class CapacityError(Exception):
    """A computation would exceed the configured word-size or memory budget."""


class NotDisjointError(Exception):
    """Two progressions assumed disjoint share an element.

    Carries the offending pair and their smallest common nonnegative element
    so callers can surface a concrete counterexample.
    """

    def __init__(self, first, second, common):
        self.first = first
        self.second = second
        self.common = common
        super().__init__(
            f"progressions {first} and {second} intersect at {common}"
        )
