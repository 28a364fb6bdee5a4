"""Exception types shared across the package.

Construction errors carry the offending witness (element or triple) so a
failing table can be debugged without re-running the validation.
"""

from __future__ import annotations


class WordmapsError(Exception):
    """Base class for all package errors."""


class MalformedTable(WordmapsError):
    """Multiplication table is not square or has out-of-range entries."""


class NoIdentity(WordmapsError):
    """No two-sided identity element exists in the table."""


class NotAssociative(WordmapsError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        super().__init__(f"associativity fails on triple {triple}")


class NoInverse(WordmapsError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} has no inverse")


class OrderLimitExceeded(WordmapsError):
    """A group constructor would exceed the configured order cap."""


class VariableOutOfRange(WordmapsError):
    """A word syllable refers to a variable outside 1..d."""


class TableCapExceeded(WordmapsError):
    """|G|^d exceeds the configured function-table cap."""


class ClosureCapExceeded(WordmapsError):
    """The word-map closure grew past the configured cap."""


class EnumerationCapExceeded(WordmapsError):
    """An exhaustive enumeration would exceed the configured cap."""


class NotDistinct(WordmapsError):
    """Witness construction requires two distinct admissible functions."""


class NotAbelian(WordmapsError):
    """Operation is only defined for abelian groups."""


class NotNilpotent(WordmapsError):
    """Operation is only defined for nilpotent groups."""


class ClassOutOfSupportedRange(WordmapsError):
    """Requested nilpotency class exceeds the collection limit."""


class WordSyntaxError(WordmapsError):
    """A word expression could not be parsed."""


class GroupSpecError(WordmapsError):
    """A group specification string or file could not be interpreted."""
