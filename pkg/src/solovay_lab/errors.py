"""Exception types shared across the package.

Every domain-level failure derives from :class:`DomainError`; the CLI maps
those to exit status 2 and prints ``str(err)`` (the structured name plus
``key=value`` details) on stderr.
"""

from __future__ import annotations


class DomainError(Exception):
    """A construction was asked to do something its contract forbids."""

    def __init__(self, **details):
        self.details = details
        super().__init__(self._render())

    def _render(self) -> str:
        parts = [type(self).__name__]
        parts.extend(f"{k}={v}" for k, v in self.details.items())
        return " ".join(parts)


class NoWitness(DomainError):
    pass


class WeightOverflow(DomainError):
    def __init__(self, index: int, label: str, length: int):
        self.index = index
        self.label = label
        self.length = length
        super().__init__(index=index, label=label, length=length)


class NotInRange(DomainError):
    pass


class BudgetTooSmall(DomainError):
    pass


class HorizonTooSmall(DomainError):
    pass


class InvalidPartition(DomainError):
    pass


class PreconditionFailed(DomainError):
    pass


class NonMonotonePositions(DomainError):
    pass


class FunctionalMismatch(DomainError):
    pass


class EmptySelection(DomainError):
    pass


class NotCrossed(DomainError):
    pass
