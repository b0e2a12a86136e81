"""Exception hierarchy.

The CLI maps these onto exit codes: :class:`SpecFormatError` is an input
problem (2), :class:`InvariantError` an internal oracle failure (3), and
everything else a mathematical violation or exhausted budget (1).
"""


class RefinemonError(Exception):
    pass


class DomainError(RefinemonError, ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(DomainError):
    """A mathematical hypothesis of an operation does not hold.

    ``proven`` is False when the hypothesis could not be confirmed within a
    search budget, as opposed to having been refuted.
    """

    def __init__(self, message, proven=True):
        super().__init__(message)
        self.proven = proven


class InvariantError(RefinemonError):
    """A postcondition or witness that must exist was not produced."""


class BudgetError(RefinemonError):
    pass


class RankBudgetExceeded(BudgetError):
    def __init__(self, rank, budget, stage=None):
        self.rank = rank
        self.budget = budget
        self.stage = stage
        super().__init__(self._message())

    def _message(self):
        where = "" if self.stage is None else f" at stage {self.stage}"
        return f"rank {self.rank} exceeds rank budget {self.budget}{where}"

    def at_stage(self, stage):
        return RankBudgetExceeded(self.rank, self.budget, stage)


class InsufficientDepth(RefinemonError):
    """The tower is too short to exhibit a witness that must exist."""


class NotWeaklyDivisible(RefinemonError):
    def __init__(self, element, degree=2):
        self.element = element
        self.degree = degree
        super().__init__(f"not weakly divisible of degree {degree} at {element}")


class SpecFormatError(RefinemonError):
    """A monoid specification or tower document is malformed."""
